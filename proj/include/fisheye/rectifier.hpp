#pragma once

#include "fisheye/image.hpp"
#include "fisheye/maps.hpp"

namespace fisheye {

/// out(u, v) = src bilinearly sampled at flow(u, v) when that point lies in
/// [0, W-1] x [0, H-1] (boundary included), otherwise (0, 0, 0). The output
/// takes the flow map's dimensions.
Image bilinear_sample(const Image& src, const FlowMap& flow);

/// Same sampling rule without quantization.
ImageD bilinear_sample(const ImageD& src, const FlowMap& flow);

/// Overload that checks the flow against the requested output size and
/// throws kDimensionMismatch when they differ.
Image bilinear_sample(const Image& src, const FlowMap& flow, int out_height,
                      int out_width);

/// 1 where flow(u, v) lands inside a src_height x src_width frame.
Mask valid_mask(const FlowMap& flow, int src_height, int src_width);

}  // namespace fisheye
