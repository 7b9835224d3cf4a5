#include "fisheye/rectifier.hpp"

#include <cmath>
#include <vector>

#include "fisheye/bilinear.hpp"

namespace fisheye {

ImageD to_scalar(const Image& img) {
  ImageD out(img.height(), img.width(), img.channels());
  auto dst = out.pixels();
  auto src = img.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  return out;
}

std::uint8_t quantize(double value) {
  const double r = std::round(value);
  if (!(r > 0.0)) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

Image quantize(const ImageD& img) {
  if (img.channels() != kRgb) {
    throw Error(Errc::kInvalidArgument, "quantize expects an RGB raster");
  }
  Image out(img.height(), img.width());
  auto dst = out.pixels();
  auto src = img.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = quantize(src[i]);
  return out;
}

namespace {

template <typename T, typename Store>
void sample_into(const Raster<T>& src, const FlowMap& flow, Store store) {
  if (src.empty()) throw Error(Errc::kInvalidArgument, "empty source image");
  std::vector<double> px(src.channels());
  for (int v = 0; v < flow.height(); ++v) {
    for (int u = 0; u < flow.width(); ++u) {
      const Vec2 f = flow.at(v, u);
      if (detail::bilinear_interleaved(src.data(), src.height(), src.width(),
                                       src.channels(), f.x, f.y, px.data())) {
        store(v, u, px.data());
      }
    }
  }
}

}  // namespace

Image bilinear_sample(const Image& src, const FlowMap& flow) {
  Image out(flow.height(), flow.width());
  sample_into(src, flow, [&](int v, int u, const double* px) {
    for (int c = 0; c < kRgb; ++c) out.at(v, u, c) = quantize(px[c]);
  });
  return out;
}

ImageD bilinear_sample(const ImageD& src, const FlowMap& flow) {
  ImageD out(flow.height(), flow.width(), src.channels());
  sample_into(src, flow, [&](int v, int u, const double* px) {
    for (int c = 0; c < src.channels(); ++c) out.at(v, u, c) = px[c];
  });
  return out;
}

Image bilinear_sample(const Image& src, const FlowMap& flow, int out_height,
                      int out_width) {
  if (flow.height() != out_height || flow.width() != out_width) {
    throw Error(Errc::kDimensionMismatch,
                "flow map size differs from the requested output");
  }
  return bilinear_sample(src, flow);
}

Mask valid_mask(const FlowMap& flow, int src_height, int src_width) {
  Mask mask(flow.height(), flow.width(), 1);
  for (int v = 0; v < flow.height(); ++v) {
    for (int u = 0; u < flow.width(); ++u) {
      const Vec2 f = flow.at(v, u);
      mask.at(v, u) = f.x >= 0.0 && f.x <= src_width - 1 && f.y >= 0.0 &&
                      f.y <= src_height - 1;
    }
  }
  return mask;
}

}  // namespace fisheye
