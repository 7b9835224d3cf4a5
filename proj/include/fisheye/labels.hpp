#pragma once

#include "fisheye/geometry.hpp"
#include "fisheye/maps.hpp"

namespace fisheye {

/// Square crop of the source frame followed by an align-corners resize to
/// out_side x out_side. Output pixel q samples the source at
/// crop origin + q / scale.
struct ViewTransform {
  int crop_x = 0;
  int crop_y = 0;
  int crop_side = 2;
  int out_side = 2;

  double scale() const {
    return static_cast<double>(out_side - 1) / (crop_side - 1);
  }
  Point2 origin() const { return {double(crop_x), double(crop_y)}; }

  /// Source-frame position sampled by output pixel q.
  Point2 preimage(Point2 q) const { return origin() + q * (1.0 / scale()); }

  /// Source-frame position expressed in output coordinates.
  Point2 forward(Point2 p) const { return (p - origin()) * scale(); }

  /// Throws kInvalidTransform unless the crop lies inside a height x width
  /// frame and both sides are >= 2.
  void validate(int height, int width) const;

  friend bool operator==(const ViewTransform&, const ViewTransform&) = default;
};

/// Camera seen through a ViewTransform: distorted-frame center mapped into
/// the output frame and r_norm scaled with it.
CameraModel transformed_camera(const CameraModel& cam, const ViewTransform& t);

/// Direction convention for distortion vectors: they point from the optical
/// center towards the pixel. +1 keeps that orientation; flipping it would be
/// a one-line change here.
inline constexpr double kDvmOrientation = 1.0;

DistortionVectorMap compute_dvm(const CameraModel& cam, int height, int width);

/// Label of a distortion-free image: unit vectors along the line through the
/// geometric center, zero at the center itself.
DistortionVectorMap unit_dvm(int height, int width);

FlowMap compute_backward_flow(const CameraModel& cam, int height, int width,
                              const InvertOptions& opts = {});

/// flow(u, v) = (u, v).
FlowMap identity_flow(int height, int width);

/// Geometric crop-and-resize of a DVM; vector values are scale invariant and
/// are interpolated component-wise without renormalization.
DistortionVectorMap transform_dvm(const DistortionVectorMap& src,
                                  const ViewTransform& t);

/// Crop-and-resize of a flow map, with the absolute coordinates remapped into
/// the output frame: f' = (f - crop origin) * scale.
FlowMap transform_flow(const FlowMap& src, const ViewTransform& t);

}  // namespace fisheye
