#include "fisheye/labels.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fisheye/bilinear.hpp"
#include "fisheye/error.hpp"

namespace fisheye {

namespace {

// Largest normalized distance from `center` to any corner pixel center.
double corner_radius(Point2 center, double r_norm, int height, int width) {
  const std::array<Point2, 4> corners{Point2{0.0, 0.0}, Point2{width - 1.0, 0.0},
                                      Point2{0.0, height - 1.0},
                                      Point2{width - 1.0, height - 1.0}};
  double r = 0.0;
  for (const Point2 c : corners) r = std::max(r, norm(c - center));
  return r / r_norm;
}

void check_camera(const CameraModel& cam) {
  if (!(cam.r_norm > 0.0) || !std::isfinite(cam.r_norm)) {
    throw Error(Errc::kInvalidArgument, "camera r_norm must be positive");
  }
  if (!(cam.params.k1 > 0.0)) {
    throw Error(Errc::kInvalidArgument, "camera k1 must be positive");
  }
}

template <MapKind Kind, typename ValueFn>
VectorMap<Kind> resample(const VectorMap<Kind>& src, const ViewTransform& t,
                         ValueFn value_fn) {
  t.validate(src.height(), src.width());
  VectorMap<Kind> out(t.out_side, t.out_side);
  const auto fetch = [&](int r, int c, int ch) {
    const Vec2& v = src.at(r, c);
    return ch == 0 ? v.x : v.y;
  };
  for (int v = 0; v < t.out_side; ++v) {
    for (int u = 0; u < t.out_side; ++u) {
      const Point2 p = t.preimage({double(u), double(v)});
      // Float rounding can push the far edge a hair past the crop.
      const double px = std::min(p.x, double(t.crop_x + t.crop_side - 1));
      const double py = std::min(p.y, double(t.crop_y + t.crop_side - 1));
      double sampled[2] = {0.0, 0.0};
      detail::bilinear_at(fetch, src.height(), src.width(), 2, px, py, sampled);
      out.at(v, u) = value_fn(Vec2{sampled[0], sampled[1]});
    }
  }
  return out;
}

}  // namespace

void ViewTransform::validate(int height, int width) const {
  if (crop_side < 2 || out_side < 2) {
    throw Error(Errc::kInvalidTransform, "crop and output sides must be >= 2");
  }
  if (crop_x < 0 || crop_y < 0 || crop_x + crop_side > width ||
      crop_y + crop_side > height) {
    throw Error(Errc::kInvalidTransform, "crop exceeds the source frame");
  }
}

CameraModel transformed_camera(const CameraModel& cam, const ViewTransform& t) {
  CameraModel out = cam;
  out.center_d = t.forward(cam.center_d);
  out.r_norm = cam.r_norm * t.scale();
  return out;
}

DistortionVectorMap compute_dvm(const CameraModel& cam, int height, int width) {
  check_camera(cam);
  require_monotone(cam.params,
                   corner_radius(cam.center_d, cam.r_norm, height, width));
  DistortionVectorMap dvm(height, width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Point2 offset = Point2{double(x), double(y)} - cam.center_d;
      const double dist = norm(offset);
      if (dist == 0.0) continue;
      const double ratio = 1.0 / radial_gain(cam.params, dist / cam.r_norm);
      const double s = kDvmOrientation * ratio / dist;
      dvm.at(y, x) = {offset.x * s, offset.y * s};
    }
  }
  return dvm;
}

DistortionVectorMap unit_dvm(int height, int width) {
  DistortionVectorMap dvm(height, width);
  const Point2 center{(width - 1) / 2.0, (height - 1) / 2.0};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Point2 offset = Point2{double(x), double(y)} - center;
      const double dist = norm(offset);
      if (dist == 0.0) continue;
      dvm.at(y, x) = {kDvmOrientation * offset.x / dist,
                      kDvmOrientation * offset.y / dist};
    }
  }
  return dvm;
}

FlowMap compute_backward_flow(const CameraModel& cam, int height, int width,
                              const InvertOptions& opts) {
  check_camera(cam);
  const RadialInverse inverse(
      cam.params, corner_radius(cam.center_c, cam.r_norm, height, width), opts);
  const bool aligned = cam.center_c == cam.center_d;
  FlowMap flow(height, width);
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      const Point2 p{double(u), double(v)};
      const Point2 offset = p - cam.center_c;
      const double r_c = norm(offset) / cam.r_norm;
      Point2 src = cam.center_d;
      if (r_c > 0.0) {
        const double r_d = inverse(r_c);
        src = (r_d == r_c && aligned) ? p
                                      : cam.center_d + offset * (r_d / r_c);
      }
      flow.at(v, u) = {src.x, src.y};
    }
  }
  return flow;
}

FlowMap identity_flow(int height, int width) {
  FlowMap flow(height, width);
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) flow.at(v, u) = {double(u), double(v)};
  }
  return flow;
}

DistortionVectorMap transform_dvm(const DistortionVectorMap& src,
                                  const ViewTransform& t) {
  return resample(src, t, [](Vec2 v) { return v; });
}

FlowMap transform_flow(const FlowMap& src, const ViewTransform& t) {
  const double scale = t.scale();
  return resample(src, t, [&](Vec2 f) {
    return Vec2{(f.x - t.crop_x) * scale, (f.y - t.crop_y) * scale};
  });
}

}  // namespace fisheye
