#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fisheye/error.hpp"
#include "fisheye/geometry.hpp"

namespace fisheye {

enum class MapKind : std::uint8_t { kFlow = 0, kDvm = 1 };

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(Vec2, Vec2) = default;
};

/// H x W grid of 2-vectors, row-major. The Kind parameter keeps distortion
/// vector maps and flow maps from being mixed up.
template <MapKind Kind>
class VectorMap {
 public:
  static constexpr MapKind kind = Kind;

  VectorMap() = default;
  VectorMap(int height, int width, Vec2 fill = {})
      : height_(height), width_(width) {
    if (height < 1 || width < 1) {
      throw Error(Errc::kInvalidArgument, "map dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(height) * width, fill);
  }

  int height() const { return height_; }
  int width() const { return width_; }

  Vec2& at(int y, int x) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  const Vec2& at(int y, int x) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<Vec2> values() { return data_; }
  std::span<const Vec2> values() const { return data_; }

  friend bool operator==(const VectorMap&, const VectorMap&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<Vec2> data_;
};

/// Per-pixel (r_d / r_c) * unit vector from the optical center to the pixel.
using DistortionVectorMap = VectorMap<MapKind::kDvm>;

/// Per rectified pixel, the absolute (x, y) position to sample in the
/// distorted image.
using FlowMap = VectorMap<MapKind::kFlow>;

}  // namespace fisheye
