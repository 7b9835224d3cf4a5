#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fisheye/error.hpp"

namespace fisheye {

/// Row-major, channel-interleaved pixel grid.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int height, int width, int channels, T fill = T{})
      : height_(height), width_(width), channels_(channels) {
    if (height < 1 || width < 1 || channels < 1) {
      throw Error(Errc::kInvalidArgument, "raster dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
  }

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }

  T& at(int y, int x, int c = 0) { return data_[index(y, x, c)]; }
  const T& at(int y, int x, int c = 0) const { return data_[index(y, x, c)]; }

  std::span<T> pixels() { return data_; }
  std::span<const T> pixels() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<T> data_;
};

inline constexpr int kRgb = 3;

/// 8-bit RGB image. Dimensions are at least 2x2.
class Image : public Raster<std::uint8_t> {
 public:
  Image() = default;
  Image(int height, int width, std::uint8_t fill = 0)
      : Raster(check(height), check(width), kRgb, fill) {}

 private:
  static int check(int side) {
    if (side < 2) throw Error(Errc::kInvalidArgument, "image side must be >= 2");
    return side;
  }
};

/// RGB image at scalar precision, used before quantization.
using ImageD = Raster<double>;

/// Single channel 0/1 validity mask.
using Mask = Raster<std::uint8_t>;

ImageD to_scalar(const Image& img);

/// Round half away from zero and clamp to [0, 255].
std::uint8_t quantize(double value);
Image quantize(const ImageD& img);

}  // namespace fisheye
