#pragma once

#include <cmath>
#include <cstddef>

namespace fisheye::detail {

// Samples a grid at continuous (x, y); fetch(row, col, channel) reads one
// value. Points in the closed box [0, W-1] x [0, H-1] are valid; at the far
// edges the missing neighbor gets weight zero. Returns false (out untouched)
// otherwise.
template <typename Fetch>
bool bilinear_at(Fetch&& fetch, int height, int width, int channels, double x,
                 double y, double* out) {
  if (!(x >= 0.0 && x <= width - 1 && y >= 0.0 && y <= height - 1)) {
    return false;
  }
  int x0 = static_cast<int>(std::floor(x));
  int y0 = static_cast<int>(std::floor(y));
  if (x0 > width - 2) x0 = width > 1 ? width - 2 : 0;
  if (y0 > height - 2) y0 = height > 1 ? height - 2 : 0;
  const double ax = x - x0;
  const double ay = y - y0;
  const int x1 = width > 1 ? x0 + 1 : x0;
  const int y1 = height > 1 ? y0 + 1 : y0;
  for (int c = 0; c < channels; ++c) {
    const double top = (1.0 - ax) * fetch(y0, x0, c) + ax * fetch(y0, x1, c);
    const double bottom = (1.0 - ax) * fetch(y1, x0, c) + ax * fetch(y1, x1, c);
    out[c] = (1.0 - ay) * top + ay * bottom;
  }
  return true;
}

template <typename T>
bool bilinear_interleaved(const T* data, int height, int width, int channels, double x,
                 double y, double* out) {
  const auto fetch = [&](int r, int col, int c) -> double {
    return data[(static_cast<std::size_t>(r) * width + col) * channels + c];
  };
  return bilinear_at(fetch, height, width, channels, x, y, out);
}

}  // namespace fisheye::detail
