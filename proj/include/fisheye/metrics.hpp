#pragma once

#include <limits>
#include <optional>

#include "fisheye/image.hpp"

namespace fisheye {

struct MetricConfig {
  double data_range = 255.0;
  int ssim_window = 11;
  double ssim_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
};

/// Returned by psnr for identical inputs.
inline constexpr double kPsnrInfinite = std::numeric_limits<double>::infinity();

/// 10 log10(range^2 / MSE), the MSE pooled over every (masked) pixel and
/// channel.
double psnr(const Image& a, const Image& b, const MetricConfig& cfg = {},
            const Mask* mask = nullptr);

/// Gaussian-window SSIM. Windows are evaluated at every center where the
/// full window fits; with a mask only centers whose mask value is nonzero are
/// averaged. Channels are scored separately and averaged.
double ssim(const Image& a, const Image& b, const MetricConfig& cfg = {},
            const Mask* mask = nullptr);

}  // namespace fisheye
