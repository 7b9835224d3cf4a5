#include "fisheye/metrics.hpp"

#include <cmath>
#include <vector>

#include "fisheye/error.hpp"

namespace fisheye {

namespace {

void check_pair(const Image& a, const Image& b, const Mask* mask) {
  if (a.height() != b.height() || a.width() != b.width() ||
      a.channels() != b.channels()) {
    throw Error(Errc::kDimensionMismatch, "images differ in size");
  }
  if (mask && (mask->height() != a.height() || mask->width() != a.width())) {
    throw Error(Errc::kDimensionMismatch, "mask differs from image size");
  }
}

void check_config(const MetricConfig& cfg) {
  if (!(cfg.data_range > 0.0) || cfg.ssim_window < 1 ||
      cfg.ssim_window % 2 == 0 || !(cfg.ssim_sigma > 0.0) || !(cfg.k1 > 0.0) ||
      !(cfg.k2 > 0.0)) {
    throw Error(Errc::kInvalidArgument, "invalid metric configuration");
  }
}

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> w(size);
  const int half = size / 2;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - half;
    w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Separable "valid" filtering of one plane: output is
// (h - size + 1) x (w - size + 1).
std::vector<double> filter_valid(const std::vector<double>& plane, int h, int w,
                                 const std::vector<double>& kernel) {
  const int k = static_cast<int>(kernel.size());
  const int ow = w - k + 1;
  const int oh = h - k + 1;
  std::vector<double> tmp(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += kernel[i] * plane[y * w + x + i];
      tmp[y * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += kernel[i] * tmp[(y + i) * ow + x];
      out[y * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

double psnr(const Image& a, const Image& b, const MetricConfig& cfg,
            const Mask* mask) {
  check_pair(a, b, mask);
  check_config(cfg);
  double sse = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (mask && !mask->at(y, x)) continue;
      for (int c = 0; c < a.channels(); ++c) {
        const double d = double(a.at(y, x, c)) - double(b.at(y, x, c));
        sse += d * d;
        ++n;
      }
    }
  }
  if (n == 0) throw Error(Errc::kEmptyMask, "no pixels selected by the mask");
  const double mse = sse / static_cast<double>(n);
  if (mse == 0.0) return kPsnrInfinite;
  return 10.0 * std::log10(cfg.data_range * cfg.data_range / mse);
}

double ssim(const Image& a, const Image& b, const MetricConfig& cfg,
            const Mask* mask) {
  check_pair(a, b, mask);
  check_config(cfg);
  const int h = a.height();
  const int w = a.width();
  const int k = cfg.ssim_window;
  if (h < k || w < k) {
    throw Error(Errc::kTooSmall, "image smaller than the SSIM window");
  }
  const auto kernel = gaussian_kernel(k, cfg.ssim_sigma);
  const double c1 = (cfg.k1 * cfg.data_range) * (cfg.k1 * cfg.data_range);
  const double c2 = (cfg.k2 * cfg.data_range) * (cfg.k2 * cfg.data_range);
  const int half = k / 2;
  const int oh = h - k + 1;
  const int ow = w - k + 1;

  const std::size_t n = static_cast<std::size_t>(h) * w;
  std::vector<double> pa(n), pb(n), paa(n), pbb(n), pab(n);
  double total = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        pa[i] = a.at(y, x, c);
        pb[i] = b.at(y, x, c);
        paa[i] = pa[i] * pa[i];
        pbb[i] = pb[i] * pb[i];
        pab[i] = pa[i] * pb[i];
      }
    }
    const auto mu_a = filter_valid(pa, h, w, kernel);
    const auto mu_b = filter_valid(pb, h, w, kernel);
    const auto e_aa = filter_valid(paa, h, w, kernel);
    const auto e_bb = filter_valid(pbb, h, w, kernel);
    const auto e_ab = filter_valid(pab, h, w, kernel);

    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        if (mask && !mask->at(y + half, x + half)) continue;
        const std::size_t i = static_cast<std::size_t>(y) * ow + x;
        const double var_a = e_aa[i] - mu_a[i] * mu_a[i];
        const double var_b = e_bb[i] - mu_b[i] * mu_b[i];
        const double cov = e_ab[i] - mu_a[i] * mu_b[i];
        const double num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
        const double den =
            (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (var_a + var_b + c2);
        sum += num / den;
        ++count;
      }
    }
    if (count == 0) {
      throw Error(Errc::kEmptyMask, "no SSIM window centers selected");
    }
    total += sum / static_cast<double>(count);
  }
  return total / a.channels();
}

}  // namespace fisheye
