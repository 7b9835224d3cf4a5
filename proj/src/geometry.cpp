#include "fisheye/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fisheye/error.hpp"

namespace fisheye {

CameraModel CameraModel::central(const RadialParams& params, int height,
                                 int width) {
  if (height < 1 || width < 1) {
    throw Error(Errc::kInvalidArgument, "frame dimensions must be positive");
  }
  const OpticalCenter center{(width - 1) / 2.0, (height - 1) / 2.0};
  return CameraModel{params, center, center, std::min(height, width) / 2.0};
}

double eval_radial(const RadialParams& p, double r_d) {
  const double r2 = r_d * r_d;
  return r_d * (p.k1 + r2 * (p.k2 + r2 * (p.k3 + r2 * p.k4)));
}

double eval_radial_derivative(const RadialParams& p, double r_d) {
  const double r2 = r_d * r_d;
  return p.k1 + r2 * (3.0 * p.k2 + r2 * (5.0 * p.k3 + r2 * 7.0 * p.k4));
}

double radial_gain(const RadialParams& p, double r_d) {
  const double r2 = r_d * r_d;
  return p.k1 + r2 * (p.k2 + r2 * (p.k3 + r2 * p.k4));
}

MonotoneCheck validate_monotone(const RadialParams& params, double r_max,
                                int n_probe) {
  if (!(r_max > 0.0) || n_probe < 2) {
    throw Error(Errc::kInvalidArgument,
                "validate_monotone needs r_max > 0 and n_probe >= 2");
  }
  for (int i = 0; i < n_probe; ++i) {
    const double r = r_max * static_cast<double>(i) / (n_probe - 1);
    if (!(eval_radial_derivative(params, r) > 0.0)) {
      return {false, r};
    }
  }
  return {};
}

void require_monotone(const RadialParams& params, double r_max, int n_probe) {
  const MonotoneCheck check = validate_monotone(params, r_max, n_probe);
  if (!check.ok) throw NotMonotoneError(check.violating_radius);
}

namespace detail {

double solve_radial(const RadialParams& params, double r_c, double r_hi,
                    const InvertOptions& opts) {
  if (r_c <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = r_hi;
  double r = std::clamp(r_c / params.k1, lo, hi);
  for (int it = 0; it < opts.max_iter; ++it) {
    const double g = eval_radial(params, r) - r_c;
    if (std::abs(g) <= opts.tol) return r;
    if (g < 0.0) {
      lo = r;
    } else {
      hi = r;
    }
    const double slope = eval_radial_derivative(params, r);
    double next = slope > 0.0 ? r - g / slope : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == r) break;
    r = next;
  }
  return r;
}

}  // namespace detail

double invert_radial(const RadialParams& params, double r_c, double r_hi,
                     const InvertOptions& opts) {
  if (!(opts.tol > 0.0) || !(r_c >= 0.0) || !(r_hi >= 0.0)) {
    throw Error(Errc::kInvalidArgument,
                "invert_radial needs r_c >= 0, r_hi >= 0 and tol > 0");
  }
  if (r_c == 0.0) return 0.0;
  if (eval_radial(params, r_hi) < r_c) {
    throw Error(Errc::kNoBracket,
                "r_c=" + std::to_string(r_c) + " beyond eval_radial(r_hi)");
  }
  require_monotone(params, r_hi, opts.n_probe);
  return detail::solve_radial(params, r_c, r_hi, opts);
}

RadialInverse::RadialInverse(const RadialParams& params, double r_c_max,
                             const InvertOptions& opts)
    : params_(params), opts_(opts) {
  if (!(r_c_max >= 0.0) || !(opts.tol > 0.0)) {
    throw Error(Errc::kInvalidArgument, "RadialInverse needs r_c_max >= 0");
  }
  for (int i = 0;; ++i) {
    const double r = i * kBracketProbeStep;
    if (r > kMaxBracketRadius) {
      throw Error(Errc::kNoBracket, "no bracket for r_c=" +
                                        std::to_string(r_c_max) +
                                        " below the maximum search radius");
    }
    if (!(eval_radial_derivative(params, r) > 0.0)) throw NotMonotoneError(r);
    if (eval_radial(params, r) >= r_c_max) {
      r_hi_ = r;
      break;
    }
  }
  r_c_hi_ = eval_radial(params, r_hi_);
}

double RadialInverse::operator()(double r_c) const {
  if (!(r_c >= 0.0)) {
    throw Error(Errc::kInvalidArgument, "negative radius");
  }
  if (r_c > r_c_hi_) {
    throw Error(Errc::kNoBracket,
                "r_c=" + std::to_string(r_c) + " outside the prepared bracket");
  }
  return detail::solve_radial(params_, r_c, r_hi_, opts_);
}

Point2 rect_to_dist(const CameraModel& cam, Point2 p_c,
                    const InvertOptions& opts) {
  const Point2 offset = p_c - cam.center_c;
  const double r_c = norm(offset) / cam.r_norm;
  if (r_c == 0.0) return cam.center_d;
  const RadialInverse inverse(cam.params, r_c, opts);
  const double r_d = inverse(r_c);
  if (r_d == r_c && cam.center_c == cam.center_d) return p_c;
  return cam.center_d + offset * (r_d / r_c);
}

Point2 dist_to_rect(const CameraModel& cam, Point2 p_d) {
  const Point2 offset = p_d - cam.center_d;
  const double r_d = norm(offset) / cam.r_norm;
  const double gain = radial_gain(cam.params, r_d);
  if (gain == 1.0 && cam.center_c == cam.center_d) return p_d;
  return cam.center_c + offset * gain;
}

}  // namespace fisheye
