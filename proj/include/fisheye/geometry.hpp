#pragma once

#include <cmath>

namespace fisheye {

/// Continuous pixel coordinates: x is the column, y the row, pixel centers
/// sit on integers and the origin is the top-left pixel.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

using OpticalCenter = Point2;

/// Coefficients of the odd radial polynomial
///   r_c = k1 r_d + k2 r_d^3 + k3 r_d^5 + k4 r_d^7
/// mapping a normalized distorted radius to the rectified one.
struct RadialParams {
  double k1 = 1.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double k4 = 0.0;

  static constexpr RadialParams identity() { return {1.0, 0.0, 0.0, 0.0}; }
  friend bool operator==(const RadialParams&, const RadialParams&) = default;
};

/// Radial model plus the frame geometry it is applied in. `center_d` is the
/// optical center in the distorted image, `center_c` its image in the
/// rectified frame; radii are divided by `r_norm` before polynomial
/// evaluation.
struct CameraModel {
  RadialParams params;
  OpticalCenter center_d;
  OpticalCenter center_c;
  double r_norm = 1.0;

  /// Both centers at the geometric center ((W-1)/2, (H-1)/2) and
  /// r_norm = min(H, W) / 2, so the inscribed circle is at radius 1.
  static CameraModel central(const RadialParams& params, int height, int width);
};

inline constexpr double kDefaultInvertTol = 1e-9;
inline constexpr int kDefaultInvertMaxIter = 64;
inline constexpr int kDefaultMonotoneProbes = 1024;
// Spacing of the probe grid used when a bracket has to be searched for.
inline constexpr double kBracketProbeStep = 1.0 / 512.0;
inline constexpr double kMaxBracketRadius = 64.0;

struct InvertOptions {
  double tol = kDefaultInvertTol;
  int max_iter = kDefaultInvertMaxIter;
  int n_probe = kDefaultMonotoneProbes;
};

double eval_radial(const RadialParams& params, double r_d);

/// d r_c / d r_d.
double eval_radial_derivative(const RadialParams& params, double r_d);

/// r_c / r_d, with the limit k1 at r_d = 0.
double radial_gain(const RadialParams& params, double r_d);

struct MonotoneCheck {
  bool ok = true;
  double violating_radius = 0.0;

  explicit operator bool() const { return ok; }
};

/// Probes the derivative on n_probe evenly spaced radii covering [0, r_max]
/// and reports the first radius where it is not strictly positive.
MonotoneCheck validate_monotone(const RadialParams& params, double r_max,
                                int n_probe = kDefaultMonotoneProbes);

/// Throws NotMonotoneError when validate_monotone fails.
void require_monotone(const RadialParams& params, double r_max,
                      int n_probe = kDefaultMonotoneProbes);

/// Solves eval_radial(params, r_d) = r_c for r_d in [0, r_hi]. Validates
/// monotonicity on the bracket first; throws kNoBracket when
/// eval_radial(r_hi) < r_c.
double invert_radial(const RadialParams& params, double r_c, double r_hi,
                     const InvertOptions& opts = {});

/// Inverse of the radial polynomial over [0, r_c_max], with the bracket found
/// and validated once so many radii can be inverted cheaply. The bracket
/// upper end is the first point of a fine probe grid whose image reaches
/// r_c_max; every probe up to it must have a positive derivative.
class RadialInverse {
 public:
  RadialInverse(const RadialParams& params, double r_c_max,
                const InvertOptions& opts = {});

  double operator()(double r_c) const;

  double upper_bound() const { return r_hi_; }

 private:
  RadialParams params_;
  InvertOptions opts_;
  double r_hi_ = 0.0;
  double r_c_hi_ = 0.0;
};

/// Rectified point -> distorted point (the backward-flow direction).
Point2 rect_to_dist(const CameraModel& cam, Point2 p_c,
                    const InvertOptions& opts = {});

/// Distorted point -> rectified point (forward model along the ray).
Point2 dist_to_rect(const CameraModel& cam, Point2 p_d);

namespace detail {
// Bracketed safeguarded Newton; assumes monotone on [0, r_hi] and
// eval_radial(r_hi) >= r_c.
double solve_radial(const RadialParams& params, double r_c, double r_hi,
                    const InvertOptions& opts);
}  // namespace detail

}  // namespace fisheye
