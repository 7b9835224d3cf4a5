#include "fisheye/synthesis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "fisheye/bilinear.hpp"
#include "fisheye/error.hpp"
#include "fisheye/io.hpp"
#include "fisheye/parallel.hpp"
#include "fisheye/rectifier.hpp"

namespace fisheye {

// ---------------------------------------------------------------------------
// Rng

double Rng::uniform(double lo, double hi) {
  if (!(hi > lo)) return lo;
  return lo + (hi - lo) * uniform01();
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return lo + static_cast<std::int64_t>(v % span);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over a combination of both inputs.
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Config

namespace {

void check_interval(const Interval& iv, const char* name) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
    throw Error(Errc::kInvalidArgument,
                std::string("interval ") + name + " must satisfy lo <= hi");
  }
}

constexpr std::uint64_t kFreeShuffleSalt = 0x66726565ULL;
constexpr std::uint64_t kProceduralSalt = 0x70726f63ULL;

}  // namespace

void ParamRanges::validate() const {
  check_interval(k1, "k1");
  check_interval(k2, "k2");
  check_interval(k3, "k3");
  check_interval(k4, "k4");
  if (!(k1.lo > 0.0)) {
    throw Error(Errc::kInvalidArgument, "k1 interval must be strictly positive");
  }
  if (max_attempts < 1) {
    throw Error(Errc::kInvalidArgument, "max_attempts must be >= 1");
  }
}

void DatasetConfig::validate() const {
  if (resolution < 32) {
    throw Error(Errc::kInvalidArgument, "resolution must be >= 32");
  }
  if (!(deviation_probability >= 0.0 && deviation_probability <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "deviation probability must be in [0, 1]");
  }
  if (!(free_fraction >= 0.0 && free_fraction <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "free fraction must be in [0, 1]");
  }
  check_interval(crop_ratio, "crop_ratio");
  if (!(crop_ratio.lo > 0.0) || crop_ratio.hi > 1.0) {
    throw Error(Errc::kInvalidArgument, "crop ratio must lie in (0, 1]");
  }
  ranges.validate();
  for (const auto& s : splits) {
    if (s.name.empty()) throw Error(Errc::kInvalidArgument, "empty split name");
  }
}

std::size_t DatasetConfig::total_count() const {
  std::size_t n = 0;
  for (const auto& s : splits) n += s.count;
  return n;
}

// ---------------------------------------------------------------------------
// Parameters and rendering

RadialParams sample_params(Rng& rng, const ParamRanges& ranges) {
  ranges.validate();
  for (int attempt = 0; attempt < ranges.max_attempts; ++attempt) {
    RadialParams p;
    p.k1 = rng.uniform(ranges.k1.lo, ranges.k1.hi);
    p.k2 = rng.uniform(ranges.k2.lo, ranges.k2.hi);
    p.k3 = rng.uniform(ranges.k3.lo, ranges.k3.hi);
    p.k4 = rng.uniform(ranges.k4.lo, ranges.k4.hi);
    if (validate_monotone(p, kParamCheckRadius)) return p;
  }
  throw Error(Errc::kRejectionExhausted,
              "no monotone parameters after " +
                  std::to_string(ranges.max_attempts) + " attempts");
}

namespace {

double frame_corner_radius(Point2 center, double r_norm, int height, int width) {
  double r = 0.0;
  for (const Point2 c : {Point2{0, 0}, Point2{width - 1.0, 0},
                         Point2{0, height - 1.0},
                         Point2{width - 1.0, height - 1.0}}) {
    r = std::max(r, norm(c - center));
  }
  return r / r_norm;
}

}  // namespace

Image render_fisheye(const Image& src, const CameraModel& cam, int height,
                     int width) {
  require_monotone(cam.params,
                   frame_corner_radius(cam.center_d, cam.r_norm, height, width));
  Image out(height, width);
  double px[kRgb];
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Point2 s = dist_to_rect(cam, {double(x), double(y)});
      if (detail::bilinear_interleaved(src.data(), src.height(), src.width(),
                                       kRgb, s.x, s.y, px)) {
        for (int c = 0; c < kRgb; ++c) out.at(y, x, c) = quantize(px[c]);
      }
    }
  }
  return out;
}

Image render_fisheye(const Image& src, const CameraModel& cam) {
  return render_fisheye(src, cam, src.height(), src.width());
}

ImageD render_coverage(const CameraModel& cam, int src_height, int src_width,
                       int height, int width) {
  ImageD cover(height, width, 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Point2 s = dist_to_rect(cam, {double(x), double(y)});
      cover.at(y, x) = s.x >= 0.0 && s.x <= src_width - 1 && s.y >= 0.0 &&
                       s.y <= src_height - 1;
    }
  }
  return cover;
}

Mask round_trip_mask(const CameraModel& cam, const FlowMap& flow,
                     int src_height, int src_width) {
  const ImageD cover =
      render_coverage(cam, src_height, src_width, src_height, src_width);
  const ImageD traced = bilinear_sample(cover, flow);
  const Mask in_range = valid_mask(flow, src_height, src_width);
  Mask mask(flow.height(), flow.width(), 1);
  for (int v = 0; v < flow.height(); ++v) {
    for (int u = 0; u < flow.width(); ++u) {
      mask.at(v, u) = in_range.at(v, u) && traced.at(v, u) >= 1.0 - 1e-9;
    }
  }
  return mask;
}

Image crop_resize(const Image& src, const ViewTransform& t) {
  t.validate(src.height(), src.width());
  Image out(t.out_side, t.out_side);
  const double x_max = t.crop_x + t.crop_side - 1;
  const double y_max = t.crop_y + t.crop_side - 1;
  double px[kRgb];
  for (int v = 0; v < t.out_side; ++v) {
    for (int u = 0; u < t.out_side; ++u) {
      const Point2 p = t.preimage({double(u), double(v)});
      detail::bilinear_interleaved(src.data(), src.height(), src.width(), kRgb,
                                   std::min(p.x, x_max), std::min(p.y, y_max),
                                   px);
      for (int c = 0; c < kRgb; ++c) out.at(v, u, c) = quantize(px[c]);
    }
  }
  return out;
}

Image prepare_source(const Image& src, int side) {
  const int s = std::min(src.height(), src.width());
  const ViewTransform t{(src.width() - s) / 2, (src.height() - s) / 2, s, side};
  return crop_resize(src, t);
}

namespace {

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Value noise on a (cells + 1)^2 lattice, evaluated at normalized (u, v).
class LatticeNoise {
 public:
  LatticeNoise(Rng& rng, int cells) : cells_(cells) {
    values_.resize(static_cast<std::size_t>(cells + 1) * (cells + 1));
    for (double& v : values_) v = rng.uniform01();
  }

  double at(double u, double v) const {
    const double x = u * cells_;
    const double y = v * cells_;
    const int x0 = std::min(static_cast<int>(x), cells_ - 1);
    const int y0 = std::min(static_cast<int>(y), cells_ - 1);
    const double ax = smoothstep(x - x0);
    const double ay = smoothstep(y - y0);
    const auto val = [&](int yy, int xx) { return values_[yy * (cells_ + 1) + xx]; };
    const double top = (1 - ax) * val(y0, x0) + ax * val(y0, x0 + 1);
    const double bot = (1 - ax) * val(y0 + 1, x0) + ax * val(y0 + 1, x0 + 1);
    return (1 - ay) * top + ay * bot;
  }

 private:
  int cells_;
  std::vector<double> values_;
};

}  // namespace

Image procedural_source(std::uint64_t seed, int side) {
  Rng rng(seed);
  constexpr int kOctaves = 6;
  std::array<std::vector<LatticeNoise>, kRgb> layers;
  for (int c = 0; c < kRgb; ++c) {
    for (int o = 0; o < kOctaves; ++o) layers[c].emplace_back(rng, 2 << o);
  }
  std::array<double, kRgb> tint;
  for (double& t : tint) t = rng.uniform(0.6, 1.0);

  struct Shape {
    bool ellipse;
    double cx, cy, rx, ry;
    std::array<double, kRgb> color;
  };
  std::vector<Shape> shapes(static_cast<std::size_t>(rng.uniform_int(4, 8)));
  for (Shape& s : shapes) {
    s.ellipse = rng.bernoulli(0.5);
    s.cx = rng.uniform(0.0, 1.0);
    s.cy = rng.uniform(0.0, 1.0);
    s.rx = rng.uniform(0.04, 0.2);
    s.ry = rng.uniform(0.04, 0.2);
    for (double& c : s.color) c = rng.uniform(0.0, 1.0);
  }

  ImageD img(side, side, kRgb);
  const double pixel = 1.0 / side;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double u = (x + 0.5) * pixel;
      const double v = (y + 0.5) * pixel;
      std::array<double, kRgb> px{};
      for (int c = 0; c < kRgb; ++c) {
        double acc = 0.0, norm_sum = 0.0, amp = 1.0;
        for (const auto& layer : layers[c]) {
          acc += amp * layer.at(u, v);
          norm_sum += amp;
          amp *= 0.5;
        }
        px[c] = tint[c] * acc / norm_sum;
      }
      for (const Shape& s : shapes) {
        // Signed distance in pixels, roughly; 1-pixel soft edge.
        double d;
        if (s.ellipse) {
          const double ex = (u - s.cx) / s.rx, ey = (v - s.cy) / s.ry;
          d = (std::sqrt(ex * ex + ey * ey) - 1.0) * std::min(s.rx, s.ry) / pixel;
        } else {
          d = std::max(std::abs(u - s.cx) - s.rx, std::abs(v - s.cy) - s.ry) / pixel;
        }
        const double alpha = std::clamp(0.5 - d, 0.0, 1.0);
        for (int c = 0; c < kRgb; ++c) {
          px[c] = (1.0 - alpha) * px[c] + alpha * s.color[c];
        }
      }
      for (int c = 0; c < kRgb; ++c) img.at(y, x, c) = 255.0 * px[c];
    }
  }
  return quantize(img);
}

// ---------------------------------------------------------------------------
// Samples

LabeledSample make_central(const Image& src, const RadialParams& params) {
  const int h = src.height();
  const int w = src.width();
  const CameraModel cam = CameraModel::central(params, h, w);
  return {render_fisheye(src, cam), compute_dvm(cam, h, w),
          compute_backward_flow(cam, h, w)};
}

LabeledSample make_distortion_free(const Image& src) {
  return {src, unit_dvm(src.height(), src.width()),
          identity_flow(src.height(), src.width())};
}

ViewTransform sample_view_transform(Rng& rng, const DatasetConfig& cfg,
                                    int side) {
  const double ratio = rng.uniform(cfg.crop_ratio.lo, cfg.crop_ratio.hi);
  const int crop = static_cast<int>(
      std::clamp<long>(std::lround(ratio * side), 2L, static_cast<long>(side)));
  ViewTransform t;
  t.crop_side = crop;
  t.crop_x = static_cast<int>(rng.uniform_int(0, side - crop));
  t.crop_y = static_cast<int>(rng.uniform_int(0, side - crop));
  t.out_side = cfg.resolution;
  return t;
}

DeviatedSample apply_view_transform(const LabeledSample& central,
                                    const ViewTransform& t) {
  const Image& img = central.image;
  if (central.dvm.height() != img.height() || central.dvm.width() != img.width() ||
      central.flow.height() != img.height() || central.flow.width() != img.width()) {
    throw Error(Errc::kDimensionMismatch, "sample image and labels disagree in size");
  }
  return {{crop_resize(img, t), transform_dvm(central.dvm, t),
           transform_flow(central.flow, t)},
          t};
}

DeviatedSample make_deviated(const LabeledSample& central, Rng& rng,
                             const DatasetConfig& cfg) {
  const int side = std::min(central.image.height(), central.image.width());
  const ViewTransform t = sample_view_transform(rng, cfg, side);
  return apply_view_transform(central, t);
}

// ---------------------------------------------------------------------------
// Dataset

std::vector<SamplePlan> plan_dataset(const DatasetConfig& cfg) {
  cfg.validate();
  std::vector<SamplePlan> plans;
  plans.reserve(cfg.total_count());
  std::size_t global = 0;
  for (std::size_t s = 0; s < cfg.splits.size(); ++s) {
    const SplitSpec& split = cfg.splits[s];
    const auto n_free = static_cast<std::size_t>(
        std::llround(static_cast<double>(split.count) * cfg.free_fraction));
    std::vector<std::size_t> order(split.count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle(derive_seed(cfg.seed ^ kFreeShuffleSalt, s));
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(
          shuffle.uniform_int(0, static_cast<std::int64_t>(i - 1)));
      std::swap(order[i - 1], order[j]);
    }
    std::vector<bool> is_free(split.count, false);
    for (std::size_t i = 0; i < n_free; ++i) is_free[order[i]] = true;

    for (std::size_t i = 0; i < split.count; ++i, ++global) {
      SamplePlan plan;
      plan.index = global;
      plan.split = split.name;
      plan.split_index = i;
      plan.seed = derive_seed(cfg.seed, global);
      if (is_free[i]) {
        plan.kind = SampleKind::kDistortionFree;
      } else {
        Rng rng(plan.seed);
        plan.params = sample_params(rng, cfg.ranges);
        if (rng.bernoulli(cfg.deviation_probability)) {
          plan.kind = SampleKind::kDeviated;
          plan.transform = sample_view_transform(rng, cfg, cfg.resolution);
        }
      }
      plans.push_back(std::move(plan));
    }
  }
  return plans;
}

DatasetSummary summarize(const DatasetManifest& manifest) {
  DatasetSummary s;
  for (const auto& rec : manifest) {
    switch (rec.kind) {
      case SampleKind::kCentral: ++s.central; break;
      case SampleKind::kDeviated: ++s.deviated; break;
      case SampleKind::kDistortionFree: ++s.distortion_free; break;
    }
  }
  return s;
}

namespace {

std::string sample_id(const SamplePlan& plan) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%06zu", plan.split_index);
  return plan.split + buf;
}

std::string source_label(const SamplePlan& plan, std::uint64_t master,
                         const std::vector<std::filesystem::path>& sources) {
  if (sources.empty()) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "procedural:%016llx",
                  static_cast<unsigned long long>(
                      derive_seed(master ^ kProceduralSalt, plan.index)));
    return buf;
  }
  return sources[plan.index % sources.size()].string();
}

}  // namespace

DatasetManifest build_dataset(const DatasetConfig& cfg,
                              const std::vector<std::filesystem::path>& sources,
                              const std::filesystem::path& out_dir) {
  const std::vector<SamplePlan> plans = plan_dataset(cfg);
  namespace fs = std::filesystem;
  std::error_code ec;
  for (const char* sub : {"images", "dvm", "flow"}) {
    fs::create_directories(out_dir / sub, ec);
    if (ec) {
      throw Error(Errc::kIo, "cannot create " + (out_dir / sub).string() + ": " +
                                 ec.message());
    }
  }

  DatasetManifest manifest(plans.size());
  parallel_for(plans.size(), cfg.workers, [&](std::size_t i) {
    const SamplePlan& plan = plans[i];
    SampleRecord rec;
    rec.id = sample_id(plan);
    rec.split = plan.split;
    rec.kind = plan.kind;
    rec.seed = plan.seed;
    rec.params = plan.params;
    rec.transform = plan.transform;
    rec.source = source_label(plan, cfg.seed, sources);
    rec.image = "images/" + rec.id + ".png";
    rec.dvm = "dvm/" + rec.id + ".rfir";
    rec.flow = "flow/" + rec.id + ".rfir";
    try {
      const Image src =
          sources.empty()
              ? procedural_source(
                    derive_seed(cfg.seed ^ kProceduralSalt, plan.index),
                    cfg.resolution)
              : prepare_source(read_image(sources[plan.index % sources.size()]),
                               cfg.resolution);
      LabeledSample sample;
      if (plan.kind == SampleKind::kDistortionFree) {
        sample = make_distortion_free(src);
      } else {
        sample = make_central(src, *plan.params);
        if (plan.transform) sample = apply_view_transform(sample, *plan.transform).sample;
      }
      write_image(sample.image, out_dir / rec.image);
      write_map(sample.dvm, out_dir / rec.dvm);
      write_map(sample.flow, out_dir / rec.flow);
    } catch (const Error& e) {
      throw Error(e.code(), "sample " + rec.id + ": " + e.what());
    }
    manifest[i] = std::move(rec);
  });
  write_manifest(manifest, out_dir / kManifestName);
  return manifest;
}

}  // namespace fisheye
