#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fisheye/geometry.hpp"
#include "fisheye/image.hpp"
#include "fisheye/labels.hpp"
#include "fisheye/manifest.hpp"
#include "fisheye/maps.hpp"

namespace fisheye {

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

/// 64-bit generator with distributions written out by hand so the same seed
/// yields the same draws with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform in [lo, hi]; returns lo when the interval is degenerate.
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Per-sample seed derived from the master seed and a global sample index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Coefficient intervals for random cameras. The defaults are not taken from
/// any published setting: they give visible barrel distortion at the
/// inscribed circle while keeping the inverse well conditioned.
struct ParamRanges {
  Interval k1{0.8, 1.2};
  Interval k2{0.0, 0.5};
  Interval k3{0.0, 0.3};
  Interval k4{0.0, 0.2};
  int max_attempts = 1000;

  void validate() const;
};

/// Radius (normalized) over which sampled parameters must be monotone: the
/// corner of a square frame.
inline constexpr double kParamCheckRadius = std::numbers::sqrt2;

struct SplitSpec {
  std::string name;
  std::size_t count = 0;
};

struct DatasetConfig {
  int resolution = 256;
  std::vector<SplitSpec> splits{{"train", 0}};
  double deviation_probability = 0.7;
  double free_fraction = 0.2;
  Interval crop_ratio{0.4, 0.9};
  ParamRanges ranges;
  std::uint64_t seed = 0;
  /// Only affects speed; output is identical for any worker count.
  int workers = 1;

  void validate() const;
  std::size_t total_count() const;
};

// ---------------------------------------------------------------------------
// Sample construction
// ---------------------------------------------------------------------------

/// Uniform draw per coefficient, redrawn until monotone on
/// [0, kParamCheckRadius]. Throws kRejectionExhausted.
RadialParams sample_params(Rng& rng, const ParamRanges& ranges);

/// Distorted rendering of a distortion-free `src`: every output pixel p of a
/// height x width frame samples src at dist_to_rect(cam, p); positions off
/// the source give black.
Image render_fisheye(const Image& src, const CameraModel& cam, int height,
                     int width);
Image render_fisheye(const Image& src, const CameraModel& cam);

/// 1.0 where render_fisheye reads inside the source, 0.0 elsewhere.
ImageD render_coverage(const CameraModel& cam, int src_height, int src_width,
                       int height, int width);

/// Pixels of a rectified image whose every contributing sample traces back
/// into the original source: the region where render + rectify round trips.
Mask round_trip_mask(const CameraModel& cam, const FlowMap& flow,
                     int src_height, int src_width);

/// Crop-and-resize of an image with the same geometry as transform_flow.
Image crop_resize(const Image& src, const ViewTransform& t);

/// Center square crop of `src` resized to side x side.
Image prepare_source(const Image& src, int side);

/// Deterministic textured image used when no source photos are supplied:
/// multi-octave color noise with a handful of soft-edged shapes.
Image procedural_source(std::uint64_t seed, int side);

struct LabeledSample {
  Image image;
  DistortionVectorMap dvm;
  FlowMap flow;
};

struct DeviatedSample {
  LabeledSample sample;
  ViewTransform transform;
};

/// Fisheye rendering of a square source with its DVM and flow labels;
/// the optical center sits at the geometric center.
LabeledSample make_central(const Image& src, const RadialParams& params);

/// Undistorted sample: unit DVM and identity flow.
LabeledSample make_distortion_free(const Image& src);

/// Random square crop, fully inside the frame, with side ratio drawn from
/// cfg.crop_ratio and output side cfg.resolution.
ViewTransform sample_view_transform(Rng& rng, const DatasetConfig& cfg,
                                    int side);

DeviatedSample make_deviated(const LabeledSample& central, Rng& rng,
                             const DatasetConfig& cfg);

DeviatedSample apply_view_transform(const LabeledSample& central,
                                    const ViewTransform& t);

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

/// Everything random about one sample, decided before any pixel work.
struct SamplePlan {
  std::size_t index = 0;  // global, across splits
  std::string split;
  std::size_t split_index = 0;
  SampleKind kind = SampleKind::kCentral;
  std::uint64_t seed = 0;
  std::optional<RadialParams> params;
  std::optional<ViewTransform> transform;
};

/// Distortion-free samples are exactly round(count * free_fraction) per
/// split, picked by a seeded shuffle; every other sample is central and is
/// deviated with probability deviation_probability.
std::vector<SamplePlan> plan_dataset(const DatasetConfig& cfg);

struct DatasetSummary {
  std::size_t central = 0;
  std::size_t deviated = 0;
  std::size_t distortion_free = 0;
};

DatasetSummary summarize(const DatasetManifest& manifest);

/// Renders and writes every planned sample under `out_dir`
/// (images/, dvm/, flow/, manifest.jsonl). Sources are used cyclically;
/// with no sources, procedural images are generated. Output bytes depend
/// only on (cfg minus workers, sources).
DatasetManifest build_dataset(const DatasetConfig& cfg,
                              const std::vector<std::filesystem::path>& sources,
                              const std::filesystem::path& out_dir);

inline constexpr const char* kManifestName = "manifest.jsonl";

}  // namespace fisheye
