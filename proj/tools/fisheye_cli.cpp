// Command-line front end: dataset synthesis, label generation, rectification,
// evaluation and render/rectify round trips.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error,
// 3 partial failure (some items of a batch failed).

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fisheye/error.hpp"
#include "fisheye/io.hpp"
#include "fisheye/labels.hpp"
#include "fisheye/metrics.hpp"
#include "fisheye/parallel.hpp"
#include "fisheye/rectifier.hpp"
#include "fisheye/synthesis.hpp"

namespace fs = std::filesystem;
using namespace fisheye;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitPartial = 3;

int exit_code_for(const Error& e) {
  return e.code() == Errc::kInvalidArgument ? kExitUsage : kExitData;
}

ParamRanges load_ranges(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kInvalidArgument, "cannot open ranges file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kInvalidArgument, path.string() + ": " + e.what());
  }
  ParamRanges r;
  const auto read = [&](const char* key, Interval& iv) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2) {
      throw Error(Errc::kInvalidArgument,
                  std::string("ranges.") + key + " must be [lo, hi]");
    }
    iv = {v[0].get<double>(), v[1].get<double>()};
  };
  read("k1", r.k1);
  read("k2", r.k2);
  read("k3", r.k3);
  read("k4", r.k4);
  if (j.contains("max_attempts")) r.max_attempts = j.at("max_attempts").get<int>();
  r.validate();
  return r;
}

std::vector<fs::path> collect_sources(const std::vector<std::string>& args) {
  std::vector<fs::path> out;
  for (const auto& a : args) {
    const fs::path p(a);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        const auto ext = entry.path().extension().string();
        if (entry.is_regular_file() && (ext == ".png" || ext == ".ppm")) {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      out.push_back(p);
    } else {
      throw Error(Errc::kInvalidArgument, "source not found: " + a);
    }
  }
  return out;
}

std::string format_psnr(double v) {
  if (std::isinf(v)) return "\"inf\"";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// --- synthesize -------------------------------------------------------------

struct SynthesizeArgs {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::string out;
  double deviation_prob = 0.7;
  double free_frac = 0.2;
  int resolution = 256;
  std::string ranges;
  int workers = 1;
  double crop_min = 0.4;
  double crop_max = 0.9;
  std::string split = "train";
  std::vector<std::string> sources;
};

int run_synthesize(const SynthesizeArgs& a) {
  DatasetConfig cfg;
  cfg.resolution = a.resolution;
  cfg.splits = {{a.split, a.count}};
  cfg.deviation_probability = a.deviation_prob;
  cfg.free_fraction = a.free_frac;
  cfg.crop_ratio = {a.crop_min, a.crop_max};
  cfg.seed = a.seed;
  cfg.workers = a.workers;
  if (!a.ranges.empty()) cfg.ranges = load_ranges(a.ranges);
  cfg.validate();
  const auto sources = collect_sources(a.sources);
  const auto manifest = build_dataset(cfg, sources, a.out);
  const auto s = summarize(manifest);
  std::cout << "central=" << s.central << " deviated=" << s.deviated
            << " free=" << s.distortion_free << "\n";
  return kExitOk;
}

// --- labels -----------------------------------------------------------------

struct LabelsArgs {
  double k1 = 1.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;
  int height = 256, width = 256;
  std::string image;
  double center_x = NAN, center_y = NAN;
  double r_norm = 0.0;
  std::string dvm, flow;
};

int run_labels(const LabelsArgs& a) {
  int h = a.height, w = a.width;
  if (!a.image.empty()) {
    const Image img = read_image(a.image);
    h = img.height();
    w = img.width();
  }
  CameraModel cam = CameraModel::central({a.k1, a.k2, a.k3, a.k4}, h, w);
  if (!std::isnan(a.center_x)) cam.center_d.x = cam.center_c.x = a.center_x;
  if (!std::isnan(a.center_y)) cam.center_d.y = cam.center_c.y = a.center_y;
  if (a.r_norm > 0.0) cam.r_norm = a.r_norm;
  if (!(cam.params.k1 > 0.0)) throw Error(Errc::kInvalidArgument, "k1 must be positive");
  if (a.dvm.empty() && a.flow.empty()) {
    throw Error(Errc::kInvalidArgument, "nothing to do: pass --dvm and/or --flow");
  }
  if (!a.dvm.empty()) write_map(compute_dvm(cam, h, w), a.dvm);
  if (!a.flow.empty()) write_map(compute_backward_flow(cam, h, w), a.flow);
  return kExitOk;
}

// --- rectify ----------------------------------------------------------------

int run_rectify(const std::string& image, const std::string& flow,
                const std::string& out) {
  const Image src = read_image(image);
  const FlowMap f = read_flow(flow);
  write_image(bilinear_sample(src, f), out);
  return kExitOk;
}

// --- evaluate ---------------------------------------------------------------

struct EvalItem {
  std::string ref, test, mask;
};

Mask load_mask(const std::string& path, int height, int width) {
  const fs::path p(path);
  if (p.extension() == ".rfir") return valid_mask(read_flow(p), height, width);
  return read_mask(p);
}

int run_evaluate(std::vector<EvalItem> items, const std::string& pairs_file,
                 bool masked) {
  if (!pairs_file.empty()) {
    std::ifstream in(pairs_file);
    if (!in) throw Error(Errc::kInvalidArgument, "cannot open " + pairs_file);
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ss(line);
      EvalItem item;
      if (!(ss >> item.ref)) continue;
      if (!(ss >> item.test)) {
        throw Error(Errc::kInvalidArgument, pairs_file + ": line needs ref and test");
      }
      ss >> item.mask;
      items.push_back(item);
    }
  }
  if (items.empty()) throw Error(Errc::kInvalidArgument, "no image pairs given");

  std::size_t failures = 0;
  for (const auto& item : items) {
    try {
      const Image ref = read_image(item.ref);
      const Image test = read_image(item.test);
      const bool use_mask = masked && !item.mask.empty();
      if (masked && item.mask.empty()) {
        throw Error(Errc::kInvalidArgument, "--masked needs a mask for every pair");
      }
      Mask mask;
      if (use_mask) mask = load_mask(item.mask, ref.height(), ref.width());
      const Mask* mp = use_mask ? &mask : nullptr;
      const double p = psnr(ref, test, {}, mp);
      const double s = ssim(ref, test, {}, mp);
      nlohmann::ordered_json j;
      j["ref"] = item.ref;
      j["test"] = item.test;
      std::string line = j.dump();
      line.pop_back();
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6f", s);
      std::cout << line << ",\"psnr\":" << format_psnr(p) << ",\"ssim\":" << buf
                << ",\"masked\":" << (use_mask ? "true" : "false") << "}\n";
    } catch (const Error& e) {
      ++failures;
      std::cerr << item.ref << " vs " << item.test << ": " << e.what() << "\n";
    }
  }
  if (failures == 0) return kExitOk;
  return failures == items.size() ? kExitData : kExitPartial;
}

// --- roundtrip --------------------------------------------------------------

struct RoundtripArgs {
  std::size_t count = 50;
  std::uint64_t seed = 0;
  int resolution = 256;
  std::string ranges;
  int workers = 1;
  std::vector<std::string> sources;
};

int run_roundtrip(const RoundtripArgs& a) {
  ParamRanges ranges;
  if (!a.ranges.empty()) ranges = load_ranges(a.ranges);
  if (a.count == 0) throw Error(Errc::kInvalidArgument, "--count must be positive");
  const auto sources = collect_sources(a.sources);
  std::vector<double> scores(a.count);
  parallel_for(a.count, a.workers, [&](std::size_t i) {
    Rng rng(derive_seed(a.seed, i));
    const RadialParams params = sample_params(rng, ranges);
    const Image src =
        sources.empty()
            ? procedural_source(derive_seed(~a.seed, i), a.resolution)
            : prepare_source(read_image(sources[i % sources.size()]), a.resolution);
    const LabeledSample sample = make_central(src, params);
    const Image rectified = bilinear_sample(sample.image, sample.flow);
    const CameraModel cam = CameraModel::central(params, a.resolution, a.resolution);
    const Mask mask = round_trip_mask(cam, sample.flow, a.resolution, a.resolution);
    scores[i] = psnr(rectified, src, {}, &mask);
  });
  double sum = 0.0;
  for (std::size_t i = 0; i < a.count; ++i) {
    std::cout << "{\"sample\":" << i << ",\"psnr\":" << format_psnr(scores[i]) << "}\n";
    sum += scores[i];
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", sum / a.count);
  std::cout << "mean_psnr=" << buf << " samples=" << a.count << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fisheye distortion toolkit"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);

  SynthesizeArgs syn;
  auto* synthesize = app.add_subcommand("synthesize", "Build a labeled dataset");
  synthesize->add_option("--count", syn.count, "Number of samples")->required();
  synthesize->add_option("--seed", syn.seed, "Master seed")->required();
  synthesize->add_option("--out", syn.out, "Output directory")->required();
  synthesize->add_option("--deviation-prob", syn.deviation_prob, "Deviation probability")
      ->check(CLI::Range(0.0, 1.0));
  synthesize->add_option("--free-frac", syn.free_frac, "Distortion-free fraction")
      ->check(CLI::Range(0.0, 1.0));
  synthesize->add_option("--resolution", syn.resolution, "Output side length");
  synthesize->add_option("--ranges", syn.ranges, "JSON file of coefficient ranges");
  synthesize->add_option("--workers", syn.workers, "Worker threads");
  synthesize->add_option("--crop-min", syn.crop_min, "Smallest crop side ratio");
  synthesize->add_option("--crop-max", syn.crop_max, "Largest crop side ratio");
  synthesize->add_option("--split", syn.split, "Split name");
  synthesize->add_option("--sources", syn.sources, "Source images or directories");

  LabelsArgs lab;
  auto* labels = app.add_subcommand("labels", "Write DVM and flow labels for a camera");
  labels->add_option("--k1", lab.k1);
  labels->add_option("--k2", lab.k2);
  labels->add_option("--k3", lab.k3);
  labels->add_option("--k4", lab.k4);
  labels->add_option("--height", lab.height);
  labels->add_option("--width", lab.width);
  labels->add_option("--image", lab.image, "Take the frame size from this image");
  labels->add_option("--center-x", lab.center_x, "Optical center column");
  labels->add_option("--center-y", lab.center_y, "Optical center row");
  labels->add_option("--r-norm", lab.r_norm, "Radius normalization in pixels");
  labels->add_option("--dvm", lab.dvm, "DVM output file");
  labels->add_option("--flow", lab.flow, "Flow output file");

  std::string rect_image, rect_flow, rect_out;
  auto* rectify = app.add_subcommand("rectify", "Sample an image through a flow map");
  rectify->add_option("--image", rect_image)->required();
  rectify->add_option("--flow", rect_flow)->required();
  rectify->add_option("--out", rect_out)->required();

  EvalItem single;
  std::string pairs_file;
  bool masked = false;
  auto* evaluate = app.add_subcommand("evaluate", "PSNR / SSIM of image pairs");
  evaluate->add_option("--ref", single.ref);
  evaluate->add_option("--test", single.test);
  evaluate->add_option("--mask", single.mask, "Mask image or flow map (.rfir)");
  evaluate->add_option("--pairs", pairs_file, "File of 'ref test [mask]' lines");
  evaluate->add_flag("--masked", masked, "Restrict metrics to the mask");

  RoundtripArgs rt;
  auto* roundtrip = app.add_subcommand("roundtrip", "Render then rectify with ground truth");
  roundtrip->add_option("--count", rt.count);
  roundtrip->add_option("--seed", rt.seed)->required();
  roundtrip->add_option("--resolution", rt.resolution);
  roundtrip->add_option("--ranges", rt.ranges);
  roundtrip->add_option("--workers", rt.workers);
  roundtrip->add_option("--sources", rt.sources);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synthesize) return run_synthesize(syn);
    if (*labels) return run_labels(lab);
    if (*rectify) return run_rectify(rect_image, rect_flow, rect_out);
    if (*evaluate) {
      std::vector<EvalItem> items;
      if (!single.ref.empty() || !single.test.empty()) {
        if (single.ref.empty() || single.test.empty()) {
          throw Error(Errc::kInvalidArgument, "--ref and --test go together");
        }
        items.push_back(single);
      }
      return run_evaluate(items, pairs_file, masked);
    }
    if (*roundtrip) return run_roundtrip(rt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
