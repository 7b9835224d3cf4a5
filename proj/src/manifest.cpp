#include "fisheye/manifest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fisheye/error.hpp"
#include "fisheye/io.hpp"

namespace fisheye {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(SampleKind kind) {
  switch (kind) {
    case SampleKind::kCentral: return "central";
    case SampleKind::kDeviated: return "deviated";
    case SampleKind::kDistortionFree: return "distortion_free";
  }
  return "unknown";
}

std::optional<SampleKind> parse_sample_kind(std::string_view name) {
  if (name == "central") return SampleKind::kCentral;
  if (name == "deviated") return SampleKind::kDeviated;
  if (name == "distortion_free") return SampleKind::kDistortionFree;
  return std::nullopt;
}

void check_record_schema(const SampleRecord& rec) {
  const bool needs_params = rec.kind != SampleKind::kDistortionFree;
  const bool needs_transform = rec.kind == SampleKind::kDeviated;
  if (rec.params.has_value() != needs_params) {
    throw Error(Errc::kSchemaError,
                std::string(to_string(rec.kind)) +
                    (needs_params ? " sample without params" : " sample with params"));
  }
  if (rec.transform.has_value() != needs_transform) {
    throw Error(Errc::kSchemaError,
                std::string(to_string(rec.kind)) +
                    (needs_transform ? " sample without transform"
                                     : " sample with transform"));
  }
}

std::string encode_record(const SampleRecord& rec) {
  check_record_schema(rec);
  ordered_json j;
  j["id"] = rec.id;
  j["split"] = rec.split;
  j["kind"] = to_string(rec.kind);
  j["source"] = rec.source;
  j["seed"] = rec.seed;
  if (rec.params) {
    j["params"] = {{"k1", rec.params->k1},
                   {"k2", rec.params->k2},
                   {"k3", rec.params->k3},
                   {"k4", rec.params->k4}};
  }
  if (rec.transform) {
    j["transform"] = {{"crop_x", rec.transform->crop_x},
                      {"crop_y", rec.transform->crop_y},
                      {"crop_side", rec.transform->crop_side},
                      {"out_side", rec.transform->out_side}};
  }
  j["image"] = rec.image;
  j["dvm"] = rec.dvm;
  j["flow"] = rec.flow;
  return j.dump();
}

SampleRecord decode_record(std::string_view line, std::size_t line_no) {
  const std::string where =
      line_no ? "line " + std::to_string(line_no) + ": " : std::string();
  try {
    const ordered_json j = ordered_json::parse(line);
    if (!j.is_object()) throw Error(Errc::kSchemaError, "record is not an object");
    for (const auto& [key, value] : j.items()) {
      static const char* kKeys[] = {"id",     "split",     "kind",  "source",
                                    "seed",   "params",    "transform",
                                    "image",  "dvm",       "flow"};
      if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
        throw Error(Errc::kSchemaError, "unknown key '" + key + "'");
      }
    }
    SampleRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.split = j.at("split").get<std::string>();
    const auto kind = parse_sample_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(Errc::kSchemaError, "unknown sample kind");
    rec.kind = *kind;
    rec.source = j.at("source").get<std::string>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("params")) {
      const auto& p = j.at("params");
      rec.params = RadialParams{p.at("k1").get<double>(), p.at("k2").get<double>(),
                                p.at("k3").get<double>(), p.at("k4").get<double>()};
    }
    if (j.contains("transform")) {
      const auto& t = j.at("transform");
      rec.transform = ViewTransform{t.at("crop_x").get<int>(), t.at("crop_y").get<int>(),
                                    t.at("crop_side").get<int>(),
                                    t.at("out_side").get<int>()};
    }
    rec.image = j.at("image").get<std::string>();
    rec.dvm = j.at("dvm").get<std::string>();
    rec.flow = j.at("flow").get<std::string>();
    check_record_schema(rec);
    return rec;
  } catch (const Error& e) {
    throw Error(Errc::kSchemaError, where + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kSchemaError, where + e.what());
  }
}

std::string encode_manifest(const DatasetManifest& manifest) {
  std::string out;
  for (const auto& rec : manifest) {
    out += encode_record(rec);
    out += '\n';
  }
  return out;
}

DatasetManifest decode_manifest(std::string_view text) {
  DatasetManifest manifest;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string_view line = text.substr(pos, end - pos);
    if (!line.empty()) manifest.push_back(decode_record(line, line_no));
    pos = end + 1;
  }
  return manifest;
}

void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path) {
  const std::string text = encode_manifest(manifest);
  write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return decode_manifest(std::string_view(
      reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace fisheye
