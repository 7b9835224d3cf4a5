#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fisheye/geometry.hpp"
#include "fisheye/labels.hpp"

namespace fisheye {

enum class SampleKind { kCentral, kDeviated, kDistortionFree };

std::string_view to_string(SampleKind kind);
std::optional<SampleKind> parse_sample_kind(std::string_view name);

/// One dataset sample. `params` is present unless the sample is
/// distortion-free; `transform` is present iff the sample is deviated.
/// Paths are relative to the dataset root.
struct SampleRecord {
  std::string id;
  std::string split;
  SampleKind kind = SampleKind::kCentral;
  std::string source;
  std::uint64_t seed = 0;
  std::optional<RadialParams> params;
  std::optional<ViewTransform> transform;
  std::string image;
  std::string dvm;
  std::string flow;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

/// Throws kSchemaError when kind-conditional fields are missing or extra.
void check_record_schema(const SampleRecord& rec);

/// One JSON object per line, keys always in the order
/// id, split, kind, source, seed, params, transform, image, dvm, flow.
std::string encode_record(const SampleRecord& rec);

/// Throws kSchemaError; `line_no` (1-based) is quoted in the message.
SampleRecord decode_record(std::string_view line, std::size_t line_no = 0);

using DatasetManifest = std::vector<SampleRecord>;

std::string encode_manifest(const DatasetManifest& manifest);
DatasetManifest decode_manifest(std::string_view text);

void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

}  // namespace fisheye
