#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fisheye/image.hpp"
#include "fisheye/maps.hpp"

namespace fisheye {

// ---------------------------------------------------------------------------
// Map files
//
//   offset  size  field
//   0       4     magic "RFIR"
//   4       1     version (1)
//   5       1     kind (0 = flow, 1 = dvm)
//   6       2     reserved, zero
//   8       4     height   (uint32, little endian)
//   12      4     width    (uint32, little endian)
//   16      4     channels (uint32, little endian, always 2)
//   20      ...   height * width * 2 float32 little endian, row-major,
//                 (x, y) interleaved per pixel
//
// Values are stored as float32, so doubles are rounded on write.
// ---------------------------------------------------------------------------

inline constexpr char kMapMagic[4] = {'R', 'F', 'I', 'R'};
inline constexpr std::uint8_t kMapVersion = 1;
inline constexpr std::uint32_t kMapChannels = 2;
inline constexpr std::size_t kMapHeaderSize = 20;

struct MapFileHeader {
  std::uint8_t version = kMapVersion;
  MapKind kind = MapKind::kFlow;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t channels = kMapChannels;
};

std::vector<std::uint8_t> encode_map(const FlowMap& map);
std::vector<std::uint8_t> encode_map(const DistortionVectorMap& map);

MapFileHeader decode_map_header(const std::vector<std::uint8_t>& bytes);
FlowMap decode_flow(const std::vector<std::uint8_t>& bytes);
DistortionVectorMap decode_dvm(const std::vector<std::uint8_t>& bytes);

void write_map(const FlowMap& map, const std::filesystem::path& path);
void write_map(const DistortionVectorMap& map, const std::filesystem::path& path);

FlowMap read_flow(const std::filesystem::path& path);
DistortionVectorMap read_dvm(const std::filesystem::path& path);

using AnyMap = std::variant<FlowMap, DistortionVectorMap>;
/// Reads either kind, dispatching on the header.
AnyMap read_map(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes);

// ---------------------------------------------------------------------------
// Images: PNG (8-bit RGB/RGBA/gray, written as RGB) and binary PPM (P6).
// The format is chosen from the file extension.
// ---------------------------------------------------------------------------

Image read_image(const std::filesystem::path& path);
void write_image(const Image& img, const std::filesystem::path& path);

/// Mask from an image file: nonzero in any channel marks a valid pixel.
Mask read_mask(const std::filesystem::path& path);

}  // namespace fisheye
