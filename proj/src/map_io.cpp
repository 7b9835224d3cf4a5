#include "fisheye/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "fisheye/error.hpp"

namespace fisheye {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
         std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

void put_f32(std::vector<std::uint8_t>& out, double v) {
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

template <MapKind Kind>
std::vector<std::uint8_t> encode(const VectorMap<Kind>& map) {
  std::vector<std::uint8_t> out;
  out.reserve(kMapHeaderSize + map.values().size() * 8);
  out.insert(out.end(), std::begin(kMapMagic), std::end(kMapMagic));
  out.push_back(kMapVersion);
  out.push_back(static_cast<std::uint8_t>(Kind));
  out.push_back(0);
  out.push_back(0);
  put_u32(out, static_cast<std::uint32_t>(map.height()));
  put_u32(out, static_cast<std::uint32_t>(map.width()));
  put_u32(out, kMapChannels);
  for (const Vec2 v : map.values()) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw Error(Errc::kNonFinite, "map contains a non-finite value");
    }
    put_f32(out, v.x);
    put_f32(out, v.y);
  }
  return out;
}

template <MapKind Kind>
VectorMap<Kind> decode(const std::vector<std::uint8_t>& bytes) {
  const MapFileHeader header = decode_map_header(bytes);
  if (header.kind != Kind) {
    throw Error(Errc::kKindMismatch,
                Kind == MapKind::kFlow ? "expected a flow map, found a dvm"
                                       : "expected a dvm, found a flow map");
  }
  VectorMap<Kind> map(static_cast<int>(header.height),
                      static_cast<int>(header.width));
  const std::uint8_t* p = bytes.data() + kMapHeaderSize;
  for (Vec2& v : map.values()) {
    v.x = std::bit_cast<float>(get_u32(p));
    v.y = std::bit_cast<float>(get_u32(p + 4));
    p += 8;
  }
  return map;
}

}  // namespace

std::vector<std::uint8_t> encode_map(const FlowMap& map) { return encode(map); }
std::vector<std::uint8_t> encode_map(const DistortionVectorMap& map) {
  return encode(map);
}

MapFileHeader decode_map_header(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kMapHeaderSize) {
    throw Error(Errc::kTruncated, "map header shorter than 20 bytes");
  }
  if (std::memcmp(bytes.data(), kMapMagic, 4) != 0) {
    throw Error(Errc::kBadMagic, "not an RFIR map file");
  }
  MapFileHeader h;
  h.version = bytes[4];
  if (h.version != kMapVersion) {
    throw Error(Errc::kBadVersion,
                "unsupported map version " + std::to_string(h.version));
  }
  if (bytes[5] > 1) {
    throw Error(Errc::kKindMismatch, "unknown map kind " + std::to_string(bytes[5]));
  }
  h.kind = static_cast<MapKind>(bytes[5]);
  h.height = get_u32(bytes.data() + 8);
  h.width = get_u32(bytes.data() + 12);
  h.channels = get_u32(bytes.data() + 16);
  if (h.channels != kMapChannels || h.height == 0 || h.width == 0) {
    throw Error(Errc::kSchemaError, "bad map dimensions or channel count");
  }
  const std::uint64_t payload = std::uint64_t(h.height) * h.width * h.channels * 4;
  if (bytes.size() - kMapHeaderSize < payload) {
    throw Error(Errc::kTruncated, "map payload shorter than its header claims");
  }
  return h;
}

FlowMap decode_flow(const std::vector<std::uint8_t>& bytes) {
  return decode<MapKind::kFlow>(bytes);
}

DistortionVectorMap decode_dvm(const std::vector<std::uint8_t>& bytes) {
  return decode<MapKind::kDvm>(bytes);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::kIo, "read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::kIo, "write failed: " + path.string());
}

void write_map(const FlowMap& map, const std::filesystem::path& path) {
  write_file(path, encode(map));
}

void write_map(const DistortionVectorMap& map, const std::filesystem::path& path) {
  write_file(path, encode(map));
}

FlowMap read_flow(const std::filesystem::path& path) {
  return decode_flow(read_file(path));
}

DistortionVectorMap read_dvm(const std::filesystem::path& path) {
  return decode_dvm(read_file(path));
}

AnyMap read_map(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (decode_map_header(bytes).kind == MapKind::kFlow) return decode_flow(bytes);
  return decode_dvm(bytes);
}

}  // namespace fisheye
