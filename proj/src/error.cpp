#include "fisheye/error.hpp"

#include <cstdio>

namespace fisheye {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kNoBracket: return "NoBracket";
    case Errc::kNotMonotone: return "NotMonotone";
    case Errc::kInvalidTransform: return "InvalidTransform";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kEmptyMask: return "EmptyMask";
    case Errc::kTooSmall: return "TooSmall";
    case Errc::kRejectionExhausted: return "RejectionExhausted";
    case Errc::kNonFinite: return "NonFinite";
    case Errc::kBadMagic: return "BadMagic";
    case Errc::kBadVersion: return "BadVersion";
    case Errc::kKindMismatch: return "KindMismatch";
    case Errc::kTruncated: return "Truncated";
    case Errc::kSchemaError: return "SchemaError";
    case Errc::kIo: return "IoError";
  }
  return "Unknown";
}

namespace {
std::string describe_radius(double r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "derivative not positive at r=%.9g", r);
  return buf;
}
}  // namespace

NotMonotoneError::NotMonotoneError(double radius)
    : Error(Errc::kNotMonotone, describe_radius(radius)), radius_(radius) {}

}  // namespace fisheye
