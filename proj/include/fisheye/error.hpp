#pragma once

#include <stdexcept>
#include <string>

namespace fisheye {

enum class Errc {
  kInvalidArgument,
  kNoBracket,
  kNotMonotone,
  kInvalidTransform,
  kDimensionMismatch,
  kEmptyMask,
  kTooSmall,
  kRejectionExhausted,
  kNonFinite,
  kBadMagic,
  kBadVersion,
  kKindMismatch,
  kTruncated,
  kSchemaError,
  kIo,
};

const char* errc_name(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class NotMonotoneError : public Error {
 public:
  explicit NotMonotoneError(double radius);

  // First probe radius (normalized) where the derivative is not positive.
  double radius() const noexcept { return radius_; }

 private:
  double radius_;
};

}  // namespace fisheye
