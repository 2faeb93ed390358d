#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toral {

enum class ErrorCode {
  Parse,
  NotSquare,
  NotUnimodular,
  NonMonic,
  PrecisionExhausted,
  ZeroRadius,
  NonSymmetricExplicitInput,
  BadExponent,
  DegenerateGrid,
  EscapeCapExceeded,
  DimensionMismatch,
  InsufficientSamples,
  DegenerateVariance,
};

std::string_view to_string(ErrorCode code) noexcept;

/// All library failures are reported through this exception; `code()` is the
/// stable discriminator, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace toral
