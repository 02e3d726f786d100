#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfa {

enum class ErrorCode {
  MalformedImage,
  UnsupportedFormat,
  OutOfBounds,
  LevelTooLarge,
  BadWeights,
  InvalidField,
  BadArgument,
  ImageTooSmall,
  BadEpsilon,
  BadOffset,
  NonDividingEpsilon,
  DegenerateRegression,
  MismatchedGrids,
  MissingQZero,
  NoSharedAlphaRange,
  FragmentTooSmall,
  EmptyManifest,
  EmptyMeasure,
  Io,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mfa
