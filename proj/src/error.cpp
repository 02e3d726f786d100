#include "mfa/error.hpp"

namespace mfa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedImage: return "MalformedImage";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::LevelTooLarge: return "LevelTooLarge";
    case ErrorCode::BadWeights: return "BadWeights";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::BadArgument: return "BadArgument";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::BadEpsilon: return "BadEpsilon";
    case ErrorCode::BadOffset: return "BadOffset";
    case ErrorCode::NonDividingEpsilon: return "NonDividingEpsilon";
    case ErrorCode::DegenerateRegression: return "DegenerateRegression";
    case ErrorCode::MismatchedGrids: return "MismatchedGrids";
    case ErrorCode::MissingQZero: return "MissingQZero";
    case ErrorCode::NoSharedAlphaRange: return "NoSharedAlphaRange";
    case ErrorCode::FragmentTooSmall: return "FragmentTooSmall";
    case ErrorCode::EmptyManifest: return "EmptyManifest";
    case ErrorCode::EmptyMeasure: return "EmptyMeasure";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace mfa
