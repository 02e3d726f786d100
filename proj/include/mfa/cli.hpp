#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mfa/analysis.hpp"
#include "mfa/config.hpp"
#include "mfa/error.hpp"

namespace mfa::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kGeometryError = 2,
  kComparisonError = 3,
};

int exit_code_for(ErrorCode code);

/// Writes spectrum.csv, spectrum.json and leftside.csv under config.output_dir.
MultifractalSpectrum cmd_analyze(const std::filesystem::path& image, const RunConfig& config);

struct BatchSummary {
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  OrderReport report;
};

/// One spectrum set per record under output_dir/<id>/ plus order_report.csv
/// and order_report.json. Record failures are reported, not thrown.
BatchSummary cmd_batch(const std::filesystem::path& manifest, const RunConfig& config);

/// compare.json and overlay.csv under output_dir.
ComparisonResult cmd_compare(const std::filesystem::path& image_a,
                             const std::filesystem::path& image_b, const RunConfig& config);

/// fragments.csv, fragments.json and fragment_<k>/ spectrum sets. Explicit
/// rectangles replace the nested centered windows when non-empty.
FragmentSeries cmd_fragments(const std::filesystem::path& image, int levels,
                             const std::vector<FragmentRect>& rects, const RunConfig& config);

struct SynthParams {
  std::string kind;  // carpet, cascade, square, noise
  int level = 5;
  int depth = 8;
  CascadeWeights weights{0.4, 0.3, 0.2, 0.1};
  int bit_depth = 8;
  int size = 512;
  int value = 255;
  std::uint32_t seed = 1;
};

/// Writes <kind>.png and the <kind>.json sidecar; returns the image path.
std::filesystem::path cmd_synth(const SynthParams& params, const RunConfig& config);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mfa::cli
