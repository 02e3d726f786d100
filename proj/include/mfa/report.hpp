#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfa/analysis.hpp"
#include "mfa/config.hpp"
#include "mfa/spectrum.hpp"

namespace mfa {

using Json = nlohmann::ordered_json;

/// Fixed six-significant-digit rendering used in every CSV and in the
/// rounded JSON fields. Negative zero prints as 0.
std::string format_number(double value);
/// The same value parsed back, for JSON fields.
double round6(double value);

std::string csv_field(std::string_view text);

std::string spectrum_csv(const MultifractalSpectrum& spec);
std::string leftside_csv(const MultifractalSpectrum& spec);
std::string fragments_csv(const FragmentSeries& series);
std::string overlay_csv(const ComparisonResult& cmp);
std::string order_report_csv(const OrderReport& report);

Json config_json(const RunConfig& config);
Json plan_json(const ScalePlan& plan);
Json spectrum_json(const MultifractalSpectrum& spec, const RunConfig& config,
                   const ScalePlan& plan, const Json& source);
Json comparison_json(const ComparisonResult& cmp, const RunConfig& config, const Json& sources);
Json order_report_json(const OrderReport& report, const std::vector<ScoredRecord>& records,
                       const RunConfig& config);

/// Manifest: JSON array of {id, title, year_label, image_path, size_cm?}.
/// Relative image paths resolve against the manifest's directory.
std::vector<PaintingRecord> read_manifest(const std::filesystem::path& path);
std::vector<PaintingRecord> parse_manifest(std::string_view text,
                                           const std::filesystem::path& base_dir);

void write_text(const std::filesystem::path& path, std::string_view text);
void write_json(const std::filesystem::path& path, const Json& json);

}  // namespace mfa
