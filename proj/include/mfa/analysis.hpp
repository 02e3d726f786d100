#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfa/config.hpp"
#include "mfa/imaging.hpp"
#include "mfa/spectrum.hpp"

namespace mfa {

/// D_f: mean D_0 across grid offsets.
double max_dimension(const MultifractalSpectrum& spec);

inline constexpr int kComparisonGridPoints = 101;

struct ComparisonResult {
  double d_f_a = 0.0;
  double d_f_b = 0.0;
  double delta_df = 0.0;
  double linf_f = 0.0;    // max |f_a - f_b| over the shared alpha range
  double area_gap = 0.0;  // trapezoid integral of |f_a - f_b| over the same range
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  // Common alpha grid with both interpolated left-side curves.
  std::vector<double> alpha;
  std::vector<double> f_a;
  std::vector<double> f_b;
};

/// Compares the left sides of two spectra on a common alpha grid.
/// Throws NoSharedAlphaRange if their alpha intervals do not overlap.
ComparisonResult compare_spectra(const MultifractalSpectrum& a, const MultifractalSpectrum& b);

struct FragmentEntry {
  double area_fraction = 1.0;
  double d_f = 0.0;
  FragmentRect rect;
  MultifractalSpectrum spectrum;
};

/// Entries with strictly decreasing area fraction.
struct FragmentSeries {
  std::vector<FragmentEntry> entries;
};

/// Centered window holding `area_fraction` of the image area.
FragmentRect centered_window(int width, int height, double area_fraction);

/// D_f on nested centered windows of area 1, 1/2, 1/4, ... (`levels` entries),
/// each with a freshly planned scale series.
FragmentSeries fragment_scaling(const GrayscaleImage& img, int levels, const RunConfig& config);

/// Same analysis on explicit rectangles, which must shrink strictly in area.
FragmentSeries fragment_scaling(const GrayscaleImage& img, const std::vector<FragmentRect>& rects,
                                const RunConfig& config);

struct PaintingRecord {
  std::string id;
  std::string title;
  std::string year_label;
  std::string image_path;
  std::optional<std::pair<double, double>> size_cm;
};

/// A manifest record after analysis: either a D_f or an error message.
struct ScoredRecord {
  PaintingRecord record;
  std::optional<double> d_f;
  std::string error;
};

struct OrderRow {
  std::size_t index = 0;  // 1-based manifest position
  std::string id;
  std::string year_label;
  std::optional<double> d_f;
  std::string tag;  // "ordered", "disordered" or "error"
  std::string error;
};

struct YearGroup {
  std::string year_label;
  std::vector<std::size_t> indices;  // rows in this group, manifest order
  std::size_t analyzed = 0;
  double min_df = 0.0;
  double max_df = 0.0;
  double mean_df = 0.0;
};

struct OrderReport {
  double threshold = 0.0;
  std::vector<OrderRow> rows;
  std::vector<YearGroup> groups;  // order of first appearance
};

inline constexpr double kDefaultOrderThreshold = 1.85;

/// Groups records by year label verbatim and tags each D_f against the
/// threshold (>= threshold is "ordered").
OrderReport order_report(const std::vector<ScoredRecord>& records,
                         double order_threshold = kDefaultOrderThreshold);

}  // namespace mfa
