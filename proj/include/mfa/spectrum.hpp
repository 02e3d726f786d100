#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfa/boxcount.hpp"
#include "mfa/imaging.hpp"

namespace mfa {

/// Moment orders. Always holds 0 and 1 exactly, sorted, no duplicates.
class QGrid {
 public:
  QGrid() = default;
  explicit QGrid(std::vector<double> values);

  /// q_min, q_min + step, ..., q_max. The range must put 0 and 1 on grid
  /// points; values are generated as integer multiples of `step`.
  static QGrid range(double q_min, double q_max, double step);
  static QGrid defaults() { return range(-10.0, 10.0, 0.25); }

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::optional<std::size_t> index_of(double q) const;

  bool operator==(const QGrid&) const = default;

 private:
  std::vector<double> values_;
};

struct SpectrumPoint {
  double q = 0.0;
  double tau = 0.0;
  double d_q = 0.0;
  double alpha = 0.0;
  double f_alpha = 0.0;
  double r2_tau = 0.0;
  double r2_alpha = 0.0;
  double r2_f = 0.0;
};

struct DimensionEstimate {
  double q = 0.0;
  double tau = 0.0;
  double d_q = 0.0;
  double r2 = 0.0;
};

struct SingularityEstimate {
  double q = 0.0;
  double alpha = 0.0;
  double f_alpha = 0.0;
  double r2_alpha = 0.0;
  double r2_f = 0.0;
};

/// Spectrum from the distributions of a single grid offset.
struct OffsetSpectrum {
  Offset offset;
  std::vector<SpectrumPoint> points;
};

/// Population standard deviation across offsets, per q.
struct SpectrumSpread {
  double tau = 0.0;
  double d_q = 0.0;
  double alpha = 0.0;
  double f_alpha = 0.0;
};

struct ScaleRange {
  double eps_min = 0.0;
  double eps_max = 0.0;
};

struct MultifractalSpectrum {
  QGrid qgrid;
  std::vector<SpectrumPoint> points;  // means across offsets
  std::vector<SpectrumSpread> spread;
  std::vector<OffsetSpectrum> per_offset;  // sorted by offset
  ScaleRange scale_range;
  std::vector<std::string> warnings;
};

/// Tolerance for monotonicity warnings on sampled images.
inline constexpr double kMonotonicityTolerance = 0.02;

/// Sum of P_i^q; equals the box count at q = 0.
double partition_sum(const MeasureDistribution& dist, double q);

/// Generalized dimensions by log-log least squares against ln(base/eps).
/// q = 1 uses the entropy form. All distributions must share one offset.
std::vector<DimensionEstimate> compute_dq(const std::vector<MeasureDistribution>& dists,
                                          const QGrid& qgrid, double base);

/// Direct estimate of alpha(q), f(q) from q-weighted box measures.
std::vector<SingularityEstimate> chhabra_spectrum(const std::vector<MeasureDistribution>& dists,
                                                  const QGrid& qgrid, double base);

OffsetSpectrum spectrum_at_offset(const std::vector<MeasureDistribution>& dists,
                                  const QGrid& qgrid, double base);

MultifractalSpectrum assemble_spectrum(std::vector<OffsetSpectrum> per_offset,
                                       const QGrid& qgrid, ScaleRange range = {});

/// |f(q) - (q alpha(q) - tau(q))| for each q of the mean spectrum.
std::vector<std::pair<double, double>> legendre_residuals(const MultifractalSpectrum& spec);

/// Points with q >= 0 in ascending alpha: the rising branch up to the maximum.
std::vector<SpectrumPoint> left_side(const MultifractalSpectrum& spec);

/// All (epsilon, offset) scans of an image reduced to a spectrum. `workers`
/// only changes scheduling; output is identical for any value (0 = auto).
MultifractalSpectrum analyze_image(const GrayscaleImage& img, const ScalePlan& plan,
                                   MeasureMode mode, const QGrid& qgrid,
                                   int binary_threshold = kDefaultBinaryThreshold,
                                   unsigned workers = 0);

/// Exact path: block sums of the field at 1, 2, 4, ..., side cells.
MultifractalSpectrum analyze_field(const MeasureField& field, const QGrid& qgrid);

}  // namespace mfa
