#include "mfa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mfa/error.hpp"
#include "mfa/parallel.hpp"
#include "mfa/regression.hpp"

namespace mfa {

QGrid::QGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::BadArgument, "q grid is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw Error(ErrorCode::BadArgument, "q values must be finite");
    if (i > 0 && !(values_[i] > values_[i - 1])) {
      throw Error(ErrorCode::BadArgument, "q grid must be strictly ascending");
    }
  }
  if (!index_of(0.0) || !index_of(1.0)) {
    throw Error(ErrorCode::BadArgument, "q grid must contain 0 and 1");
  }
}

QGrid QGrid::range(double q_min, double q_max, double step) {
  if (!(step > 0.0) || !(q_min < 0.0) || !(q_max > 1.0)) {
    throw Error(ErrorCode::BadArgument, "q range needs q_min < 0 < 1 < q_max and step > 0");
  }
  const double lo = q_min / step;
  const double hi = q_max / step;
  const double one = 1.0 / step;
  auto integral = [](double v) { return std::abs(v - std::round(v)) < 1e-9; };
  if (!integral(lo) || !integral(hi) || !integral(one)) {
    throw Error(ErrorCode::BadArgument, "q_step must divide the range so 0 and 1 are grid points");
  }
  const long long k_lo = std::llround(lo);
  const long long k_hi = std::llround(hi);
  const long long k_one = std::llround(one);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (long long k = k_lo; k <= k_hi; ++k) {
    values.push_back(k == 0 ? 0.0 : k == k_one ? 1.0 : static_cast<double>(k) * step);
  }
  return QGrid(std::move(values));
}

std::optional<std::size_t> QGrid::index_of(double q) const {
  const auto it = std::find(values_.begin(), values_.end(), q);
  if (it == values_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - values_.begin());
}

double partition_sum(const MeasureDistribution& dist, double q) {
  if (q == 0.0) return static_cast<double>(dist.box_count());
  double sum = 0.0;
  for (double p : dist.probabilities) sum += std::pow(p, q);
  return sum;
}

namespace {

struct ScaleLogs {
  double log_eps = 0.0;  // ln(eps / base)
  std::vector<double> log_p;
};

std::vector<ScaleLogs> prepare(const std::vector<MeasureDistribution>& dists, double base) {
  if (dists.size() < 5) {
    throw Error(ErrorCode::BadArgument, "spectrum estimation needs at least 5 scales");
  }
  if (!(base > 0.0)) throw Error(ErrorCode::BadArgument, "reference scale must be positive");
  std::vector<ScaleLogs> out;
  out.reserve(dists.size());
  for (const auto& d : dists) {
    if (d.offset != dists.front().offset) {
      throw Error(ErrorCode::BadArgument, "distributions mix grid offsets");
    }
    ScaleLogs s;
    s.log_eps = std::log(d.effective_epsilon / base);
    s.log_p.reserve(d.probabilities.size());
    for (double p : d.probabilities) s.log_p.push_back(std::log(p));
    out.push_back(std::move(s));
  }
  return out;
}

// ln sum_i exp(q * log_p[i]), shifted by the largest term.
double log_partition(const std::vector<double>& log_p, double q) {
  if (q == 0.0) return std::log(static_cast<double>(log_p.size()));
  double top = -std::numeric_limits<double>::infinity();
  for (double lp : log_p) top = std::max(top, q * lp);
  double sum = 0.0;
  for (double lp : log_p) sum += std::exp(q * lp - top);
  return top + std::log(sum);
}

}  // namespace

std::vector<DimensionEstimate> compute_dq(const std::vector<MeasureDistribution>& dists,
                                          const QGrid& qgrid, double base) {
  const auto scales = prepare(dists, base);
  const std::size_t n = scales.size();
  std::vector<double> x(n), y(n);
  std::vector<DimensionEstimate> out;
  out.reserve(qgrid.size());
  for (double q : qgrid.values()) {
    DimensionEstimate est;
    est.q = q;
    if (q == 1.0) {
      for (std::size_t k = 0; k < n; ++k) {
        x[k] = scales[k].log_eps;
        double h = 0.0;
        for (std::size_t i = 0; i < dists[k].probabilities.size(); ++i) {
          h += dists[k].probabilities[i] * scales[k].log_p[i];
        }
        y[k] = h;
      }
      const LineFit fit = fit_line(x, y);
      est.d_q = fit.slope;
      est.tau = 0.0;
      est.r2 = fit.r2;
    } else {
      for (std::size_t k = 0; k < n; ++k) {
        x[k] = -scales[k].log_eps;  // ln(base / eps)
        y[k] = log_partition(scales[k].log_p, q);
      }
      const LineFit fit = fit_line(x, y);
      est.d_q = fit.slope / (1.0 - q);
      est.tau = (q - 1.0) * est.d_q;
      est.r2 = fit.r2;
    }
    out.push_back(est);
  }
  return out;
}

std::vector<SingularityEstimate> chhabra_spectrum(const std::vector<MeasureDistribution>& dists,
                                                  const QGrid& qgrid, double base) {
  const auto scales = prepare(dists, base);
  const std::size_t n = scales.size();
  std::vector<double> x(n), a(n), f(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = scales[k].log_eps;

  std::vector<SingularityEstimate> out;
  out.reserve(qgrid.size());
  for (double q : qgrid.values()) {
    for (std::size_t k = 0; k < n; ++k) {
      const auto& lp = scales[k].log_p;
      const double log_i = log_partition(lp, q);
      double sum_a = 0.0, sum_f = 0.0;
      for (double l : lp) {
        const double log_m = q * l - log_i;
        const double m = std::exp(log_m);
        sum_a += m * l;
        sum_f += m * log_m;
      }
      a[k] = sum_a;
      f[k] = sum_f;
    }
    const LineFit fa = fit_line(x, a);
    const LineFit ff = fit_line(x, f);
    out.push_back({q, fa.slope, ff.slope, fa.r2, ff.r2});
  }
  return out;
}

OffsetSpectrum spectrum_at_offset(const std::vector<MeasureDistribution>& dists,
                                  const QGrid& qgrid, double base) {
  const auto dq = compute_dq(dists, qgrid, base);
  const auto sing = chhabra_spectrum(dists, qgrid, base);
  OffsetSpectrum out;
  out.offset = dists.front().offset;
  out.points.reserve(qgrid.size());
  for (std::size_t i = 0; i < qgrid.size(); ++i) {
    out.points.push_back({qgrid[i], dq[i].tau, dq[i].d_q, sing[i].alpha, sing[i].f_alpha,
                          dq[i].r2, sing[i].r2_alpha, sing[i].r2_f});
  }
  return out;
}

namespace {

std::vector<std::string> monotonicity_warnings(const std::vector<SpectrumPoint>& pts) {
  std::vector<std::string> warnings;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].d_q > pts[i - 1].d_q + kMonotonicityTolerance) {
      std::ostringstream msg;
      msg << "d_q increases between q=" << pts[i - 1].q << " and q=" << pts[i].q;
      warnings.push_back(msg.str());
    }
    if (pts[i].alpha > pts[i - 1].alpha + kMonotonicityTolerance) {
      std::ostringstream msg;
      msg << "alpha increases between q=" << pts[i - 1].q << " and q=" << pts[i].q;
      warnings.push_back(msg.str());
    }
  }
  return warnings;
}

}  // namespace

MultifractalSpectrum assemble_spectrum(std::vector<OffsetSpectrum> per_offset,
                                       const QGrid& qgrid, ScaleRange range) {
  if (per_offset.empty()) throw Error(ErrorCode::BadArgument, "no offset spectra to assemble");
  for (const auto& o : per_offset) {
    bool same = o.points.size() == qgrid.size();
    for (std::size_t i = 0; same && i < qgrid.size(); ++i) same = o.points[i].q == qgrid[i];
    if (!same) throw Error(ErrorCode::MismatchedGrids, "offset spectra use different q grids");
  }
  // Fixed reduction order regardless of how the caller collected results.
  std::stable_sort(per_offset.begin(), per_offset.end(),
                   [](const OffsetSpectrum& a, const OffsetSpectrum& b) { return a.offset < b.offset; });

  MultifractalSpectrum spec;
  spec.qgrid = qgrid;
  spec.scale_range = range;
  const double n = static_cast<double>(per_offset.size());
  for (std::size_t i = 0; i < qgrid.size(); ++i) {
    SpectrumPoint mean{};
    mean.q = qgrid[i];
    for (const auto& o : per_offset) {
      const auto& p = o.points[i];
      mean.tau += p.tau;
      mean.d_q += p.d_q;
      mean.alpha += p.alpha;
      mean.f_alpha += p.f_alpha;
      mean.r2_tau += p.r2_tau;
      mean.r2_alpha += p.r2_alpha;
      mean.r2_f += p.r2_f;
    }
    mean.tau /= n;
    mean.d_q /= n;
    mean.alpha /= n;
    mean.f_alpha /= n;
    mean.r2_tau /= n;
    mean.r2_alpha /= n;
    mean.r2_f /= n;

    SpectrumSpread var{};
    for (const auto& o : per_offset) {
      const auto& p = o.points[i];
      var.tau += (p.tau - mean.tau) * (p.tau - mean.tau);
      var.d_q += (p.d_q - mean.d_q) * (p.d_q - mean.d_q);
      var.alpha += (p.alpha - mean.alpha) * (p.alpha - mean.alpha);
      var.f_alpha += (p.f_alpha - mean.f_alpha) * (p.f_alpha - mean.f_alpha);
    }
    spec.points.push_back(mean);
    spec.spread.push_back({std::sqrt(var.tau / n), std::sqrt(var.d_q / n),
                           std::sqrt(var.alpha / n), std::sqrt(var.f_alpha / n)});
  }
  spec.per_offset = std::move(per_offset);
  spec.warnings = monotonicity_warnings(spec.points);
  return spec;
}

std::vector<std::pair<double, double>> legendre_residuals(const MultifractalSpectrum& spec) {
  std::vector<std::pair<double, double>> out;
  out.reserve(spec.points.size());
  for (const auto& p : spec.points) {
    out.emplace_back(p.q, std::abs(p.f_alpha - (p.q * p.alpha - p.tau)));
  }
  return out;
}

std::vector<SpectrumPoint> left_side(const MultifractalSpectrum& spec) {
  std::vector<SpectrumPoint> out;
  for (const auto& p : spec.points) {
    if (p.q >= 0.0) out.push_back(p);
  }
  std::stable_sort(out.begin(), out.end(), [](const SpectrumPoint& a, const SpectrumPoint& b) {
    return a.alpha < b.alpha || (a.alpha == b.alpha && a.q > b.q);
  });
  return out;
}

MultifractalSpectrum analyze_image(const GrayscaleImage& img, const ScalePlan& plan,
                                   MeasureMode mode, const QGrid& qgrid, int binary_threshold,
                                   unsigned workers) {
  img.validate();
  const std::size_t ns = plan.sizes.size();
  const std::size_t no = plan.offsets.size();
  if (ns < 5 || no < 1) throw Error(ErrorCode::BadArgument, "scale plan is incomplete");

  std::vector<MeasureDistribution> scans(ns * no);
  parallel_for(scans.size(), workers, [&](std::size_t i) {
    const std::size_t o = i / ns;
    const std::size_t s = i % ns;
    scans[i] = box_measures(img, plan.sizes[s], plan.offsets[o], mode, binary_threshold);
  });

  // The reference scale is the realized side of the largest planned box.
  const double base = scans[ns - 1].effective_epsilon;
  std::vector<OffsetSpectrum> per_offset(no);
  parallel_for(no, workers, [&](std::size_t o) {
    std::vector<MeasureDistribution> dists(scans.begin() + static_cast<std::ptrdiff_t>(o * ns),
                                           scans.begin() + static_cast<std::ptrdiff_t>((o + 1) * ns));
    per_offset[o] = spectrum_at_offset(dists, qgrid, base);
  });

  ScaleRange range{scans.front().effective_epsilon, base};
  return assemble_spectrum(std::move(per_offset), qgrid, range);
}

MultifractalSpectrum analyze_field(const MeasureField& field, const QGrid& qgrid) {
  field.validate();
  if (field.side < 16 || (field.side & (field.side - 1)) != 0) {
    throw Error(ErrorCode::BadArgument, "exact path needs a power-of-two side of at least 16");
  }
  std::vector<MeasureDistribution> dists;
  for (int eps = 1; eps <= field.side; eps *= 2) dists.push_back(field_measures(field, eps));
  std::vector<OffsetSpectrum> one{spectrum_at_offset(dists, qgrid, field.side)};
  return assemble_spectrum(std::move(one), qgrid, {1.0, static_cast<double>(field.side)});
}

}  // namespace mfa
