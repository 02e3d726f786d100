#include "mfa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "mfa/error.hpp"

namespace mfa {

double max_dimension(const MultifractalSpectrum& spec) {
  const auto i = spec.qgrid.index_of(0.0);
  if (!i || *i >= spec.points.size()) {
    throw Error(ErrorCode::MissingQZero, "spectrum has no q = 0 point");
  }
  return spec.points[*i].d_q;
}

namespace {

// Piecewise-linear f(alpha) through points sorted by alpha.
double interpolate(const std::vector<SpectrumPoint>& pts, double alpha) {
  if (alpha <= pts.front().alpha) return pts.front().f_alpha;
  for (std::size_t j = 1; j < pts.size(); ++j) {
    if (alpha <= pts[j].alpha) {
      const double span = pts[j].alpha - pts[j - 1].alpha;
      if (span <= 0.0) return pts[j].f_alpha;
      const double t = (alpha - pts[j - 1].alpha) / span;
      return pts[j - 1].f_alpha + t * (pts[j].f_alpha - pts[j - 1].f_alpha);
    }
  }
  return pts.back().f_alpha;
}

}  // namespace

ComparisonResult compare_spectra(const MultifractalSpectrum& a, const MultifractalSpectrum& b) {
  const auto left_a = left_side(a);
  const auto left_b = left_side(b);
  if (left_a.empty() || left_b.empty()) {
    throw Error(ErrorCode::NoSharedAlphaRange, "spectrum has no q >= 0 points");
  }
  ComparisonResult r;
  r.d_f_a = max_dimension(a);
  r.d_f_b = max_dimension(b);
  r.delta_df = std::abs(r.d_f_a - r.d_f_b);
  r.alpha_lo = std::max(left_a.front().alpha, left_b.front().alpha);
  r.alpha_hi = std::min(left_a.back().alpha, left_b.back().alpha);
  if (!(r.alpha_lo <= r.alpha_hi)) {
    throw Error(ErrorCode::NoSharedAlphaRange,
                "alpha ranges [" + std::to_string(left_a.front().alpha) + ", " +
                    std::to_string(left_a.back().alpha) + "] and [" +
                    std::to_string(left_b.front().alpha) + ", " +
                    std::to_string(left_b.back().alpha) + "] do not overlap");
  }

  const int n = kComparisonGridPoints;
  const double step = (r.alpha_hi - r.alpha_lo) / (n - 1);
  r.alpha.resize(n);
  r.f_a.resize(n);
  r.f_b.resize(n);
  std::vector<double> gap(n);
  for (int k = 0; k < n; ++k) {
    r.alpha[k] = k == n - 1 ? r.alpha_hi : r.alpha_lo + k * step;
    r.f_a[k] = interpolate(left_a, r.alpha[k]);
    r.f_b[k] = interpolate(left_b, r.alpha[k]);
    gap[k] = std::abs(r.f_a[k] - r.f_b[k]);
    r.linf_f = std::max(r.linf_f, gap[k]);
  }
  for (int k = 1; k < n; ++k) {
    r.area_gap += 0.5 * (gap[k - 1] + gap[k]) * (r.alpha[k] - r.alpha[k - 1]);
  }
  return r;
}

FragmentRect centered_window(int width, int height, double area_fraction) {
  if (!(area_fraction > 0.0 && area_fraction <= 1.0)) {
    throw Error(ErrorCode::BadArgument, "area fraction must be in (0, 1]");
  }
  const double scale = std::sqrt(area_fraction);
  const int w = std::max(1, static_cast<int>(std::lround(width * scale)));
  const int h = std::max(1, static_cast<int>(std::lround(height * scale)));
  return {(width - w) / 2, (height - h) / 2, w, h};
}

namespace {

FragmentEntry analyze_fragment(const GrayscaleImage& img, const FragmentRect& rect,
                               double area_fraction, const RunConfig& config) {
  const GrayscaleImage window = extract_fragment(img, rect);
  FragmentEntry entry;
  entry.rect = rect;
  entry.area_fraction = area_fraction;
  try {
    entry.spectrum = analyze(window, config);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ImageTooSmall) {
      throw Error(ErrorCode::FragmentTooSmall,
                  "fragment " + std::to_string(rect.w) + "x" + std::to_string(rect.h) +
                      " too small for the scale plan");
    }
    throw;
  }
  entry.d_f = max_dimension(entry.spectrum);
  return entry;
}

}  // namespace

FragmentSeries fragment_scaling(const GrayscaleImage& img, int levels, const RunConfig& config) {
  if (levels < 2) throw Error(ErrorCode::BadArgument, "fragment levels must be at least 2");
  // The smallest window decides feasibility before any work is done.
  const double smallest = std::ldexp(1.0, -(levels - 1));
  const FragmentRect tiny = centered_window(img.width, img.height, smallest);
  try {
    (void)config.plan_for(tiny.w, tiny.h);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ImageTooSmall) {
      throw Error(ErrorCode::FragmentTooSmall,
                  "smallest fragment " + std::to_string(tiny.w) + "x" + std::to_string(tiny.h) +
                      " too small for the scale plan");
    }
    throw;
  }

  FragmentSeries series;
  for (int k = 0; k < levels; ++k) {
    const double fraction = std::ldexp(1.0, -k);
    series.entries.push_back(
        analyze_fragment(img, centered_window(img.width, img.height, fraction), fraction, config));
  }
  return series;
}

FragmentSeries fragment_scaling(const GrayscaleImage& img, const std::vector<FragmentRect>& rects,
                                const RunConfig& config) {
  if (rects.size() < 2) throw Error(ErrorCode::BadArgument, "need at least two fragments");
  const double total = static_cast<double>(img.width) * img.height;
  FragmentSeries series;
  double previous = 2.0;
  for (const auto& rect : rects) {
    const double fraction = static_cast<double>(rect.w) * rect.h / total;
    if (!(fraction < previous)) {
      throw Error(ErrorCode::BadArgument, "fragment areas must strictly decrease");
    }
    previous = fraction;
    series.entries.push_back(analyze_fragment(img, rect, fraction, config));
  }
  return series;
}

OrderReport order_report(const std::vector<ScoredRecord>& records, double order_threshold) {
  if (records.empty()) throw Error(ErrorCode::EmptyManifest, "manifest has no records");
  OrderReport report;
  report.threshold = order_threshold;
  std::map<std::string, std::size_t> group_of;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    OrderRow row;
    row.index = i + 1;
    row.id = rec.record.id;
    row.year_label = rec.record.year_label;
    row.d_f = rec.d_f;
    row.error = rec.error;
    if (!rec.d_f) {
      row.tag = "error";
    } else {
      row.tag = *rec.d_f >= order_threshold ? "ordered" : "disordered";
    }

    auto [it, inserted] = group_of.try_emplace(row.year_label, report.groups.size());
    if (inserted) report.groups.push_back(YearGroup{row.year_label, {}, 0, 0.0, 0.0, 0.0});
    YearGroup& group = report.groups[it->second];
    group.indices.push_back(i);
    if (row.d_f) {
      const double d = *row.d_f;
      if (group.analyzed == 0) {
        group.min_df = group.max_df = d;
      } else {
        group.min_df = std::min(group.min_df, d);
        group.max_df = std::max(group.max_df, d);
      }
      group.mean_df += d;
      ++group.analyzed;
    }
    report.rows.push_back(std::move(row));
  }
  for (auto& g : report.groups) {
    if (g.analyzed > 0) g.mean_df /= static_cast<double>(g.analyzed);
  }
  return report;
}

}  // namespace mfa
