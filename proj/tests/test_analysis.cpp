#include <cmath>

#include "doctest.h"
#include "mfa/analysis.hpp"
#include "mfa/error.hpp"
#include "oracle.hpp"

using namespace mfa;

namespace {

ScoredRecord scored(std::string id, std::string year, std::optional<double> d_f) {
  ScoredRecord r;
  r.record.id = std::move(id);
  r.record.year_label = std::move(year);
  r.d_f = d_f;
  if (!d_f) r.error = "missing";
  return r;
}

RunConfig carpet_config() {
  RunConfig cfg;
  cfg.min_box = 3;
  cfg.measure_mode = MeasureMode::binary;
  return cfg;
}

}  // namespace

TEST_CASE("max_dimension") {
  RunConfig cfg;
  CHECK(std::abs(max_dimension(analyze(gen_uniform_square(512), cfg)) - 2.0) <= 0.02);

  auto carpet = analyze_image(gen_sierpinski_carpet(6), plan_scales(729, 729, 3, 6),
                              MeasureMode::binary, QGrid::defaults());
  CHECK(std::abs(max_dimension(carpet) - oracle::carpet_d0()) <= 0.03);

  auto exact = analyze_field(gen_binomial_cascade(7, {0.4, 0.3, 0.2, 0.1}), QGrid::defaults());
  double fmax = 0;
  for (const auto& p : exact.points) fmax = std::max(fmax, p.f_alpha);
  CHECK(std::abs(max_dimension(exact) - fmax) <= 1e-9);

  MultifractalSpectrum empty;
  try {
    max_dimension(empty);
    FAIL("expected MissingQZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingQZero);
  }
}

TEST_CASE("compare_spectra") {
  auto a = analyze_field(gen_binomial_cascade(7, {0.4, 0.3, 0.2, 0.1}), QGrid::defaults());
  auto b = analyze_field(gen_binomial_cascade(7, {0.35, 0.3, 0.2, 0.15}), QGrid::defaults());

  auto self = compare_spectra(a, a);
  CHECK(self.delta_df == 0.0);
  CHECK(self.linf_f == 0.0);
  CHECK(self.area_gap == 0.0);
  CHECK(self.alpha.size() == std::size_t(kComparisonGridPoints));

  auto ab = compare_spectra(a, b);
  auto ba = compare_spectra(b, a);
  CHECK(ab.delta_df == ba.delta_df);
  CHECK(ab.linf_f == ba.linf_f);
  CHECK(ab.area_gap == ba.area_gap);
  CHECK(ab.alpha_lo == ba.alpha_lo);
  CHECK(ab.alpha_hi == ba.alpha_hi);
  CHECK(ab.linf_f > 0.0);
  CHECK(ab.area_gap >= 0.0);
  CHECK(ab.area_gap <= ab.linf_f * (ab.alpha_hi - ab.alpha_lo) + 1e-12);
  CHECK(ab.alpha_lo < ab.alpha_hi);
  CHECK(ab.f_a == ba.f_b);

  // Monofractal points at different alphas share no range.
  RunConfig cfg = carpet_config();
  auto square = analyze(gen_uniform_square(243), cfg);
  auto carpet = analyze(gen_sierpinski_carpet(5), cfg);
  try {
    compare_spectra(square, carpet);
    FAIL("expected NoSharedAlphaRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoSharedAlphaRange);
  }
}

TEST_CASE("carpet vs uniform square D_f gap") {
  RunConfig cfg = carpet_config();
  auto carpet = analyze(gen_sierpinski_carpet(6), cfg);
  auto square = analyze(gen_uniform_square(729), cfg);
  const double gap = std::abs(max_dimension(square) - max_dimension(carpet));
  CHECK(std::abs(gap - (2.0 - oracle::carpet_d0())) <= 0.05);
}

TEST_CASE("centered_window") {
  CHECK(centered_window(100, 80, 1.0) == FragmentRect{0, 0, 100, 80});
  auto half = centered_window(100, 100, 0.25);
  CHECK(half == FragmentRect{25, 25, 50, 50});
  CHECK_THROWS_AS(centered_window(10, 10, 0.0), Error);
}

TEST_CASE("fragment scaling is window invariant on monofractals") {
  RunConfig cfg;
  auto square = fragment_scaling(gen_uniform_square(512), 4, cfg);
  REQUIRE(square.entries.size() == 4);
  double expected_area = 1.0;
  for (const auto& e : square.entries) {
    CHECK(e.area_fraction == expected_area);
    CHECK(std::abs(e.d_f - 2.0) <= 0.03);
    expected_area /= 2;
  }

  auto carpet = fragment_scaling(gen_sierpinski_carpet(6), 2, carpet_config());
  REQUIRE(carpet.entries.size() == 2);
  for (const auto& e : carpet.entries) CHECK(std::abs(e.d_f - oracle::carpet_d0()) <= 0.06);
}

TEST_CASE("fragment scaling errors and explicit rectangles") {
  RunConfig cfg;
  try {
    fragment_scaling(gen_uniform_square(100), 3, cfg);
    FAIL("expected FragmentTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FragmentTooSmall);
  }
  CHECK_THROWS_AS(fragment_scaling(gen_uniform_square(512), 1, cfg), Error);

  auto img = gen_uniform_square(400);
  auto series = fragment_scaling(img, {FragmentRect{0, 0, 400, 400}, FragmentRect{10, 20, 300, 200}},
                                 cfg);
  REQUIRE(series.entries.size() == 2);
  CHECK(series.entries[1].area_fraction == doctest::Approx(60000.0 / 160000.0));
  CHECK(std::abs(series.entries[1].d_f - 2.0) <= 0.03);
  CHECK_THROWS_AS(fragment_scaling(img, {FragmentRect{0, 0, 200, 200}, FragmentRect{0, 0, 300, 300}},
                                   cfg),
                  Error);
  try {
    fragment_scaling(img, {FragmentRect{0, 0, 400, 400}, FragmentRect{300, 300, 200, 50}}, cfg);
    FAIL("expected OutOfBounds");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfBounds);
  }
}

TEST_CASE("order_report") {
  auto one = order_report({scored("a", "1950", 2.0)}, 1.85);
  REQUIRE(one.rows.size() == 1);
  CHECK(one.rows[0].tag == "ordered");
  CHECK(one.rows[0].index == 1);

  auto span = order_report({scored("a", "1947", 1.78), scored("b", "1950", 1.88)});
  CHECK(span.rows[0].tag == "disordered");
  CHECK(span.rows[1].tag == "ordered");
  CHECK(span.groups.size() == 2);

  auto same = order_report({scored("a", "1948", 1.80), scored("b", "1948", 1.84)});
  REQUIRE(same.groups.size() == 1);
  CHECK(same.groups[0].mean_df == doctest::Approx(1.82));
  CHECK(same.groups[0].min_df == 1.80);
  CHECK(same.groups[0].max_df == 1.84);
  CHECK(same.rows[0].tag == "disordered");
  CHECK(same.rows[1].tag == "disordered");

  auto mixed = order_report({scored("a", "1947-1950", 1.9), scored("b", "1951", std::nullopt),
                             scored("c", "1947-1950", 1.7)});
  CHECK(mixed.rows[1].tag == "error");
  CHECK(mixed.groups[0].year_label == "1947-1950");
  CHECK(mixed.groups[0].indices == std::vector<std::size_t>{0, 2});
  CHECK(mixed.groups[1].analyzed == 0);

  try {
    order_report({});
    FAIL("expected EmptyManifest");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyManifest);
  }
}

TEST_CASE("order_report tagging ignores ids and in-group order") {
  std::vector<ScoredRecord> base{scored("a", "1948", 1.80), scored("b", "1948", 1.90),
                                 scored("c", "1950", 1.86), scored("d", "1948", 1.84)};
  auto ref = order_report(base);
  auto relabeled = base;
  for (auto& r : relabeled) r.record.id = "x" + r.record.id;
  auto rel = order_report(relabeled);
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(rel.rows[i].tag == ref.rows[i].tag);

  // Swap two records of the 1948 group.
  auto swapped = base;
  std::swap(swapped[0], swapped[3]);
  auto sw = order_report(swapped);
  CHECK(sw.groups.size() == ref.groups.size());
  CHECK(sw.groups[0].mean_df == doctest::Approx(ref.groups[0].mean_df));
  CHECK(sw.rows[0].tag == ref.rows[3].tag);
  CHECK(sw.rows[3].tag == ref.rows[0].tag);
}
