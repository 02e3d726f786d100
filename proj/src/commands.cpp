#include <cmath>
#include <filesystem>
#include <system_error>

#include "mfa/cli.hpp"
#include "mfa/report.hpp"
#include "mfa/theory.hpp"

namespace fs = std::filesystem;

namespace mfa::cli {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ImageTooSmall:
    case ErrorCode::FragmentTooSmall:
    case ErrorCode::BadEpsilon:
    case ErrorCode::BadOffset:
    case ErrorCode::OutOfBounds:
      return kGeometryError;
    case ErrorCode::NoSharedAlphaRange:
      return kComparisonError;
    default:
      return kInputError;
  }
}

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

Json image_source(const fs::path& path, const GrayscaleImage& img) {
  Json j;
  j["image"] = path.string();
  j["width"] = img.width;
  j["height"] = img.height;
  j["bit_depth"] = img.max_value == 255 ? 8 : 16;
  return j;
}

void write_spectrum_set(const fs::path& dir, const MultifractalSpectrum& spec,
                        const RunConfig& config, const ScalePlan& plan, const Json& source) {
  ensure_dir(dir);
  write_text(dir / "spectrum.csv", spectrum_csv(spec));
  write_json(dir / "spectrum.json", spectrum_json(spec, config, plan, source));
  write_text(dir / "leftside.csv", leftside_csv(spec));
}

struct Analysis {
  GrayscaleImage image;
  ScalePlan plan;
  MultifractalSpectrum spectrum;
};

Analysis analyze_path(const fs::path& path, const RunConfig& config) {
  config.validate();
  Analysis a;
  a.image = load_image(path);
  a.plan = config.plan_for(a.image.width, a.image.height);
  a.spectrum = analyze_image(a.image, a.plan, config.measure_mode, config.qgrid(),
                             config.binary_threshold, config.workers);
  return a;
}

}  // namespace

MultifractalSpectrum cmd_analyze(const fs::path& image, const RunConfig& config) {
  Analysis a = analyze_path(image, config);
  write_spectrum_set(config.output_dir, a.spectrum, config, a.plan, image_source(image, a.image));
  return std::move(a.spectrum);
}

BatchSummary cmd_batch(const fs::path& manifest, const RunConfig& config) {
  config.validate();
  const auto records = read_manifest(manifest);
  ensure_dir(config.output_dir);

  std::vector<ScoredRecord> scored;
  scored.reserve(records.size());
  BatchSummary summary;
  for (const auto& rec : records) {
    ScoredRecord s{rec, std::nullopt, {}};
    try {
      Analysis a = analyze_path(rec.image_path, config);
      write_spectrum_set(config.output_dir / rec.id, a.spectrum, config, a.plan,
                         image_source(rec.image_path, a.image));
      s.d_f = max_dimension(a.spectrum);
      ++summary.succeeded;
    } catch (const Error& e) {
      s.error = std::string(to_string(e.code())) + ": " + e.what();
      ++summary.failed;
    }
    scored.push_back(std::move(s));
  }
  summary.report = order_report(scored, config.order_threshold);
  write_text(config.output_dir / "order_report.csv", order_report_csv(summary.report));
  write_json(config.output_dir / "order_report.json",
             order_report_json(summary.report, scored, config));
  return summary;
}

ComparisonResult cmd_compare(const fs::path& image_a, const fs::path& image_b,
                             const RunConfig& config) {
  const Analysis a = analyze_path(image_a, config);
  const Analysis b = analyze_path(image_b, config);
  ensure_dir(config.output_dir);
  Json sources;
  sources["a"] = image_source(image_a, a.image);
  sources["b"] = image_source(image_b, b.image);
  ComparisonResult cmp;
  try {
    cmp = compare_spectra(a.spectrum, b.spectrum);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoSharedAlphaRange) throw;
    // D_f values stay comparable even when the curves are not.
    const double da = max_dimension(a.spectrum);
    const double db = max_dimension(b.spectrum);
    Json j;
    j["sources"] = sources;
    j["config"] = config_json(config);
    j["d_f_a"] = round6(da);
    j["d_f_b"] = round6(db);
    j["delta_df"] = round6(std::abs(da - db));
    j["shared_alpha_range"] = nullptr;
    j["error"] = e.what();
    write_json(config.output_dir / "compare.json", j);
    throw;
  }
  write_json(config.output_dir / "compare.json", comparison_json(cmp, config, sources));
  write_text(config.output_dir / "overlay.csv", overlay_csv(cmp));
  return cmp;
}

FragmentSeries cmd_fragments(const fs::path& image, int levels,
                             const std::vector<FragmentRect>& rects, const RunConfig& config) {
  config.validate();
  const GrayscaleImage img = load_image(image);
  FragmentSeries series =
      rects.empty() ? fragment_scaling(img, levels, config) : fragment_scaling(img, rects, config);

  ensure_dir(config.output_dir);
  Json meta;
  meta["source"] = image_source(image, img);
  meta["config"] = config_json(config);
  meta["layout"] = rects.empty() ? "nested centered windows, area halving" : "explicit rectangles";
  meta["d_f"] = "D_0 of a full multifractal run per fragment";
  Json entries = Json::array();
  for (std::size_t k = 0; k < series.entries.size(); ++k) {
    const auto& e = series.entries[k];
    const fs::path dir = config.output_dir / ("fragment_" + std::to_string(k));
    Json src = image_source(image, img);
    src["rect"] = {e.rect.x, e.rect.y, e.rect.w, e.rect.h};
    write_spectrum_set(dir, e.spectrum, config, config.plan_for(e.rect.w, e.rect.h), src);
    Json ej;
    ej["area_fraction"] = round6(e.area_fraction);
    ej["rect"] = {e.rect.x, e.rect.y, e.rect.w, e.rect.h};
    ej["d_f"] = round6(e.d_f);
    ej["d_f_raw"] = e.d_f;
    ej["directory"] = dir.filename().string();
    entries.push_back(std::move(ej));
  }
  meta["entries"] = std::move(entries);
  write_text(config.output_dir / "fragments.csv", fragments_csv(series));
  write_json(config.output_dir / "fragments.json", meta);
  return series;
}

fs::path cmd_synth(const SynthParams& p, const RunConfig& config) {
  Json side;
  side["kind"] = p.kind;
  GrayscaleImage img;
  if (p.kind == "carpet") {
    img = gen_sierpinski_carpet(p.level);
    side["level"] = p.level;
    side["expected_d0"] = carpet_dimension();
  } else if (p.kind == "cascade") {
    const MeasureField field = gen_binomial_cascade(p.depth, p.weights);
    img = render_field(field, p.bit_depth);
    side["depth"] = p.depth;
    side["weights"] = p.weights;
    side["expected_d0"] = 2.0;
    Json table = Json::array();
    for (const auto& pt : cascade_spectrum(p.weights, config.qgrid())) {
      table.push_back({{"q", pt.q}, {"tau", pt.tau}, {"d_q", pt.d_q}, {"alpha", pt.alpha},
                       {"f_alpha", pt.f_alpha}});
    }
    side["tau_convention"] = "tau(q) = (q - 1) D_q = -log2 sum p^q";
    side["expected_spectrum"] = std::move(table);
  } else if (p.kind == "square") {
    if (p.value < 0 || p.value > 255) throw Error(ErrorCode::BadArgument, "value must be in [0, 255]");
    img = gen_uniform_square(p.size, static_cast<std::uint16_t>(p.value));
    side["size"] = p.size;
    side["value"] = p.value;
    side["expected_d0"] = 2.0;
  } else if (p.kind == "noise") {
    if (p.size < 1) throw Error(ErrorCode::BadArgument, "size must be positive");
    img = gen_noise(p.size, p.size, p.seed);
    side["size"] = p.size;
    side["seed"] = p.seed;
    side["expected_d0"] = 2.0;
  } else {
    throw Error(ErrorCode::BadArgument, "unknown fixture kind '" + p.kind + "'");
  }
  side["width"] = img.width;
  side["height"] = img.height;
  side["bit_depth"] = img.max_value == 255 ? 8 : 16;

  ensure_dir(config.output_dir);
  const fs::path png = config.output_dir / (p.kind + ".png");
  save_png(img, png);
  side["image"] = png.filename().string();
  write_json(config.output_dir / (p.kind + ".json"), side);
  return png;
}

}  // namespace mfa::cli
