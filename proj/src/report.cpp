#include "mfa/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "mfa/error.hpp"

namespace mfa {

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

double round6(double value) {
  if (!std::isfinite(value)) return value;
  return std::stod(format_number(value));
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string spectrum_csv(const MultifractalSpectrum& spec) {
  std::ostringstream out;
  out << "q,tau,d_q,alpha,f_alpha,r2_tau,r2_alpha,r2_f,d_q_std\n";
  for (std::size_t i = 0; i < spec.points.size(); ++i) {
    const auto& p = spec.points[i];
    out << format_number(p.q) << ',' << format_number(p.tau) << ',' << format_number(p.d_q) << ','
        << format_number(p.alpha) << ',' << format_number(p.f_alpha) << ','
        << format_number(p.r2_tau) << ',' << format_number(p.r2_alpha) << ','
        << format_number(p.r2_f) << ',' << format_number(spec.spread[i].d_q) << '\n';
  }
  return out.str();
}

std::string leftside_csv(const MultifractalSpectrum& spec) {
  std::ostringstream out;
  out << "alpha,f_alpha\n";
  for (const auto& p : left_side(spec)) {
    out << format_number(p.alpha) << ',' << format_number(p.f_alpha) << '\n';
  }
  return out.str();
}

std::string fragments_csv(const FragmentSeries& series) {
  std::ostringstream out;
  out << "area_fraction,d_f\n";
  for (const auto& e : series.entries) {
    out << format_number(e.area_fraction) << ',' << format_number(e.d_f) << '\n';
  }
  return out.str();
}

std::string overlay_csv(const ComparisonResult& cmp) {
  std::ostringstream out;
  out << "alpha,f_a,f_b\n";
  for (std::size_t k = 0; k < cmp.alpha.size(); ++k) {
    out << format_number(cmp.alpha[k]) << ',' << format_number(cmp.f_a[k]) << ','
        << format_number(cmp.f_b[k]) << '\n';
  }
  return out.str();
}

std::string order_report_csv(const OrderReport& report) {
  std::ostringstream out;
  out << "index,id,year_label,d_f,tag\n";
  for (const auto& row : report.rows) {
    out << row.index << ',' << csv_field(row.id) << ',' << csv_field(row.year_label) << ','
        << (row.d_f ? format_number(*row.d_f) : std::string()) << ',' << row.tag << '\n';
  }
  return out.str();
}

Json config_json(const RunConfig& c) {
  Json j;
  j["min_box"] = c.min_box;
  j["num_scales"] = c.num_scales;
  j["num_offsets"] = c.num_offsets;
  j["max_area_fraction"] = c.max_area_fraction;
  j["q_min"] = c.q_min;
  j["q_max"] = c.q_max;
  j["q_step"] = c.q_step;
  j["measure_mode"] = std::string(to_string(c.measure_mode));
  j["binary_threshold"] = c.binary_threshold;
  j["order_threshold"] = c.order_threshold;
  return j;
}

namespace {

Json method_json() {
  Json j;
  j["grayscale"] = "Rec. 601 luma, round half up, alpha over white; full raster, no masking";
  j["differential_measure"] = "max - min + 1 per box";
  j["box_grid"] = "ceil(extent/eps) near-equal boxes per axis; offsets shift interior edges";
  j["scale_series"] = "geometric from min_box to the shorter side, duplicate tilings dropped";
  j["regression"] = "ordinary least squares over all planned scales";
  j["q_equals_one"] = "entropy form";
  j["d_f"] = "mean D_0 across grid offsets";
  return j;
}

Json point_json(const SpectrumPoint& p, bool rounded) {
  auto v = [rounded](double x) { return rounded ? round6(x) : x; };
  Json j;
  j["q"] = v(p.q);
  j["tau"] = v(p.tau);
  j["d_q"] = v(p.d_q);
  j["alpha"] = v(p.alpha);
  j["f_alpha"] = v(p.f_alpha);
  j["r2_tau"] = v(p.r2_tau);
  j["r2_alpha"] = v(p.r2_alpha);
  j["r2_f"] = v(p.r2_f);
  return j;
}

Json points_json(const MultifractalSpectrum& spec, bool rounded) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < spec.points.size(); ++i) {
    Json j = point_json(spec.points[i], rounded);
    const auto& s = spec.spread[i];
    auto v = [rounded](double x) { return rounded ? round6(x) : x; };
    j["d_q_std"] = v(s.d_q);
    j["tau_std"] = v(s.tau);
    j["alpha_std"] = v(s.alpha);
    j["f_alpha_std"] = v(s.f_alpha);
    arr.push_back(std::move(j));
  }
  return arr;
}

Json per_offset_json(const MultifractalSpectrum& spec, bool rounded) {
  Json arr = Json::array();
  for (const auto& o : spec.per_offset) {
    Json j;
    j["offset"] = {o.offset.dx, o.offset.dy};
    Json pts = Json::array();
    for (const auto& p : o.points) pts.push_back(point_json(p, rounded));
    j["points"] = std::move(pts);
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

Json plan_json(const ScalePlan& plan) {
  Json j;
  j["sizes"] = plan.sizes;
  j["base_size"] = plan.base_size;
  Json offsets = Json::array();
  for (const auto& o : plan.offsets) offsets.push_back({o.dx, o.dy});
  j["offsets"] = std::move(offsets);
  j["max_area_fraction"] = plan.max_area_fraction;
  return j;
}

Json spectrum_json(const MultifractalSpectrum& spec, const RunConfig& config,
                   const ScalePlan& plan, const Json& source) {
  const double d_f = max_dimension(spec);
  Json j;
  j["source"] = source;
  j["config"] = config_json(config);
  j["method"] = method_json();
  j["scale_plan"] = plan_json(plan);
  j["scale_range"] = {round6(spec.scale_range.eps_min), round6(spec.scale_range.eps_max)};
  j["d_f"] = round6(d_f);
  j["points"] = points_json(spec, true);
  j["per_offset"] = per_offset_json(spec, true);
  j["warnings"] = spec.warnings;
  Json raw;
  raw["d_f"] = d_f;
  raw["scale_range"] = {spec.scale_range.eps_min, spec.scale_range.eps_max};
  raw["points"] = points_json(spec, false);
  raw["per_offset"] = per_offset_json(spec, false);
  j["raw"] = std::move(raw);
  return j;
}

Json comparison_json(const ComparisonResult& cmp, const RunConfig& config, const Json& sources) {
  Json j;
  j["sources"] = sources;
  j["config"] = config_json(config);
  j["d_f_a"] = round6(cmp.d_f_a);
  j["d_f_b"] = round6(cmp.d_f_b);
  j["delta_df"] = round6(cmp.delta_df);
  j["linf_f"] = round6(cmp.linf_f);
  j["area_gap"] = round6(cmp.area_gap);
  j["shared_alpha_range"] = {round6(cmp.alpha_lo), round6(cmp.alpha_hi)};
  j["grid_points"] = cmp.alpha.size();
  Json raw;
  raw["d_f_a"] = cmp.d_f_a;
  raw["d_f_b"] = cmp.d_f_b;
  raw["delta_df"] = cmp.delta_df;
  raw["linf_f"] = cmp.linf_f;
  raw["area_gap"] = cmp.area_gap;
  raw["shared_alpha_range"] = {cmp.alpha_lo, cmp.alpha_hi};
  j["raw"] = std::move(raw);
  return j;
}

Json order_report_json(const OrderReport& report, const std::vector<ScoredRecord>& records,
                       const RunConfig& config) {
  Json j;
  j["config"] = config_json(config);
  j["threshold"] = report.threshold;
  j["d_f"] = "mean D_0 across grid offsets";
  Json rows = Json::array();
  Json sequence = Json::array();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    const auto& rec = records[i].record;
    Json r;
    r["index"] = row.index;
    r["id"] = row.id;
    r["title"] = rec.title;
    r["year_label"] = row.year_label;
    r["image_path"] = rec.image_path;
    if (rec.size_cm) {
      r["size_cm"] = {rec.size_cm->first, rec.size_cm->second};
    }
    r["d_f"] = row.d_f ? Json(round6(*row.d_f)) : Json(nullptr);
    r["d_f_raw"] = row.d_f ? Json(*row.d_f) : Json(nullptr);
    r["tag"] = row.tag;
    if (!row.error.empty()) r["error"] = row.error;
    rows.push_back(std::move(r));
    if (row.d_f) sequence.push_back({row.index, round6(*row.d_f)});
  }
  j["rows"] = std::move(rows);
  Json groups = Json::array();
  for (const auto& g : report.groups) {
    Json gj;
    gj["year_label"] = g.year_label;
    gj["count"] = g.indices.size();
    gj["analyzed"] = g.analyzed;
    Json idx = Json::array();
    for (auto i : g.indices) idx.push_back(i + 1);
    gj["indices"] = std::move(idx);
    if (g.analyzed > 0) {
      gj["min_d_f"] = round6(g.min_df);
      gj["max_d_f"] = round6(g.max_df);
      gj["mean_d_f"] = round6(g.mean_df);
    }
    groups.push_back(std::move(gj));
  }
  j["groups"] = std::move(groups);
  j["sequence"] = std::move(sequence);
  return j;
}

std::vector<PaintingRecord> parse_manifest(std::string_view text,
                                           const std::filesystem::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadArgument, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::BadArgument, "manifest must be a JSON array");
  if (doc.empty()) throw Error(ErrorCode::EmptyManifest, "manifest has no records");

  std::vector<PaintingRecord> records;
  std::set<std::string> seen;
  for (const auto& item : doc) {
    if (!item.is_object()) throw Error(ErrorCode::BadArgument, "manifest entries must be objects");
    auto text_field = [&](const char* key, bool required) -> std::string {
      if (!item.contains(key)) {
        if (required) throw Error(ErrorCode::BadArgument, std::string("manifest entry lacks ") + key);
        return {};
      }
      if (!item[key].is_string()) {
        throw Error(ErrorCode::BadArgument, std::string("manifest field ") + key + " must be a string");
      }
      return item[key].get<std::string>();
    };
    PaintingRecord rec;
    rec.id = text_field("id", true);
    rec.title = text_field("title", false);
    rec.year_label = text_field("year_label", true);
    rec.image_path = text_field("image_path", true);
    if (rec.id.empty() || rec.id == "." || rec.id == ".." ||
        rec.id.find_first_of("/\\") != std::string::npos) {
      throw Error(ErrorCode::BadArgument, "manifest id '" + rec.id + "' is not a plain name");
    }
    if (!seen.insert(rec.id).second) {
      throw Error(ErrorCode::BadArgument, "duplicate manifest id '" + rec.id + "'");
    }
    if (item.contains("size_cm") && !item["size_cm"].is_null()) {
      const auto& s = item["size_cm"];
      if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
        throw Error(ErrorCode::BadArgument, "size_cm must be [width, height]");
      }
      rec.size_cm = std::make_pair(s[0].get<double>(), s[1].get<double>());
    }
    const std::filesystem::path p(rec.image_path);
    if (p.is_relative()) rec.image_path = (base_dir / p).lexically_normal().string();
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<PaintingRecord> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open manifest " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path.parent_path());
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const Json& json) {
  write_text(path, json.dump(2) + "\n");
}

}  // namespace mfa
