#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "mfa/cli.hpp"
#include "mfa/report.hpp"

namespace mfa::cli {

namespace {

struct Options {
  RunConfig config;
  std::string mode = "differential";
};

void add_config_options(CLI::App* cmd, Options& opt) {
  RunConfig& c = opt.config;
  cmd->add_option("--min-box", c.min_box, "Smallest box side in pixels")->capture_default_str();
  cmd->add_option("--scales", c.num_scales, "Number of box sizes")->capture_default_str();
  cmd->add_option("--offsets", c.num_offsets, "Grid positions (1-4)")->capture_default_str();
  cmd->add_option("--max-area", c.max_area_fraction,
                  "Largest box as a fraction of the shorter side")
      ->capture_default_str();
  cmd->add_option("--q-min", c.q_min)->capture_default_str();
  cmd->add_option("--q-max", c.q_max)->capture_default_str();
  cmd->add_option("--q-step", c.q_step)->capture_default_str();
  cmd->add_option("--mode", opt.mode, "Box measure")
      ->check(CLI::IsMember({"differential", "binary", "mass"}))
      ->capture_default_str();
  cmd->add_option("--threshold", c.binary_threshold, "Foreground threshold for binary mode")
      ->capture_default_str();
  cmd->add_option("--order-threshold", c.order_threshold, "D_f at or above this is ordered")
      ->capture_default_str();
  cmd->add_option("--out", c.output_dir, "Output directory")->capture_default_str();
  cmd->add_option("--workers", c.workers, "Worker threads, 0 = all cores")->capture_default_str();
}

FragmentRect parse_rect(const std::string& text) {
  FragmentRect r;
  char c1 = 0, c2 = 0, c3 = 0;
  std::istringstream in(text);
  if (!(in >> r.x >> c1 >> r.y >> c2 >> r.w >> c3 >> r.h) || c1 != ',' || c2 != ',' ||
      c3 != ',' || !in.eof()) {
    throw Error(ErrorCode::BadArgument, "rectangle must be x,y,w,h: '" + text + "'");
  }
  return r;
}

CascadeWeights parse_weights(const std::vector<double>& w) {
  if (w.size() != 4) throw Error(ErrorCode::BadArgument, "cascade needs exactly 4 weights");
  return {w[0], w[1], w[2], w[3]};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multifractal box-counting analysis of grayscale images", "mfa"};
  app.require_subcommand(1);

  Options opt;
  std::string image, image_b, manifest;
  int levels = 4;
  std::vector<std::string> rects;
  SynthParams synth;
  std::vector<double> weights{0.4, 0.3, 0.2, 0.1};

  auto* analyze = app.add_subcommand("analyze", "Spectrum of one image");
  analyze->add_option("image", image)->required();
  add_config_options(analyze, opt);

  auto* batch = app.add_subcommand("batch", "Spectra and order report for a manifest");
  batch->add_option("manifest", manifest)->required();
  add_config_options(batch, opt);

  auto* compare = app.add_subcommand("compare", "Compare the spectra of two images");
  compare->add_option("image_a", image)->required();
  compare->add_option("image_b", image_b)->required();
  add_config_options(compare, opt);

  auto* fragments = app.add_subcommand("fragments", "D_f over shrinking fragments");
  fragments->add_option("image", image)->required();
  fragments->add_option("--levels", levels, "Nested centered windows")->capture_default_str();
  fragments->add_option("--rect", rects, "Explicit fragment x,y,w,h (repeatable)");
  add_config_options(fragments, opt);

  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic fixture and its sidecar");
  synth_cmd->add_option("kind", synth.kind)
      ->required()
      ->check(CLI::IsMember({"carpet", "cascade", "square", "noise"}));
  synth_cmd->add_option("--level", synth.level, "Carpet level")->capture_default_str();
  synth_cmd->add_option("--depth", synth.depth, "Cascade depth")->capture_default_str();
  synth_cmd->add_option("--weights", weights, "Cascade weights NW,NE,SW,SE")->delimiter(',');
  synth_cmd->add_option("--bit-depth", synth.bit_depth, "Cascade PNG depth (8 or 16)")
      ->capture_default_str();
  synth_cmd->add_option("--size", synth.size, "Square/noise side")->capture_default_str();
  synth_cmd->add_option("--value", synth.value, "Square intensity")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Noise seed")->capture_default_str();
  add_config_options(synth_cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    opt.config.measure_mode = parse_measure_mode(opt.mode);
    RunConfig& config = opt.config;

    if (*analyze) {
      const auto spec = cmd_analyze(image, config);
      out << "D_f " << format_number(max_dimension(spec)) << '\n';
      for (const auto& w : spec.warnings) err << "warning: " << w << '\n';
    } else if (*batch) {
      const auto summary = cmd_batch(manifest, config);
      for (const auto& row : summary.report.rows) {
        out << row.index << ' ' << row.id << ' '
            << (row.d_f ? format_number(*row.d_f) : std::string("-")) << ' ' << row.tag << '\n';
        if (!row.error.empty()) err << row.id << ": " << row.error << '\n';
      }
      return summary.succeeded > 0 ? kSuccess : kInputError;
    } else if (*compare) {
      const auto cmp = cmd_compare(image, image_b, config);
      out << "delta_df " << format_number(cmp.delta_df) << " linf_f "
          << format_number(cmp.linf_f) << " area_gap " << format_number(cmp.area_gap) << '\n';
    } else if (*fragments) {
      std::vector<FragmentRect> parsed;
      for (const auto& r : rects) parsed.push_back(parse_rect(r));
      const auto series = cmd_fragments(image, levels, parsed, config);
      for (const auto& e : series.entries) {
        out << format_number(e.area_fraction) << ' ' << format_number(e.d_f) << '\n';
      }
    } else if (*synth_cmd) {
      synth.weights = parse_weights(weights);
      out << cmd_synth(synth, config).string() << '\n';
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ImageTooSmall || e.code() == ErrorCode::FragmentTooSmall) {
      err << "error: image too small: " << e.what() << '\n';
    } else {
      err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    }
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kSuccess;
}

}  // namespace mfa::cli
