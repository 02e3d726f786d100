#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mfa/cli.hpp"
#include "mfa/report.hpp"
#include "oracle.hpp"

namespace fs = std::filesystem;
using namespace mfa;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result mfa_run(std::vector<std::string> args) {
  args.insert(args.begin(), "mfa");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mfa_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return int(i);
  return -1;
}

fs::path synth(const fs::path& dir, std::vector<std::string> extra) {
  std::vector<std::string> args{"synth"};
  args.insert(args.end(), extra.begin(), extra.end());
  args.insert(args.end(), {"--out", dir.string()});
  auto r = mfa_run(args);
  REQUIRE(r.code == 0);
  return dir / (extra[0] + ".png");
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(mfa_run({}).code == 1);
  CHECK(mfa_run({"analyze"}).code == 1);
  CHECK(mfa_run({"analyze", "x.png", "--mode", "bogus"}).code == 1);
  CHECK(mfa_run({"--help"}).code == 0);
  auto missing = mfa_run({"analyze", "/nonexistent/image.png"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("error") != std::string::npos);
}

TEST_CASE("analyze: tiny image exits 2") {
  auto dir = scratch("tiny");
  save_png(GrayscaleImage(1, 1, 255), dir / "one.png");
  auto r = mfa_run({"analyze", (dir / "one.png").string(), "--out", (dir / "out").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("image too small") != std::string::npos);
}

TEST_CASE("analyze: uniform square writes constant d_q") {
  auto dir = scratch("square");
  auto png = synth(dir, {"square", "--size", "512"});
  auto r = mfa_run({"analyze", png.string(), "--out", (dir / "out").string()});
  REQUIRE(r.code == 0);
  auto rows = read_csv(dir / "out" / "spectrum.csv");
  REQUIRE(rows.size() == 82);
  CHECK(rows[0] == std::vector<std::string>{"q", "tau", "d_q", "alpha", "f_alpha", "r2_tau",
                                            "r2_alpha", "r2_f", "d_q_std"});
  const int dq = column(rows[0], "d_q");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][dq]) - 2.0) <= 0.02);

  auto json = nlohmann::json::parse(slurp(dir / "out" / "spectrum.json"));
  CHECK(json["points"].size() == 81);
  CHECK(json["scale_plan"]["sizes"].front() == 30);
  CHECK(json["scale_plan"]["sizes"].back() == 512);
  CHECK(std::abs(json["d_f"].get<double>() - 2.0) <= 0.02);
  CHECK(fs::exists(dir / "out" / "leftside.csv"));
}

TEST_CASE("analyze: carpet leftside maximum") {
  auto dir = scratch("carpet");
  auto png = synth(dir, {"carpet", "--level", "6"});
  auto side = nlohmann::json::parse(slurp(dir / "carpet.json"));
  CHECK(side["expected_d0"].get<double>() == doctest::Approx(oracle::carpet_d0()));
  auto r = mfa_run({"analyze", png.string(), "--min-box", "3", "--mode", "binary", "--out",
                    (dir / "out").string()});
  REQUIRE(r.code == 0);
  auto rows = read_csv(dir / "out" / "leftside.csv");
  CHECK(rows[0] == std::vector<std::string>{"alpha", "f_alpha"});
  CHECK(rows.size() == 42);
  double fmax = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) fmax = std::max(fmax, std::stod(rows[i][1]));
  CHECK(std::abs(fmax - oracle::carpet_d0()) <= 0.03);
}

TEST_CASE("analyze is deterministic across runs and worker counts") {
  auto dir = scratch("determinism");
  auto png = synth(dir, {"noise", "--size", "300", "--seed", "5"});
  std::vector<fs::path> outs;
  for (std::string workers : {"1", "4", "4", "7"}) {
    const fs::path out = dir / ("out_" + std::to_string(outs.size()));
    REQUIRE(mfa_run({"analyze", png.string(), "--min-box", "6", "--workers", workers, "--out",
                     out.string()})
                .code == 0);
    outs.push_back(out);
  }
  for (const char* name : {"spectrum.csv", "spectrum.json", "leftside.csv"}) {
    const auto ref = slurp(outs[0] / name);
    CHECK(!ref.empty());
    for (std::size_t i = 1; i < outs.size(); ++i) CHECK(slurp(outs[i] / name) == ref);
  }
}

TEST_CASE("batch with a missing file") {
  auto dir = scratch("batch");
  synth(dir, {"square", "--size", "300"});
  synth(dir, {"carpet", "--level", "5"});
  nlohmann::json manifest = nlohmann::json::array();
  manifest.push_back({{"id", "sq"}, {"title", "Square"}, {"year_label", "1950"}, {"image_path", "square.png"}});
  manifest.push_back({{"id", "cp"}, {"title", "Carpet"}, {"year_label", "1950"}, {"image_path", "carpet.png"}});
  manifest.push_back({{"id", "gone"}, {"title", "Gone"}, {"year_label", "1951"}, {"image_path", "missing.png"}});
  std::ofstream(dir / "manifest.json") << manifest.dump(2);

  auto r = mfa_run({"batch", (dir / "manifest.json").string(), "--min-box", "3", "--mode",
                    "binary", "--out", (dir / "out").string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "out" / "sq" / "spectrum.csv"));
  CHECK(fs::exists(dir / "out" / "cp" / "spectrum.json"));
  CHECK(!fs::exists(dir / "out" / "gone" / "spectrum.csv"));
  auto rows = read_csv(dir / "out" / "order_report.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"index", "id", "year_label", "d_f", "tag"});
  CHECK(rows[1][4] == "ordered");
  CHECK(rows[2][4] == "ordered");
  CHECK(rows[3][4] == "error");
  auto report = nlohmann::json::parse(slurp(dir / "out" / "order_report.json"));
  CHECK(report["rows"].size() == 3);
  CHECK(report["groups"].size() == 2);
}

TEST_CASE("batch manifest errors") {
  auto dir = scratch("batch_bad");
  std::ofstream(dir / "empty.json") << "[]";
  CHECK(mfa_run({"batch", (dir / "empty.json").string(), "--out", dir.string()}).code == 1);
  std::ofstream(dir / "dup.json")
      << R"([{"id":"a","year_label":"1","image_path":"x.png"},{"id":"a","year_label":"1","image_path":"y.png"}])";
  CHECK(mfa_run({"batch", (dir / "dup.json").string(), "--out", dir.string()}).code == 1);
  std::ofstream(dir / "allbad.json") << R"([{"id":"a","year_label":"1","image_path":"nope.png"}])";
  CHECK(mfa_run({"batch", (dir / "allbad.json").string(), "--out", (dir / "o").string()}).code == 1);
}

TEST_CASE("compare") {
  auto dir = scratch("compare");
  auto sq = synth(dir, {"square", "--size", "729"});
  auto cp = synth(dir, {"carpet", "--level", "6"});

  auto self = mfa_run({"compare", cp.string(), cp.string(), "--min-box", "3", "--mode", "binary",
                       "--out", (dir / "self").string()});
  REQUIRE(self.code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "self" / "compare.json"));
  CHECK(j["delta_df"].get<double>() == 0.0);
  CHECK(j["linf_f"].get<double>() == 0.0);
  CHECK(read_csv(dir / "self" / "overlay.csv")[0] == std::vector<std::string>{"alpha", "f_a", "f_b"});

  // Both are monofractal points at different alphas: no shared range, exit 3,
  // but the D_f gap is still recorded.
  auto gap = mfa_run({"compare", cp.string(), sq.string(), "--min-box", "3", "--mode", "binary",
                      "--out", (dir / "gap").string()});
  CHECK(gap.code == 3);
  auto g = nlohmann::json::parse(slurp(dir / "gap" / "compare.json"));
  CHECK(g["shared_alpha_range"].is_null());
  CHECK(std::abs(g["delta_df"].get<double>() - (2.0 - oracle::carpet_d0())) <= 0.05);
}

TEST_CASE("fragments") {
  auto dir = scratch("fragments");
  auto sq = synth(dir, {"square", "--size", "512"});
  auto r = mfa_run({"fragments", sq.string(), "--levels", "3", "--out", (dir / "out").string()});
  REQUIRE(r.code == 0);
  auto rows = read_csv(dir / "out" / "fragments.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"area_fraction", "d_f"});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][1]) - 2.0) <= 0.03);
  CHECK(fs::exists(dir / "out" / "fragment_2" / "spectrum.csv"));

  auto rects = mfa_run({"fragments", sq.string(), "--rect", "0,0,512,512", "--rect",
                        "100,100,300,300", "--out", (dir / "rects").string()});
  CHECK(rects.code == 0);
  auto bad = mfa_run({"fragments", sq.string(), "--rect", "0,0,512,512", "--rect",
                      "400,400,300,300", "--out", (dir / "bad").string()});
  CHECK(bad.code == 2);
  auto small = mfa_run({"fragments", sq.string(), "--levels", "6", "--out", (dir / "s").string()});
  CHECK(small.code == 2);
  CHECK(mfa_run({"fragments", sq.string(), "--rect", "1,2,3"}).code == 1);
}

TEST_CASE("synth cascade sidecar carries the closed form") {
  auto dir = scratch("synth");
  auto png = synth(dir, {"cascade", "--depth", "6", "--bit-depth", "16"});
  auto img = load_image(png);
  CHECK(img.width == 64);
  CHECK(img.max_value == 65535);
  auto side = nlohmann::json::parse(slurp(dir / "cascade.json"));
  CHECK(side["depth"] == 6);
  const auto& table = side["expected_spectrum"];
  CHECK(table.size() == 81);
  for (const auto& row : table) {
    const double q = row["q"].get<double>();
    auto c = oracle::cascade_closed_form({0.4, 0.3, 0.2, 0.1}, q);
    CHECK(row["tau"].get<double>() == doctest::Approx(c.tau).epsilon(1e-12));
    CHECK(row["alpha"].get<double>() == doctest::Approx(c.alpha).epsilon(1e-12));
  }
  CHECK(mfa_run({"synth", "cascade", "--weights", "0.5,0.5,0.5,0.5", "--out", dir.string()}).code ==
        1);
  CHECK(mfa_run({"synth", "carpet", "--level", "9", "--out", dir.string()}).code == 1);
  CHECK(mfa_run({"synth", "circle", "--out", dir.string()}).code == 1);
}

TEST_CASE("number formatting") {
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(1.8927892607) == "1.89279");
  CHECK(format_number(-0.0) == "0");
  CHECK(csv_field("a,b") == "\"a,b\"");
}
