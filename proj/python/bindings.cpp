#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mfa/analysis.hpp"
#include "mfa/cli.hpp"
#include "mfa/report.hpp"
#include "mfa/theory.hpp"

namespace py = pybind11;
using namespace mfa;

namespace {

using U8 = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using U16 = py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>;
using F64 = py::array_t<double, py::array::c_style | py::array::forcecast>;

// 2-D uint8 arrays are 8-bit images; anything else integer is read as 16-bit.
GrayscaleImage to_image(const py::array& arr) {
  if (arr.ndim() != 2) throw py::value_error("image must be a 2-D array");
  const int h = static_cast<int>(arr.shape(0)), w = static_cast<int>(arr.shape(1));
  if (py::isinstance<py::array_t<std::uint8_t>>(arr)) {
    auto a = U8::ensure(arr);
    GrayscaleImage img(w, h);
    std::copy(a.data(), a.data() + a.size(), img.pixels.begin());
    return img;
  }
  auto a = U16::ensure(arr);
  if (!a) throw py::value_error("image must hold unsigned integers");
  GrayscaleImage img(w, h, 0, 65535);
  std::copy(a.data(), a.data() + a.size(), img.pixels.begin());
  return img;
}

py::array from_image(const GrayscaleImage& img) {
  if (img.max_value == 255) {
    U8 out({img.height, img.width});
    std::copy(img.pixels.begin(), img.pixels.end(), out.mutable_data());
    return out;
  }
  U16 out({img.height, img.width});
  std::copy(img.pixels.begin(), img.pixels.end(), out.mutable_data());
  return out;
}

MeasureField to_field(const F64& arr) {
  if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1)) {
    throw py::value_error("field must be a square 2-D array");
  }
  MeasureField f;
  f.side = static_cast<int>(arr.shape(0));
  f.values.assign(arr.data(), arr.data() + arr.size());
  f.validate();
  return f;
}

F64 from_field(const MeasureField& f) {
  F64 out({f.side, f.side});
  std::copy(f.values.begin(), f.values.end(), out.mutable_data());
  return out;
}

F64 column(const std::vector<SpectrumPoint>& pts, double SpectrumPoint::*field) {
  F64 out(static_cast<py::ssize_t>(pts.size()));
  auto* d = out.mutable_data();
  for (std::size_t i = 0; i < pts.size(); ++i) d[i] = pts[i].*field;
  return out;
}

py::dict plan_dict(const ScalePlan& p) {
  py::list offsets;
  for (auto o : p.offsets) offsets.append(py::make_tuple(o.dx, o.dy));
  py::dict d;
  d["sizes"] = p.sizes;
  d["base_size"] = p.base_size;
  d["offsets"] = offsets;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multifractal box-counting analysis";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error((std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::enum_<MeasureMode>(m, "MeasureMode")
      .value("differential", MeasureMode::differential)
      .value("binary", MeasureMode::binary)
      .value("mass", MeasureMode::mass);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("min_box", &RunConfig::min_box)
      .def_readwrite("num_scales", &RunConfig::num_scales)
      .def_readwrite("num_offsets", &RunConfig::num_offsets)
      .def_readwrite("max_area_fraction", &RunConfig::max_area_fraction)
      .def_readwrite("q_min", &RunConfig::q_min)
      .def_readwrite("q_max", &RunConfig::q_max)
      .def_readwrite("q_step", &RunConfig::q_step)
      .def_readwrite("measure_mode", &RunConfig::measure_mode)
      .def_readwrite("binary_threshold", &RunConfig::binary_threshold)
      .def_readwrite("order_threshold", &RunConfig::order_threshold)
      .def_readwrite("workers", &RunConfig::workers)
      .def("validate", &RunConfig::validate);

  py::class_<MultifractalSpectrum>(m, "Spectrum")
      .def_property_readonly("q", [](const MultifractalSpectrum& s) { return column(s.points, &SpectrumPoint::q); })
      .def_property_readonly("tau", [](const MultifractalSpectrum& s) { return column(s.points, &SpectrumPoint::tau); })
      .def_property_readonly("d_q", [](const MultifractalSpectrum& s) { return column(s.points, &SpectrumPoint::d_q); })
      .def_property_readonly("alpha", [](const MultifractalSpectrum& s) { return column(s.points, &SpectrumPoint::alpha); })
      .def_property_readonly("f_alpha", [](const MultifractalSpectrum& s) { return column(s.points, &SpectrumPoint::f_alpha); })
      .def_property_readonly("r2_tau", [](const MultifractalSpectrum& s) { return column(s.points, &SpectrumPoint::r2_tau); })
      .def_property_readonly("d_q_std", [](const MultifractalSpectrum& s) {
        F64 out(static_cast<py::ssize_t>(s.spread.size()));
        for (std::size_t i = 0; i < s.spread.size(); ++i) out.mutable_data()[i] = s.spread[i].d_q;
        return out;
      })
      .def_property_readonly("offsets", [](const MultifractalSpectrum& s) {
        py::list out;
        for (const auto& o : s.per_offset) out.append(py::make_tuple(o.offset.dx, o.offset.dy));
        return out;
      })
      .def_readonly("warnings", &MultifractalSpectrum::warnings)
      .def("left_side", [](const MultifractalSpectrum& s) {
        const auto pts = left_side(s);
        return py::make_tuple(column(pts, &SpectrumPoint::alpha), column(pts, &SpectrumPoint::f_alpha));
      })
      .def("legendre_residuals", [](const MultifractalSpectrum& s) { return legendre_residuals(s); })
      .def_property_readonly("d_f", [](const MultifractalSpectrum& s) { return max_dimension(s); });

  // Imaging
  m.def("load_image", [](const std::filesystem::path& p) { return from_image(load_image(p)); },
        py::arg("path"));
  m.def("decode_image", [](py::bytes data) {
    const std::string s = data;
    std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
    return from_image(decode_image(bytes, detect_format(bytes)));
  });
  m.def("encode_png", [](const py::array& img) {
    const auto bytes = encode_png(to_image(img));
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  });
  m.def("save_png", [](const py::array& img, const std::filesystem::path& p) { save_png(to_image(img), p); });
  m.def("extract_fragment", [](const py::array& img, int x, int y, int w, int h) {
    return from_image(extract_fragment(to_image(img), {x, y, w, h}));
  }, py::arg("image"), py::arg("x"), py::arg("y"), py::arg("w"), py::arg("h"));
  m.def("sierpinski_carpet", [](int level) { return from_image(gen_sierpinski_carpet(level)); },
        py::arg("level"));
  m.def("binomial_cascade", [](int depth, CascadeWeights w) { return from_field(gen_binomial_cascade(depth, w)); },
        py::arg("depth"), py::arg("weights") = CascadeWeights{0.4, 0.3, 0.2, 0.1});
  m.def("render_field", [](const F64& f, int bits) { return from_image(render_field(to_field(f), bits)); },
        py::arg("field"), py::arg("bit_depth") = 8);
  m.def("uniform_square", [](int side, std::uint16_t value) { return from_image(gen_uniform_square(side, value)); },
        py::arg("side"), py::arg("value") = 255);

  // Box counting
  m.def("plan_scales", [](int w, int h, int min_box, int scales, int offsets, double frac) {
    return plan_dict(plan_scales(w, h, min_box, scales, offsets, frac));
  }, py::arg("width"), py::arg("height"), py::arg("min_box") = 30, py::arg("num_scales") = 10,
     py::arg("num_offsets") = 4, py::arg("max_area_fraction") = 1.0);
  m.def("box_measures", [](const py::array& img, int eps, std::pair<int, int> off, MeasureMode mode, int thr) {
    const auto d = box_measures(to_image(img), eps, {off.first, off.second}, mode, thr);
    F64 out(static_cast<py::ssize_t>(d.probabilities.size()));
    std::copy(d.probabilities.begin(), d.probabilities.end(), out.mutable_data());
    return out;
  }, py::arg("image"), py::arg("epsilon"), py::arg("offset") = std::pair<int, int>{0, 0},
     py::arg("mode") = MeasureMode::differential, py::arg("threshold") = kDefaultBinaryThreshold);
  m.def("partition_sum", [](const F64& p, double q) {
    MeasureDistribution d;
    d.probabilities.assign(p.data(), p.data() + p.size());
    return partition_sum(d, q);
  }, py::arg("probabilities"), py::arg("q"));

  // Spectra
  m.def("analyze", [](const py::array& img, const RunConfig& cfg) {
    const auto image = to_image(img);
    py::gil_scoped_release release;
    return analyze(image, cfg);
  }, py::arg("image"), py::arg("config") = RunConfig{});
  m.def("analyze_field", [](const F64& f, double q_min, double q_max, double q_step) {
    return analyze_field(to_field(f), QGrid::range(q_min, q_max, q_step));
  }, py::arg("field"), py::arg("q_min") = -10.0, py::arg("q_max") = 10.0, py::arg("q_step") = 0.25);
  m.def("cascade_spectrum", [](CascadeWeights w, double q_min, double q_max, double q_step) {
    const auto pts = cascade_spectrum(w, QGrid::range(q_min, q_max, q_step));
    py::dict d;
    d["q"] = column(pts, &SpectrumPoint::q);
    d["tau"] = column(pts, &SpectrumPoint::tau);
    d["d_q"] = column(pts, &SpectrumPoint::d_q);
    d["alpha"] = column(pts, &SpectrumPoint::alpha);
    d["f_alpha"] = column(pts, &SpectrumPoint::f_alpha);
    return d;
  }, py::arg("weights"), py::arg("q_min") = -10.0, py::arg("q_max") = 10.0, py::arg("q_step") = 0.25);
  m.def("carpet_dimension", &carpet_dimension);

  // Analysis
  m.def("max_dimension", &max_dimension);
  m.def("compare", [](const MultifractalSpectrum& a, const MultifractalSpectrum& b) {
    const auto r = compare_spectra(a, b);
    py::dict d;
    d["d_f_a"] = r.d_f_a;
    d["d_f_b"] = r.d_f_b;
    d["delta_df"] = r.delta_df;
    d["linf_f"] = r.linf_f;
    d["area_gap"] = r.area_gap;
    d["alpha_range"] = py::make_tuple(r.alpha_lo, r.alpha_hi);
    return d;
  });
  m.def("fragment_scaling", [](const py::array& img, int levels, const RunConfig& cfg) {
    const auto series = fragment_scaling(to_image(img), levels, cfg);
    py::list out;
    for (const auto& e : series.entries) out.append(py::make_tuple(e.area_fraction, e.d_f));
    return out;
  }, py::arg("image"), py::arg("levels") = 4, py::arg("config") = RunConfig{});
  m.def("order_report", [](const std::vector<std::tuple<std::string, std::string, std::optional<double>>>& recs,
                           double threshold) {
    std::vector<ScoredRecord> scored;
    for (const auto& [id, year, d_f] : recs) {
      ScoredRecord s;
      s.record.id = id;
      s.record.year_label = year;
      s.d_f = d_f;
      if (!d_f) s.error = "not analyzed";
      scored.push_back(std::move(s));
    }
    const auto rep = order_report(scored, threshold);
    py::list rows;
    for (const auto& r : rep.rows) {
      py::dict d;
      d["index"] = r.index;
      d["id"] = r.id;
      d["year_label"] = r.year_label;
      d["d_f"] = r.d_f;
      d["tag"] = r.tag;
      rows.append(d);
    }
    return rows;
  }, py::arg("records"), py::arg("threshold") = kDefaultOrderThreshold);

  // Command line, in process: returns (exit_code, stdout, stderr).
  m.def("run", [](std::vector<std::string> args) {
    args.insert(args.begin(), "mfa");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  });
}
