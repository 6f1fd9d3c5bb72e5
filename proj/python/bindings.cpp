#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <limits>
#include <sstream>

#include "trstat/app/commands.hpp"
#include "trstat/app/config.hpp"
#include "trstat/distributions.hpp"
#include "trstat/gof.hpp"
#include "trstat/imaging.hpp"
#include "trstat/scenario.hpp"
#include "trstat/statistics.hpp"
#include "trstat/theory.hpp"
#include "trstat/validate.hpp"

namespace py = pybind11;
using namespace trstat;

namespace {

Position2D point(const std::pair<double, double>& p) { return {p.first, p.second}; }

std::vector<Position2D> points(const std::vector<std::pair<double, double>>& ps) {
  std::vector<Position2D> out;
  for (const auto& p : ps) out.push_back(point(p));
  return out;
}

std::vector<std::pair<double, double>> pairs(const std::vector<Position2D>& ps) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : ps) out.emplace_back(p.x, p.y);
  return out;
}

/// values with NaN at masked cells.
RMatrix masked_values(const ImageMap& m) {
  RMatrix v = m.values;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (m.mask.data()[i]) v.data()[i] = std::numeric_limits<double>::quiet_NaN();
  }
  return v;
}

RenderOptions options(std::optional<bool> log_scale, std::optional<std::size_t> frequency) {
  RenderOptions opt;
  opt.log_scale = log_scale;
  if (frequency) {
    opt.combine = FrequencyCombine::Single;
    opt.frequency = *frequency;
  }
  return opt;
}

py::dict ks_dict(const KsResult& r) {
  py::dict d;
  d["distance"] = r.distance;
  d["n"] = r.n;
  d["critical"] = r.critical;
  d["passed"] = r.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_trstat, m) {
  m.doc() = "Time-reversal imaging statistics";

  static py::exception<Error> base_error(m, "TrstatError");
  static py::exception<app::ConfigError> config_error(m, "ConfigError", base_error.ptr());
  static py::exception<NumericalError> numerical_error(m, "NumericalError", base_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const app::ConfigError& e) {
      PyErr_SetString(config_error.ptr(), e.what());
    } catch (const NumericalError& e) {
      PyErr_SetString(numerical_error.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(base_error.ptr(), e.what());
    }
  });

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("tx", [](const Scenario& s) { return pairs(s.layout.tx); })
      .def_property_readonly("rx", [](const Scenario& s) { return pairs(s.layout.rx); })
      .def_property_readonly("wavelengths", [](const Scenario& s) { return s.plan.wavelengths(); })
      .def_property_readonly("noise_var", [](const Scenario& s) { return s.noise_var; })
      .def_property_readonly("scatterers", [](const Scenario& s) { return pairs(s.scene.positions); })
      .def_property_readonly("tau", [](const Scenario& s) { return s.scene.tau; })
      .def_property_readonly("model", [](const Scenario& s) { return to_string(s.model); })
      .def_property_readonly("grid_x", [](const Scenario& s) {
        std::vector<double> x;
        for (std::size_t i = 0; i < s.grid.nx(); ++i) x.push_back(s.grid.x(i));
        return x;
      })
      .def_property_readonly("grid_y", [](const Scenario& s) {
        std::vector<double> y;
        for (std::size_t i = 0; i < s.grid.ny(); ++i) y.push_back(s.grid.y(i));
        return y;
      });

  m.def("paper_scenario", [](const std::string& model) {
    return paper_scenario(parse_scattering_model(model));
  }, py::arg("model") = "BA");
  m.def("load_config", [](const std::filesystem::path& p) { return app::parse_config(p).scenario; },
        py::arg("path"));

  m.def("green", [](std::pair<double, double> src, std::pair<double, double> dst, double k) {
    return green(point(src), point(dst), k);
  }, py::arg("src"), py::arg("dst"), py::arg("wavenumber"));
  m.def("steering", [](const std::vector<std::pair<double, double>>& tx,
                       const std::vector<std::pair<double, double>>& rx,
                       std::pair<double, double> probe, double k) {
    const SteeringSet s = steering(ArrayLayout{points(tx), points(rx)}, point(probe), k);
    return py::make_tuple(s.a_t, s.a_r, s.b);
  }, py::arg("tx"), py::arg("rx"), py::arg("probe"), py::arg("wavenumber"),
        "Returns (a_t, a_r, b) with b = kron(a_t, a_r).");

  m.def("synthesize", [](const Scenario& s, std::uint64_t seed) {
    const MdmSynthesizer synth(s.layout, s.scene, s.plan, s.noise_var, s.model);
    return synth.realize(seed).matrices;
  }, py::arg("scenario"), py::arg("seed"), "One realization: a list of N_R x N_T matrices.");
  m.def("run_seed", &run_seed, py::arg("base_seed"), py::arg("run"));

  m.def("xi", [](const CVector& x, const CVector& b) { return xi(x, b); }, py::arg("x"), py::arg("b"));
  m.def("glr", [](const std::vector<double>& v) { return glr_stat(v); });
  m.def("rao", [](const std::vector<double>& v) { return rao_stat(v); });
  m.def("wald", [](const std::vector<double>& v) { return wald_stat(v); });
  m.def("gm", [](const std::vector<double>& v) { return gm_stat(v); });
  m.def("hm", [](const std::vector<double>& v) { return hm_stat(v); });
  m.def("mis", [](const CVector& x, const CVector& b) { return mis(x, b); }, py::arg("x"), py::arg("b"));

  m.def("render_map", [](const Scenario& s, const std::string& statistic,
                         const std::vector<CMatrix>& matrices, std::optional<bool> log_scale,
                         std::optional<std::size_t> frequency) {
    MdmSet mdm{matrices, s.noise_var};
    return masked_values(render_map(parse_statistic(statistic), mdm, s.layout, s.plan, s.grid,
                                    options(log_scale, frequency)));
  }, py::arg("scenario"), py::arg("statistic"), py::arg("matrices"), py::arg("log_scale") = py::none(),
        py::arg("frequency") = py::none(), "Map over the scenario grid (rows = y); NaN where masked.");
  m.def("average_maps", [](const Scenario& s, const std::vector<std::string>& statistics,
                           std::size_t runs, std::uint64_t base_seed) {
    McConfig mc;
    mc.statistics.clear();
    for (const auto& n : statistics) mc.statistics.push_back(parse_statistic(n));
    mc.runs = runs;
    mc.base_seed = base_seed;
    py::dict out;
    for (const ImageMap& im : run_average(s, mc).maps) out[py::str(im.label())] = masked_values(im);
    return out;
  }, py::arg("scenario"), py::arg("statistics"), py::arg("runs") = 100, py::arg("base_seed") = 1);

  m.def("noncentrality", [](const Scenario& s, std::pair<double, double> probe) {
    const auto nc = noncentrality_explicit(s.scene, s.layout, s.plan, s.model, s.noise_var, point(probe));
    return py::make_tuple(nc.delta_n, nc.delta_d);
  }, py::arg("scenario"), py::arg("probe"), "(delta_n, delta_d) per frequency.");

  m.def("complex_chi2_cdf", [](double x, int dof, double nc, double scale) {
    return cdf(ComplexChiSquareLaw{dof, nc, scale}, x);
  }, py::arg("x"), py::arg("dof"), py::arg("noncentrality") = 0.0, py::arg("scale") = 1.0);
  m.def("complex_f_cdf", [](double x, int dof_num, int dof_den, double nc_num, double nc_den) {
    return cdf(ComplexFLaw{dof_num, dof_den, nc_num, nc_den}, x);
  }, py::arg("x"), py::arg("dof_num"), py::arg("dof_den"), py::arg("nc_num") = 0.0,
        py::arg("nc_den") = 0.0);
  m.def("complex_f_pdf", [](double x, int dof_num, int dof_den, double nc_num, double nc_den) {
    return pdf(ComplexFLaw{dof_num, dof_den, nc_num, nc_den}, x);
  }, py::arg("x"), py::arg("dof_num"), py::arg("dof_den"), py::arg("nc_num") = 0.0,
        py::arg("nc_den") = 0.0);

  m.def("ks_one_sample", [](std::vector<double> samples, const std::function<double(double)>& f) {
    return ks_dict(ks_one_sample(std::move(samples), f));
  }, py::arg("samples"), py::arg("cdf"));
  m.def("ks_two_sample", [](std::vector<double> a, std::vector<double> b) {
    return ks_dict(ks_two_sample(std::move(a), std::move(b)));
  }, py::arg("a"), py::arg("b"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"trstat"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = app::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs the command-line front end; returns (exit_code, stdout, stderr).");
}
