#include <filesystem>

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "exactwkb/classical.hpp"
#include "exactwkb/determinant.hpp"
#include "exactwkb/oracle.hpp"
#include "exactwkb/potential.hpp"
#include "exactwkb/quantize.hpp"
#include "exactwkb/records.hpp"
#include "exactwkb/verify.hpp"
#include "exactwkb/wavefunction.hpp"

namespace py = pybind11;
using namespace exactwkb;

namespace {

Parity parse_parity(const std::string& s) {
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  throw Error(ErrorKind::InvalidArgument, "parity", "expected 'even' or 'odd', got '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact-WKB spectral solver for monic polynomial potentials";

  static py::exception<Error> exc(m, "SolverError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // InvalidArgument reads better as a ValueError on the python side
      if (e.kind() == ErrorKind::InvalidArgument) {
        PyErr_SetString(PyExc_ValueError, e.what());
      } else {
        exc(e.what());
      }
    }
  });

  py::class_<PolynomialPotential>(m, "Potential")
      .def(py::init<int, std::vector<cplx>>(), py::arg("degree"), py::arg("coeffs"))
      .def_static("homogeneous", &PolynomialPotential::homogeneous, py::arg("degree"))
      .def_static(
          "from_ascending",
          [](const std::vector<cplx>& a) { return PolynomialPotential::from_ascending(a); },
          py::arg("ascending"), "Returns (potential, constant shift absorbed into lambda).")
      .def_property_readonly("degree", &PolynomialPotential::degree)
      .def_property_readonly("coeffs", &PolynomialPotential::coeffs)
      .def_property_readonly("is_real", &PolynomialPotential::is_real)
      .def_property_readonly("is_even", &PolynomialPotential::is_even)
      .def("ascending", &PolynomialPotential::ascending)
      .def("roots", &PolynomialPotential::roots, py::arg("lambda_"))
      .def("__call__", [](const PolynomialPotential& v, cplx q) { return v(q); })
      .def("__repr__", [](const PolynomialPotential& v) {
        return "<Potential degree=" + std::to_string(v.degree()) + ">";
      });

  m.def("quartic", [](double v2) { return PolynomialPotential(4, {0.0, v2, 0.0}); }, py::arg("v2"),
        "q^4 + v2 q^2");
  m.def("conjugate", &conjugate, py::arg("potential"), py::arg("ell"));

  py::class_<FixedPointConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("levels", &FixedPointConfig::K)
      .def_readwrite("tol", &FixedPointConfig::tol)
      .def_readwrite("max_iter", &FixedPointConfig::max_outer)
      .def_readwrite("damping", &FixedPointConfig::damping)
      .def_readwrite("newton_tol", &FixedPointConfig::newton_tol)
      .def_readwrite("newton_max", &FixedPointConfig::newton_max)
      .def_readwrite("all_conjugates", &FixedPointConfig::all_conjugates)
      .def_readwrite("homotopy_fallback", &FixedPointConfig::homotopy_fallback);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("sweeps", &SolveReport::sweeps)
      .def_readonly("error_history", &SolveReport::error_history)
      .def_readonly("max_residual", &SolveReport::max_residual)
      .def_readonly("method", &SolveReport::method)
      .def_readonly("continuation_steps", &SolveReport::continuation_steps);

  py::class_<SpectrumModel>(m, "Spectrum")
      .def_property_readonly("eigenvalues", &SpectrumModel::eigenvalues)
      .def("__len__", &SpectrumModel::size)
      .def("level", &SpectrumModel::level, py::arg("i"))
      .def("index", &SpectrumModel::index, py::arg("i"))
      .def("log_det", [](const SpectrumModel& s, cplx lambda) { return log_det(s, lambda).value; },
           py::arg("lambda_"))
      .def("zeta", &zeta, py::arg("lambda_"), py::arg("s") = 1);

  py::class_<CompoundSpectrum>(m, "CompoundSpectrum")
      .def_readonly("sectors", &CompoundSpectrum::sectors)
      .def_readonly("report", &CompoundSpectrum::report)
      .def_property_readonly("L", &CompoundSpectrum::L)
      .def("residual", &quantization_residual, py::arg("ell"), py::arg("i"));

  m.def(
      "solve_homogeneous",
      [](int degree, const std::string& parity, const FixedPointConfig& config) {
        SolveReport report;
        auto s = solve_homogeneous(degree, parse_parity(parity), config, &report);
        return std::make_pair(std::move(s), report);
      },
      py::arg("degree"), py::arg("parity") = "even", py::arg("config") = FixedPointConfig{},
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "solve",
      [](const PolynomialPotential& v, const std::string& parity, const FixedPointConfig& config) {
        return solve_general(v, parse_parity(parity), config);
      },
      py::arg("potential"), py::arg("parity") = "even", py::arg("config") = FixedPointConfig{},
      py::call_guard<py::gil_scoped_release>());
  m.def("wronskian_residual", &wronskian_residual, py::arg("even"), py::arg("odd"), py::arg("lambda_"));

  m.def("regularized_action",
        [](const PolynomialPotential& v, cplx lambda, double q) { return regularized_action(v, lambda, q).value; },
        py::arg("potential"), py::arg("lambda_"), py::arg("q") = 0.0);
  m.def("homogeneous_action", &homogeneous_action, py::arg("degree"), py::arg("lambda_"));
  m.def("quartic_action", py::overload_cast<double, double>(&quartic_action), py::arg("v"), py::arg("lambda_"));

  py::class_<WavefunctionSample>(m, "WavefunctionSample")
      .def_readonly("q", &WavefunctionSample::q)
      .def_readonly("psi", &WavefunctionSample::psi)
      .def_readonly("dpsi", &WavefunctionSample::dpsi)
      .def_readonly("converged", &WavefunctionSample::converged)
      .def_readonly("residual", &WavefunctionSample::residual)
      .def_readonly("diagnostic", &WavefunctionSample::diagnostic);

  m.def(
      "wavefunction",
      [](const PolynomialPotential& v, double E, const std::vector<double>& grid, const FixedPointConfig& config) {
        return profile(v, E, grid, config);
      },
      py::arg("potential"), py::arg("energy"), py::arg("grid"),
        py::arg("config") = FixedPointConfig{}, py::call_guard<py::gil_scoped_release>());

  m.def(
      "shoot_levels",
      [](const PolynomialPotential& v, const std::string& parity, int count) {
        return shoot_levels(v, parse_parity(parity), count);
      },
      py::arg("potential"), py::arg("parity"), py::arg("count"));
  m.def(
      "recessive_solution",
      [](const PolynomialPotential& v, double lambda, const std::vector<double>& grid) {
        const auto sol = recessive_solution(v, lambda, grid);
        std::vector<double> psi, dpsi;
        for (const auto& s : sol.samples) {
          psi.push_back(s.psi_value());
          dpsi.push_back(s.dpsi_value());
        }
        return py::make_tuple(psi, dpsi);
      },
      py::arg("potential"), py::arg("lambda_"), py::arg("grid"));

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("id", &CheckResult::id)
      .def_readonly("name", &CheckResult::name)
      .def_readonly("value", &CheckResult::value)
      .def_readonly("tolerance", &CheckResult::tolerance)
      .def_readonly("passed", &CheckResult::passed)
      .def_readonly("seconds", &CheckResult::seconds)
      .def_readonly("detail", &CheckResult::detail);
  m.def("run_checks", &run_checks, py::arg("ids") = std::vector<int>{}, py::arg("config") = FixedPointConfig{},
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "read_records",
      [](const std::string& path) {
        const auto t = read_records(std::filesystem::path(path));
        py::dict out;
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
          std::vector<double> col;
          for (const auto& row : t.rows) col.push_back(row[c]);
          out[py::str(t.columns[c])] = col;
        }
        return out;
      },
      py::arg("path"));
}
