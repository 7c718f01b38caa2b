#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "volcap/asympt.hpp"
#include "volcap/capacity.hpp"
#include "volcap/cli.hpp"
#include "volcap/control.hpp"
#include "volcap/errors.hpp"
#include "volcap/galerkin.hpp"
#include "volcap/io.hpp"
#include "volcap/modelbvp.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace volcap;

namespace {

SpectrumResult galerkin_spectrum(const MatrixFunction& Z, int N, const std::optional<MatrixFunction>& H) {
  const QuadraticFormSpec form = H ? second_variation(*H, Z) : volterra_form(Z);
  const Restriction r = restrict(assemble(form, N), form.constraint, form.width(), N);
  return spectrum(r.matrix, r.asymmetry_residual, N);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral capacities of Volterra-type quadratic forms.";

  py::register_exception<Error>(m, "VolcapError", PyExc_ValueError);

  py::class_<MatrixFunction>(m, "MatrixFunction")
      .def_static("constant", &MatrixFunction::constant, "value"_a)
      .def_static("zero", &MatrixFunction::zero, "rows"_a, "cols"_a)
      .def_static("polynomial", &MatrixFunction::polynomial, "power"_a,
                  "sum_d power[d] t^d on [0, 1].")
      .def_static("piecewise_polynomial", &MatrixFunction::piecewise_polynomial, "breakpoints"_a, "power"_a)
      .def_static(
          "project",
          [](Eigen::Index rows, Eigen::Index cols, const std::function<Eigen::MatrixXd(double)>& f,
             const std::vector<double>& breakpoints, int degree) {
            return MatrixFunction::project(rows, cols, f, breakpoints, degree);
          },
          "rows"_a, "cols"_a, "f"_a, "breakpoints"_a = std::vector<double>{}, "degree"_a = 16)
      .def_static(
          "from_json", [](const std::string& s) { return matrix_function_from_json(json::parse(s)); }, "text"_a)
      .def("to_json", [](const MatrixFunction& f) { return to_json(f).dump(); })
      .def_property_readonly("rows", &MatrixFunction::rows)
      .def_property_readonly("cols", &MatrixFunction::cols)
      .def_property_readonly("breakpoints", &MatrixFunction::breakpoints)
      .def_property_readonly("degree", &MatrixFunction::degree)
      .def_property_readonly("projection_residual", &MatrixFunction::projection_residual)
      .def("__call__", &MatrixFunction::eval, "t"_a)
      .def("derivative", &MatrixFunction::derivative, "order"_a = 1)
      .def("antiderivative", &MatrixFunction::antiderivative)
      .def("integrate", py::overload_cast<double, double>(&MatrixFunction::integrate, py::const_), "a"_a = 0.0,
           "b"_a = 1.0)
      .def("transpose", &MatrixFunction::transpose)
      .def("__add__", [](const MatrixFunction& a, const MatrixFunction& b) { return a + b; })
      .def("__sub__", [](const MatrixFunction& a, const MatrixFunction& b) { return a - b; })
      .def("__neg__", [](const MatrixFunction& a) { return -a; })
      .def("__mul__", [](const MatrixFunction& a, const MatrixFunction& b) { return a * b; })
      .def("__mul__", [](const MatrixFunction& a, double s) { return s * a; })
      .def("__rmul__", [](const MatrixFunction& a, double s) { return s * a; });

  m.def("vstack", &vstack, "top"_a, "bottom"_a);
  m.def("hstack", &hstack, "left"_a, "right"_a);
  m.def(
      "build_Aj", [](const MatrixFunction& Z, int j) { return build_Aj(Z, j, SymplecticForm(Z.rows())); }, "Z"_a,
      "j"_a);

  py::class_<CapacityResult>(m, "CapacityResult")
      .def_readonly("infinite", &CapacityResult::infinite)
      .def_readonly("order", &CapacityResult::order)
      .def_readonly("value", &CapacityResult::value)
      .def_readonly("value_plus", &CapacityResult::value_plus)
      .def_readonly("value_minus", &CapacityResult::value_minus)
      .def_readonly("margin", &CapacityResult::margin)
      .def("to_json", [](const CapacityResult& c) { return to_json(c).dump(); });
  m.def(
      "predict_capacity",
      [](const MatrixFunction& Z, int j_max, double tol) {
        return predict_capacity(Z, SymplecticForm(Z.rows()), j_max, tol);
      },
      "Z"_a, "j_max"_a = 8, "tol"_a = 1e-10);

  py::class_<SpectrumResult>(m, "SpectrumResult")
      .def(py::init([](const std::vector<double>& values) { return spectrum_from_values(values); }), "values"_a)
      .def_readonly("positive", &SpectrumResult::positive)
      .def_readonly("negative", &SpectrumResult::negative)
      .def_readonly("asymmetry_residual", &SpectrumResult::asymmetry_residual)
      .def_readonly("basis_size", &SpectrumResult::basis_size)
      .def("at", &SpectrumResult::at, "n"_a);
  m.def("galerkin_spectrum", &galerkin_spectrum, "Z"_a, "N"_a = 256, "H"_a = std::nullopt,
        "Spectrum of the Volterra form of Z, or of the second variation when H is given, on the vertical "
        "subspace.");
  m.def(
      "exact_spectrum",
      [](double mu, int k, double length, const std::string& parity, int count) {
        if (parity != "even" && parity != "odd") throw DomainError("modelbvp", "parity must be 'even' or 'odd'");
        return exact_spectrum({mu, k, length, parity == "even" ? Parity::even : Parity::odd}, count);
      },
      "mu"_a, "k"_a, "length"_a = 1.0, "parity"_a = "even", "count"_a = 50);
  m.def("merge_direct_sum", py::overload_cast<const std::vector<SpectrumResult>&, int>(&merge_direct_sum),
        "spectra"_a, "count"_a);

  py::class_<SignFit>(m, "SignFit")
      .def_readonly("available", &SignFit::available)
      .def_readonly("count", &SignFit::count)
      .def_readonly("slope", &SignFit::slope)
      .def_readonly("value", &SignFit::value)
      .def_readonly("residual", &SignFit::residual);
  py::class_<CapacityFit>(m, "CapacityFit")
      .def_readonly("infinite", &CapacityFit::infinite)
      .def_readonly("slope", &CapacityFit::slope)
      .def_readonly("order", &CapacityFit::order)
      .def_readonly("plus", &CapacityFit::plus)
      .def_readonly("minus", &CapacityFit::minus)
      .def_property_readonly("window", [](const CapacityFit& f) { return std::pair{f.window.lo, f.window.hi}; });
  m.def(
      "fit_capacity",
      [](const SpectrumResult& s, std::optional<std::pair<int, int>> window, int j_max) {
        Window w;
        if (window) {
          w = {window->first, window->second};
        } else {
          if (s.basis_size == 0) throw DomainError("asympt", "window is required for spectra not from Galerkin");
          w = default_window(s.basis_size);
        }
        return fit_capacity(s, w, j_max);
      },
      "spectrum"_a, "window"_a = std::nullopt, "j_max"_a = 8);
  m.def("counting_function", [](const SpectrumResult& s, int j, double n, const std::string& sign) {
    return counting_function(s, j, n, sign == "minus" ? Sign::minus : Sign::plus);
  }, "spectrum"_a, "j"_a, "n"_a, "sign"_a = "plus");

  py::class_<SkewFactorization>(m, "SkewFactorization")
      .def_readonly("rank", &SkewFactorization::rank)
      .def_readonly("A0", &SkewFactorization::A0)
      .def_readonly("frame", &SkewFactorization::frame)
      .def_readonly("orthonormal_frame", &SkewFactorization::orthonormal_frame)
      .def_readonly("amplitudes", &SkewFactorization::amplitudes)
      .def_readonly("skew_eigs", &SkewFactorization::skew_eigs)
      .def_readonly("reconstruction_error", &SkewFactorization::reconstruction_error)
      .def_readonly("kernel_norm", &SkewFactorization::kernel_norm)
      .def_property_readonly("capacity_bound", [](const SkewFactorization& f) { return capacity_bound(f); });
  m.def(
      "skew_factorize", [](const MatrixFunction& Z, int N, double tol) { return skew_factorize(volterra_form(Z), N, tol); },
      "Z"_a, "N"_a = 64, "tol"_a = 1e-10);

  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("passed", &ConditionReport::pass)
      .def_readonly("witness_t", &ConditionReport::witness_t)
      .def_readonly("witness_value", &ConditionReport::witness_value)
      .def_readonly("capacity", &ConditionReport::capacity)
      .def_readonly("message", &ConditionReport::message);
  m.def("goh_check", &goh_check, "Z"_a, "tol"_a = 1e-10);
  m.def("glc_check", &glc_check, "Z"_a, "tol"_a = 1e-10);

  m.def(
      "gram", [](const MatrixFunction& Z, double t) { return gram(Z, t).gamma; }, "Z"_a, "t"_a = 1.0);
  m.def(
      "realize_lq",
      [](const MatrixFunction& Z) {
        const auto lq = realize_lq(TripleSpec{Z});
        return std::pair{lq.B, lq.Omega};
      },
      "Z"_a, "Returns (B, Omega) of the LQ problem whose second variation has frame Z.");
  m.def(
      "hessian_bound", [](const MatrixFunction& Z, const MatrixFunction& H) { return hessian_bound(Z, H).bound; },
      "Z"_a, "H"_a);
  m.def("legendre_rescaled", &legendre_rescaled, "Z"_a, "H"_a, "degree"_a = 24);
  m.def("gauge_equivalent", &gauge_equivalent, "Z1"_a, "Z2"_a, "tol"_a = 1e-10, "grid"_a = 64);

  m.def(
      "run",
      [](const std::string& spec, const std::string& out, std::uint64_t seed) {
        std::ostringstream log;
        const int code = cli::run({spec, out, seed, false}, log);
        return std::pair{code, log.str()};
      },
      "spec"_a, "out"_a, "seed"_a = 0, "Runs the CLI pipeline; returns (exit_code, log).");
}
