#include "volcap/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "volcap/errors.hpp"

namespace volcap {

double SpectrumResult::at(int n) const {
  if (n == 0) throw DomainError("galerkin", "eigenvalue index 0 does not exist");
  const auto& side = n > 0 ? positive : negative;
  const std::size_t i = static_cast<std::size_t>(std::abs(n)) - 1;
  return i < side.size() ? side[i] : 0.0;
}

SpectrumResult spectrum_from_values(const std::vector<double>& values, double zero_threshold) {
  SpectrumResult out;
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericalError("galerkin", "non-finite eigenvalue");
    if (v > zero_threshold) {
      out.positive.push_back(v);
    } else if (v < -zero_threshold) {
      out.negative.push_back(v);
    }
  }
  std::sort(out.positive.begin(), out.positive.end(), std::greater<>());
  std::sort(out.negative.begin(), out.negative.end());
  return out;
}

SpectrumResult spectrum(const Eigen::MatrixXd& m, double asymmetry_residual, int basis_size) {
  if (m.rows() != m.cols()) throw ShapeError("galerkin", "spectrum needs a square matrix");
  if (!m.allFinite()) throw NumericalError("galerkin", "matrix has non-finite entries");
  SpectrumResult out;
  if (m.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NumericalError("galerkin", "symmetric eigensolver failed");
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double norm = ev.cwiseAbs().maxCoeff();
    out = spectrum_from_values(std::vector<double>(ev.data(), ev.data() + ev.size()), 1e-12 * norm);
  }
  out.asymmetry_residual = asymmetry_residual;
  out.basis_size = basis_size;
  return out;
}

}  // namespace volcap
