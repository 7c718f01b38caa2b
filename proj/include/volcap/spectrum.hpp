#pragma once

#include <vector>

#include <Eigen/Dense>

namespace volcap {

/// Signed spectrum in monotone arrangement: positive[0] = lambda_1 is the
/// largest positive eigenvalue, negative[0] = lambda_{-1} the most negative.
struct SpectrumResult {
  std::vector<double> positive;
  std::vector<double> negative;
  double asymmetry_residual = 0.0;
  int basis_size = 0;  // per-component Galerkin size N (0 when not from Galerkin)

  /// lambda_n for n in Z \ {0}; 0 when n exceeds the stored list.
  double at(int n) const;
};

/// Eigenvalues of a symmetric matrix split by sign. Entries with
/// |lambda| <= 1e-12 * ||M||_2 are treated as numerical zeros.
SpectrumResult spectrum(const Eigen::MatrixXd& m, double asymmetry_residual = 0.0,
                        int basis_size = 0);

/// Same split applied to an already computed list of eigenvalues.
SpectrumResult spectrum_from_values(const std::vector<double>& values, double zero_threshold = 0.0);

}  // namespace volcap
