#pragma once

#include <vector>

#include "volcap/matfun.hpp"

namespace volcap {

/// A_{2k-1} = (Z^(k-1))^T J Z^(k-1),  A_{2k} = (Z^(k-1))^T J Z^(k).
MatrixFunction build_Aj(const MatrixFunction& Z, int j, const SymplecticForm& J);

struct OrderSearch {
  bool infinite = false;
  int order = 0;                   // meaningful only when !infinite
  std::vector<double> sup_norms;   // grid sup of A_1 .. A_order (or A_jmax)
  /// Largest sup-norm among the orders declared zero; tells how close the
  /// vanishing test came to the tolerance.
  double margin = 0.0;
};

/// Smallest j <= j_max whose A_j exceeds `tol` both in coefficient norm and on
/// a 256-point grid (plus knots).
OrderSearch first_nonzero_order(const MatrixFunction& Z, const SymplecticForm& J, int j_max = 8,
                                double tol = 1e-10);

/// Pointwise mu functions. Odd j: `plus` holds mu_{t,j}, `minus` repeats it.
/// Even j: mu^+ and mu^- from the signed eigenvalues of the symmetric part.
struct MuValue {
  double plus = 0.0;
  double minus = 0.0;
};
MuValue mu_at(const Eigen::MatrixXd& Aj, int j);

struct MuSample {
  double t;
  double plus;
  double minus;
};

struct MuIntegral {
  double plus = 0.0;
  double minus = 0.0;
  int nodes_per_piece = 0;
  bool converged = false;
  std::vector<MuSample> samples;  // at the quadrature nodes actually used
};

/// Integrates the mu profile with Gauss-Legendre per piece, doubling the node
/// count from `nodes` until the relative change drops below `rel_tol`.
MuIntegral mu_profile(const MatrixFunction& Aj, int j, int nodes = 64, double rel_tol = 1e-9,
                      int max_nodes = 8192);

struct CapacityResult {
  bool infinite = false;
  int order = 0;
  double value = 0.0;        // odd order
  double value_plus = 0.0;   // even order
  double value_minus = 0.0;
  double remainder_order = 0.5;
  double margin = 0.0;
  MuIntegral mu;

  bool even() const { return !infinite && order % 2 == 0; }
};

CapacityResult predict_capacity(const MatrixFunction& Z, const SymplecticForm& J, int j_max = 8,
                                double tol = 1e-10);

}  // namespace volcap
