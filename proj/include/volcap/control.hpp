#pragma once

#include <string>
#include <vector>

#include "volcap/capacity.hpp"
#include "volcap/galerkin.hpp"
#include "volcap/matfun.hpp"

namespace volcap {

/// Dynamics x' = B_t u, running cost 1/2 |u|^2 + <Omega_t u, x>.
struct ControlProblemLQ {
  MatrixFunction B;
  MatrixFunction Omega;
};

/// ((R^{2n}, sigma), Pi, Z) with Z split into rows (Y; X). Pi is the vertical
/// subspace {(p, 0)}.
struct TripleSpec {
  MatrixFunction Z;

  Eigen::Index n() const { return Z.rows() / 2; }
  MatrixFunction Y() const { return Z.block(0, 0, n(), Z.cols()); }
  MatrixFunction X() const { return Z.block(n(), 0, n(), Z.cols()); }
};

/// -int <H u, u> - int int_{tau < t} sigma(Z_tau u_tau, Z_t u_t), restricted to
/// int X u = 0.
QuadraticFormSpec second_variation(const MatrixFunction& H, const MatrixFunction& Z);

ControlProblemLQ realize_lq(const TripleSpec& triple);

/// Z = (Omega; B) of the second variation of an LQ problem.
MatrixFunction lq_frame(const ControlProblemLQ& problem);

struct GramResult {
  Eigen::MatrixXd gamma;
  double min_eigenvalue = 0.0;
  bool surjective = false;
};

/// Gamma_t = int_0^t X X^T.
GramResult gram(const MatrixFunction& Z, double t, double tol = 1e-10);

struct ConditionReport {
  bool pass = true;
  double witness_t = 0.0;
  double witness_value = 0.0;  // sup |A_1| for Goh, max eigenvalue of A_2 for GLC
  bool has_capacity = false;   // Goh failure: predicted two-sided 1-capacity
  double capacity = 0.0;
  std::string message;
};

/// Grid of 512 points on [0, 1] plus every breakpoint of `f`.
std::vector<double> condition_grid(const MatrixFunction& f);

ConditionReport goh_check(const MatrixFunction& Z, double tol = 1e-10);
/// Requires A_1 == 0 (PreconditionError otherwise).
ConditionReport glc_check(const MatrixFunction& Z, double tol = 1e-10);

struct HigherOrderEntry {
  int j = 0;
  double sup = 0.0;
  double max_eigenvalue = 0.0;  // even j: symmetric part
  double min_eigenvalue = 0.0;
};

/// Sign profile of A_j for j <= j_max. Only j <= 2 carries a known meaning;
/// higher orders are reported for exploration.
std::vector<HigherOrderEntry> higher_order_report(const MatrixFunction& Z, int j_max);

struct HessianBound {
  MatrixFunction hessian;  // exact when H is constant, otherwise grid-sampled piecewise-linear
  bool sampled = false;
  double r_l2 = 0.0;       // L^2 norm of R_t
  double trace_integral = 0.0;
  double bound = 0.0;
};

/// Hess = J Z H^{-1} Z^T J and the bound (sqrt(k) ||R||_2 / 2) sqrt(int tr Hess),
/// with R_t the largest singular value of Z_t (-H_t)^{-1/2}. H must be
/// negative definite everywhere.
HessianBound hessian_bound(const MatrixFunction& Z, const MatrixFunction& H, int grid = 256);

/// Z_t (-H_t)^{-1/2}: the frame of the compact part after v -> (-H)^{-1/2} v.
/// Exact when H is constant, otherwise an L^2 projection of degree `degree`.
MatrixFunction legendre_rescaled(const MatrixFunction& Z, const MatrixFunction& H, int degree = 24);

/// Kernels Z1_t^T J Z1_tau and Z2_t^T J Z2_tau agree on a grid x grid lattice.
bool gauge_equivalent(const MatrixFunction& Z1, const MatrixFunction& Z2, double tol = 1e-10, int grid = 64);

}  // namespace volcap
