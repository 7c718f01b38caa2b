#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "volcap/matfun.hpp"
#include "volcap/spectrum.hpp"

namespace volcap {

/// Finite-codimension subspace of L^2([0,1], R^k) given by linear constraints.
struct SubspaceSelector {
  enum class Kind { none, moments, custom };

  Kind kind = Kind::none;
  int moments = 0;             // Kind::moments: v_l(1) = 0 for 0 < l <= moments
  MatrixFunction functionals;  // Kind::custom: int_0^1 F(t) v(t) dt = 0, F is r x k

  static SubspaceSelector none() { return {}; }
  static SubspaceSelector moment_constraints(int k);
  static SubspaceSelector custom(MatrixFunction F);
  /// int_0^1 Z_t v_t dt lands in the vertical Lagrangian {(p, 0)}: the
  /// functionals are the lower half X of Z.
  static SubspaceSelector vertical(const MatrixFunction& Z);
};

/// B(u, v) = -int <H v, u> + volterra_sign * <u, K v> with
/// K v(t) = int_0^t Z_t^T J Z_tau v(tau) dtau.
struct QuadraticFormSpec {
  MatrixFunction Z;
  std::optional<MatrixFunction> H;
  SymplecticForm J{2};
  SubspaceSelector constraint;
  double volterra_sign = 1.0;

  Eigen::Index width() const { return Z.cols(); }
};

/// Pure Volterra form with the vertical selector.
QuadraticFormSpec volterra_form(const MatrixFunction& Z);

/// Galerkin matrix M[a][b] = B(e_a, e_b) in the orthonormal Legendre basis,
/// index c*N + d for component c and degree d. Polynomial data is integrated
/// exactly: per piece, Gauss nodes with spectral cumulative integration for
/// the inner integral over tau < t.
Eigen::MatrixXd assemble(const QuadraticFormSpec& spec, int N);

/// Rows are the discrete constraint functionals (r x kN).
Eigen::MatrixXd constraint_matrix(const SubspaceSelector& selector, Eigen::Index k, int N);

/// Coefficients of a basis-expanded function: rows of `F` integrated against
/// the basis, (rows x kN).
Eigen::MatrixXd project_functionals(const MatrixFunction& F, int N);

struct Restriction {
  Eigen::MatrixXd matrix;  // symmetric part of the compressed form
  Eigen::MatrixXd basis;   // kN x dim orthonormal basis of the null space
  double asymmetry_residual = 0.0;
  int constraint_rank = 0;
  int constraint_count = 0;
  bool rank_deficient = false;
};

Restriction restrict(const Eigen::MatrixXd& M, const SubspaceSelector& selector, Eigen::Index k, int N);
Restriction restrict(const Eigen::MatrixXd& M, const Eigen::MatrixXd& constraints);

struct SkewFactorization {
  int rank = 0;                      // 2m
  Eigen::MatrixXd A0;                // canonical J of size 2m
  MatrixFunction frame;              // 2m x k, kernel of the skew part is 1/2 frame^T A0 frame
  MatrixFunction orthonormal_frame;  // 2m x k, L^2-orthonormal rows
  Eigen::VectorXd amplitudes;        // beta_i, frame = diag(sqrt beta) * orthonormal_frame
  std::vector<double> skew_eigs;     // rho_i > 0, eigenvalues of the skew part are +-i rho_i
  std::vector<double> galerkin_skew_eigs;  // same, read off the assembled matrix
  double reconstruction_error = 0.0;  // Hilbert-Schmidt, on the triangle tau < t
  double kernel_norm = 0.0;
  double tol_used = 0.0;
};

SkewFactorization skew_factorize(const QuadraticFormSpec& spec, int N, double tol = 1e-10);

/// 2 sqrt(m) sqrt(sum rho^2).
double capacity_bound(const SkewFactorization& f);

}  // namespace volcap
