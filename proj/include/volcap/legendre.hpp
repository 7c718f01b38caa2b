#pragma once

#include <Eigen/Dense>

namespace volcap::legendre {

/// Gauss-Legendre rule on [-1, 1]. Exact for polynomials of degree <= 2n-1.
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

GaussRule gauss(int n);

/// Same rule mapped affinely onto [a, b].
GaussRule gauss(int n, double a, double b);

/// P_0(x) .. P_degree(x) by the three-term recurrence.
Eigen::VectorXd values(int degree, double x);

/// Table V(q, d) = P_d(x_q) for d = 0..degree.
Eigen::MatrixXd vandermonde(int degree, const Eigen::VectorXd& x);

/// Orthonormal Legendre basis of L^2([0,1]): e_d(t) = sqrt(2d+1) P_d(2t-1).
/// Returns E(q, d) = e_d(t_q) for d < count.
Eigen::MatrixXd orthonormal_basis(int count, const Eigen::VectorXd& t);

/// Coefficients of the Legendre series interpolating `samples` at the nodes of
/// gauss(n). Row q of `samples` holds the value at node q; the result has one
/// row per degree 0..n-1. Exact for polynomial data of degree <= n-1.
Eigen::MatrixXd forward_transform(const GaussRule& rule, const Eigen::MatrixXd& samples);

/// Cumulative integration matrix on the nodes of `rule` (on [-1, 1]):
/// (S f)(x_q) = int_{-1}^{x_q} f, exact for polynomials of degree <= n-1.
Eigen::MatrixXd cumulative_integration(const GaussRule& rule);

}  // namespace volcap::legendre
