#include "oracles.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <lapacke.h>

namespace volcap::oracle {

Rule golub_welsch(int n, double a, double b) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    jac(i, i - 1) = beta;
    jac(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  Rule r{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    const double v = eig.eigenvectors()(0, i);
    r.x(i) = a + 0.5 * (b - a) * (eig.eigenvalues()(i) + 1.0);
    r.w(i) = (b - a) * v * v;  // 2 v^2 on [-1, 1], times (b - a) / 2
  }
  return r;
}

double orthonormal_legendre(int d, double t) {
  return std::sqrt(2.0 * d + 1.0) * boost::math::legendre_p(d, 2.0 * t - 1.0);
}

double integral(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 25, 1e-14);
}

Eigen::MatrixXd central_difference(const MatrixFunction& f, double t, int order, double h) {
  if (order == 1) return (f(t + h) - f(t - h)) / (2.0 * h);
  return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
}

namespace {

// W(t) = Z_t E(t) laid out as 2n x kN, basis index c*N + d.
Eigen::MatrixXd frame_times_basis(const MatrixFunction& Z, int N, double t) {
  const Eigen::MatrixXd z = Z(t);
  Eigen::MatrixXd w(z.rows(), z.cols() * N);
  for (int d = 0; d < N; ++d) {
    const double e = orthonormal_legendre(d, t);
    for (Eigen::Index c = 0; c < z.cols(); ++c) w.col(c * N + d) = e * z.col(c);
  }
  return w;
}

}  // namespace

Eigen::MatrixXd brute_force_galerkin(const MatrixFunction& Z, int N, double sign, const MatrixFunction* H,
                                     int points) {
  const Eigen::Index k = Z.cols();
  const Eigen::Index kN = k * N;
  const SymplecticForm J(Z.rows());
  const Rule r = golub_welsch(points);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(kN, kN);
  for (int q = 0; q < points; ++q) {
    const double t = r.x(q);
    Eigen::MatrixXd inner = Eigen::MatrixXd::Zero(Z.rows(), kN);
    for (int s = 0; s < points; ++s) inner += r.w(s) * frame_times_basis(Z, N, t * r.x(s));
    M += sign * r.w(q) * t * frame_times_basis(Z, N, t).transpose() * J.matrix() * inner;
    if (H) {
      Eigen::MatrixXd e(k, kN);
      e.setZero();
      for (int d = 0; d < N; ++d) {
        for (Eigen::Index c = 0; c < k; ++c) e(c, c * N + d) = orthonormal_legendre(d, t);
      }
      M -= r.w(q) * e.transpose() * (*H)(t) * e;
    }
  }
  return M;
}

std::vector<double> periodic_fd_eigenvalues(int k, double length, int grid, int count) {
  const double h = length / grid;
  const int kd = 2 * k;
  // Zig-zag order 0, 1, n-1, 2, n-2, ... keeps periodic neighbours close.
  std::vector<int> order;
  std::vector<int> position(grid);
  order.push_back(0);
  for (int i = 1; static_cast<int>(order.size()) < grid; ++i) {
    order.push_back(i);
    if (static_cast<int>(order.size()) < grid) order.push_back(grid - i);
  }
  for (int p = 0; p < grid; ++p) position[order[p]] = p;

  const int ldab = kd + 1;
  std::vector<double> ab(static_cast<std::size_t>(ldab) * grid, 0.0);
  const double scale = std::pow(h, -2.0 * k);
  for (int p = 0; p < grid; ++p) {
    const int i = order[p];
    for (int d = -k; d <= k; ++d) {
      const int j = ((i + d) % grid + grid) % grid;
      const int q = position[j];
      if (q < p || q - p > kd) continue;
      // (2 - z - 1/z)^k has coefficient (-1)^d C(2k, k - d) at offset d.
      const double c = (d % 2 == 0 ? 1.0 : -1.0) * boost::math::binomial_coefficient<double>(2 * k, k - d) * scale;
      ab[static_cast<std::size_t>(kd + p - q) + static_cast<std::size_t>(q) * ldab] += c;
    }
  }
  std::vector<double> w(grid);
  std::vector<double> z(1);
  std::vector<lapack_int> ifail(grid);
  double q_dummy = 0.0;
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'U', grid, kd, ab.data(), ldab, &q_dummy, 1,
                                         0.0, 0.0, 1, count + 1, 2.0 * LAPACKE_dlamch('S'), &found, w.data(),
                                         z.data(), 1, ifail.data());
  if (info != 0) return {};
  // Drop the constant mode.
  return std::vector<double>(w.begin() + 1, w.begin() + found);
}

}  // namespace volcap::oracle
