#include "volcap/legendre.hpp"

#include <cmath>
#include <numbers>

#include "volcap/errors.hpp"

namespace volcap::legendre {

GaussRule gauss(int n) {
  if (n < 1) throw DomainError("legendre", "Gauss rule needs at least one node");
  GaussRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  // Newton on P_n from the Tricomi initial guess; nodes are symmetric so only
  // half of them are iterated.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int d = 2; d <= n; ++d) {
        const double p2 = ((2.0 * d - 1.0) * x * p1 - (d - 1.0) * p0) / d;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int d = 2; d <= n; ++d) {
      const double p2 = ((2.0 * d - 1.0) * x * p1 - (d - 1.0) * p0) / d;
      p0 = p1;
      p1 = p2;
    }
    const double pn = n == 1 ? x : p1;
    const double pn1 = n == 1 ? 1.0 : p0;
    dp = n * (x * pn - pn1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0.0;
  return rule;
}

GaussRule gauss(int n, double a, double b) {
  GaussRule rule = gauss(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  rule.nodes = (rule.nodes.array() * half + mid).matrix();
  rule.weights *= half;
  return rule;
}

Eigen::VectorXd values(int degree, double x) {
  Eigen::VectorXd p(degree + 1);
  p(0) = 1.0;
  if (degree >= 1) p(1) = x;
  for (int d = 2; d <= degree; ++d) {
    p(d) = ((2.0 * d - 1.0) * x * p(d - 1) - (d - 1.0) * p(d - 2)) / d;
  }
  return p;
}

Eigen::MatrixXd vandermonde(int degree, const Eigen::VectorXd& x) {
  Eigen::MatrixXd v(x.size(), degree + 1);
  for (Eigen::Index q = 0; q < x.size(); ++q) v.row(q) = values(degree, x(q)).transpose();
  return v;
}

Eigen::MatrixXd orthonormal_basis(int count, const Eigen::VectorXd& t) {
  Eigen::MatrixXd e(t.size(), count);
  if (count == 0) return e;
  for (Eigen::Index q = 0; q < t.size(); ++q) {
    const Eigen::VectorXd p = values(count - 1, 2.0 * t(q) - 1.0);
    for (int d = 0; d < count; ++d) e(q, d) = std::sqrt(2.0 * d + 1.0) * p(d);
  }
  return e;
}

Eigen::MatrixXd forward_transform(const GaussRule& rule, const Eigen::MatrixXd& samples) {
  const int n = static_cast<int>(rule.nodes.size());
  Eigen::MatrixXd v = vandermonde(n - 1, rule.nodes);  // (q, d)
  for (int d = 0; d < n; ++d) v.col(d) *= 0.5 * (2.0 * d + 1.0);
  // c_d = (2d+1)/2 sum_q w_q P_d(x_q) f(x_q)
  return v.transpose() * (rule.weights.asDiagonal() * samples);
}

Eigen::MatrixXd cumulative_integration(const GaussRule& rule) {
  const int n = static_cast<int>(rule.nodes.size());
  const Eigen::MatrixXd p = vandermonde(n, rule.nodes);  // degrees 0..n
  // I_d(x) = int_{-1}^x P_d = (P_{d+1} - P_{d-1}) / (2d+1), I_0 = x + 1.
  Eigen::MatrixXd integrals(n, n);
  for (int d = 0; d < n; ++d) {
    if (d == 0) {
      integrals.col(0) = (rule.nodes.array() + 1.0).matrix();
    } else {
      integrals.col(d) = (p.col(d + 1) - p.col(d - 1)) / (2.0 * d + 1.0);
    }
  }
  Eigen::MatrixXd analysis = p.leftCols(n).transpose() * rule.weights.asDiagonal();
  for (int d = 0; d < n; ++d) analysis.row(d) *= 0.5 * (2.0 * d + 1.0);
  return integrals * analysis;
}

}  // namespace volcap::legendre
