#include "volcap/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "volcap/errors.hpp"
#include "volcap/legendre.hpp"

namespace volcap {

MatrixFunction build_Aj(const MatrixFunction& Z, int j, const SymplecticForm& J) {
  if (j < 1) throw DomainError("capacity", "A_j needs j >= 1");
  if (Z.rows() != J.dim()) {
    throw ShapeError("capacity", "Z has " + std::to_string(Z.rows()) + " rows, J acts on " +
                                     std::to_string(J.dim()));
  }
  const int k = (j + 1) / 2;
  const MatrixFunction low = Z.derivative(k - 1);
  if (j % 2 == 1) return sandwich(low, J, low);
  return sandwich(low, J, Z.derivative(k));
}

OrderSearch first_nonzero_order(const MatrixFunction& Z, const SymplecticForm& J, int j_max,
                                double tol) {
  if (j_max < 1) throw DomainError("capacity", "j_max must be >= 1");
  if (!(tol > 0.0)) throw DomainError("capacity", "tolerance must be positive");
  OrderSearch out;
  const std::vector<double> grid = sample_grid(Z, 256);
  for (int j = 1; j <= j_max; ++j) {
    const MatrixFunction a = build_Aj(Z, j, J);
    const double sup = a.coefficient_norm() <= tol ? 0.0 : grid_sup_norm(a, grid);
    out.sup_norms.push_back(sup);
    if (sup > tol) {
      out.order = j;
      return out;
    }
    out.margin = std::max(out.margin, sup);
  }
  out.infinite = true;
  return out;
}

MuValue mu_at(const Eigen::MatrixXd& Aj, int j) {
  if (Aj.rows() != Aj.cols()) throw ShapeError("capacity", "A_j must be square");
  if (!Aj.allFinite()) throw NumericalError("capacity", "A_j has non-finite entries");
  MuValue mu;
  if (Aj.size() == 0) return mu;
  if (j % 2 == 1) {
    // Eigenvalues of -A^2 are rho^2, each twice for the pair +-i rho.
    const Eigen::MatrixXd a = 0.5 * (Aj - Aj.transpose());
    const Eigen::MatrixXd s = -(a * a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (s + s.transpose()),
                                                       Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NumericalError("capacity", "eigensolver failed");
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
      const double e = std::max(0.0, eig.eigenvalues()(i));
      mu.plus += 0.5 * std::pow(e, 1.0 / (2.0 * j));
    }
    mu.minus = mu.plus;
    return mu;
  }
  const Eigen::MatrixXd sym = 0.5 * (Aj + Aj.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("capacity", "eigensolver failed");
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double rho = eig.eigenvalues()(i);
    if (rho > 0.0) {
      mu.plus += std::pow(rho, 1.0 / j);
    } else if (rho < 0.0) {
      mu.minus += std::pow(-rho, 1.0 / j);
    }
  }
  return mu;
}

namespace {

MuIntegral integrate_at(const MatrixFunction& Aj, int j, int nodes) {
  MuIntegral out;
  out.nodes_per_piece = nodes;
  const legendre::GaussRule ref = legendre::gauss(nodes);
  for (const auto& piece : Aj.pieces()) {
    const double half = 0.5 * (piece.b - piece.a);
    for (int q = 0; q < nodes; ++q) {
      const double t = piece.a + half * (ref.nodes(q) + 1.0);
      const MuValue mu = mu_at(Aj(t), j);
      if (!std::isfinite(mu.plus) || !std::isfinite(mu.minus)) {
        throw NumericalError("capacity", "non-finite mu at t = " + std::to_string(t));
      }
      out.plus += half * ref.weights(q) * mu.plus;
      out.minus += half * ref.weights(q) * mu.minus;
      out.samples.push_back({t, mu.plus, mu.minus});
    }
  }
  return out;
}

}  // namespace

MuIntegral mu_profile(const MatrixFunction& Aj, int j, int nodes, double rel_tol, int max_nodes) {
  if (j < 1) throw DomainError("capacity", "mu profile needs j >= 1");
  MuIntegral prev = integrate_at(Aj, j, nodes);
  while (nodes * 2 <= max_nodes) {
    nodes *= 2;
    MuIntegral next = integrate_at(Aj, j, nodes);
    const double scale = std::max({std::abs(next.plus), std::abs(next.minus), 1e-300});
    const double change = std::max(std::abs(next.plus - prev.plus), std::abs(next.minus - prev.minus));
    prev = std::move(next);
    if (change <= rel_tol * scale) {
      prev.converged = true;
      break;
    }
  }
  return prev;
}

CapacityResult predict_capacity(const MatrixFunction& Z, const SymplecticForm& J, int j_max,
                                double tol) {
  CapacityResult out;
  const OrderSearch search = first_nonzero_order(Z, J, j_max, tol);
  out.margin = search.margin;
  if (search.infinite) {
    out.infinite = true;
    return out;
  }
  out.order = search.order;
  out.mu = mu_profile(build_Aj(Z, out.order, J), out.order);
  if (out.order % 2 == 1) {
    out.value = std::pow(out.mu.plus, out.order);
  } else {
    out.value_plus = std::pow(out.mu.plus, out.order);
    out.value_minus = std::pow(out.mu.minus, out.order);
  }
  return out;
}

}  // namespace volcap
