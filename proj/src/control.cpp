#include "volcap/control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "volcap/errors.hpp"
#include "volcap/legendre.hpp"

namespace volcap {
namespace {

constexpr const char* kModule = "control";

void check_frame(const MatrixFunction& Z) {
  if (Z.rows() == 0 || Z.rows() % 2 != 0) throw ShapeError(kModule, "Z must have 2n > 0 rows");
}

bool is_constant(const MatrixFunction& f) { return f.degree() == 0 && f.pieces().size() == 1; }

// (-H)^{-1/2} at one point; throws with the location when -H is not positive definite.
Eigen::MatrixXd inverse_sqrt_minus(const Eigen::MatrixXd& H, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(-0.5 * (H + H.transpose()));
  if (eig.info() != Eigen::Success) throw NumericalError(kModule, "eigensolver failed on H");
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (!(lo > 1e-12 * std::max(hi, 1.0))) {
    std::ostringstream msg;
    msg << "H is not negative definite at t = " << t << " (largest eigenvalue " << -lo << ")";
    throw NumericalError(kModule, msg.str());
  }
  return eig.operatorInverseSqrt();
}

// Gauss nodes and weights on every piece delimited by `knots`.
void piece_rule(const std::vector<double>& knots, int nodes, std::vector<double>& t, std::vector<double>& w) {
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), knots.begin(), knots.end());
  edges.push_back(1.0);
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const legendre::GaussRule rule = legendre::gauss(nodes, edges[e], edges[e + 1]);
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
      t.push_back(rule.nodes(q));
      w.push_back(rule.weights(q));
    }
  }
}

}  // namespace

QuadraticFormSpec second_variation(const MatrixFunction& H, const MatrixFunction& Z) {
  check_frame(Z);
  if (H.rows() != Z.cols() || H.cols() != Z.cols()) throw ShapeError(kModule, "H must be k x k with k = columns of Z");
  const std::vector<double> grid = sample_grid(H, 64);
  for (double t : grid) {
    const Eigen::MatrixXd h = H(t);
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
      throw PreconditionError(kModule, "H is not symmetric at t = " + std::to_string(t));
    }
  }
  QuadraticFormSpec spec;
  spec.Z = Z;
  spec.H = H;
  spec.J = SymplecticForm(Z.rows());
  spec.constraint = SubspaceSelector::vertical(Z);
  // sigma(Z_tau u, Z_t u) = u_t^T Z_t^T J Z_tau u_tau, so the double integral is <u, K u>.
  spec.volterra_sign = -1.0;
  return spec;
}

ControlProblemLQ realize_lq(const TripleSpec& triple) {
  check_frame(triple.Z);
  return {triple.X(), triple.Y()};
}

MatrixFunction lq_frame(const ControlProblemLQ& problem) {
  if (problem.B.rows() != problem.Omega.rows() || problem.B.cols() != problem.Omega.cols()) {
    throw ShapeError(kModule, "B and Omega must have the same shape");
  }
  return vstack(problem.Omega, problem.B);
}

GramResult gram(const MatrixFunction& Z, double t, double tol) {
  check_frame(Z);
  if (!(t > 0.0 && t <= 1.0)) throw DomainError(kModule, "gram needs 0 < t <= 1");
  const Eigen::Index n = Z.rows() / 2;
  const MatrixFunction X = Z.block(n, 0, n, Z.cols());
  GramResult out;
  const Eigen::MatrixXd g = (X * X.transpose()).integrate(0.0, t);
  out.gamma = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.gamma, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = eig.eigenvalues().minCoeff();
  out.surjective = out.min_eigenvalue > tol;
  return out;
}

std::vector<double> condition_grid(const MatrixFunction& f) { return sample_grid(f, 512); }

ConditionReport goh_check(const MatrixFunction& Z, double tol) {
  check_frame(Z);
  const SymplecticForm J(Z.rows());
  const MatrixFunction a1 = build_Aj(Z, 1, J);
  ConditionReport out;
  for (double t : condition_grid(a1)) {
    const double v = a1(t).cwiseAbs().maxCoeff();
    if (v > out.witness_value) {
      out.witness_value = v;
      out.witness_t = t;
    }
  }
  out.pass = out.witness_value <= tol;
  if (out.pass) {
    out.message = "A_1 vanishes on the grid";
    return out;
  }
  const CapacityResult cap = predict_capacity(Z, J, 1, tol);
  out.has_capacity = !cap.infinite && cap.order == 1;
  out.capacity = cap.value;
  std::ostringstream msg;
  msg << "A_1 reaches " << out.witness_value << " at t = " << out.witness_t
      << "; the form is strongly indefinite with two-sided 1-capacity " << cap.value;
  out.message = msg.str();
  return out;
}

ConditionReport glc_check(const MatrixFunction& Z, double tol) {
  const ConditionReport goh = goh_check(Z, tol);
  if (!goh.pass) {
    throw PreconditionError(kModule, "generalized Legendre check needs A_1 == 0: " + goh.message);
  }
  const MatrixFunction a2 = build_Aj(Z, 2, SymplecticForm(Z.rows()));
  ConditionReport out;
  out.witness_value = -INFINITY;
  for (double t : condition_grid(a2)) {
    const Eigen::MatrixXd a = a2(t);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
    const double top = eig.eigenvalues().maxCoeff();
    if (top > out.witness_value) {
      out.witness_value = top;
      out.witness_t = t;
    }
  }
  out.pass = out.witness_value <= tol;
  std::ostringstream msg;
  msg << "largest eigenvalue of A_2 is " << out.witness_value << " at t = " << out.witness_t;
  out.message = msg.str();
  return out;
}

std::vector<HigherOrderEntry> higher_order_report(const MatrixFunction& Z, int j_max) {
  check_frame(Z);
  const SymplecticForm J(Z.rows());
  std::vector<HigherOrderEntry> out;
  for (int j = 1; j <= j_max; ++j) {
    const MatrixFunction a = build_Aj(Z, j, J);
    HigherOrderEntry e;
    e.j = j;
    e.max_eigenvalue = -INFINITY;
    e.min_eigenvalue = INFINITY;
    for (double t : condition_grid(a)) {
      const Eigen::MatrixXd v = a(t);
      e.sup = std::max(e.sup, v.cwiseAbs().maxCoeff());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (v + v.transpose()), Eigen::EigenvaluesOnly);
      e.max_eigenvalue = std::max(e.max_eigenvalue, eig.eigenvalues().maxCoeff());
      e.min_eigenvalue = std::min(e.min_eigenvalue, eig.eigenvalues().minCoeff());
    }
    out.push_back(e);
  }
  return out;
}

MatrixFunction legendre_rescaled(const MatrixFunction& Z, const MatrixFunction& H, int degree) {
  check_frame(Z);
  if (H.rows() != Z.cols() || H.cols() != Z.cols()) throw ShapeError(kModule, "H must be k x k with k = columns of Z");
  if (is_constant(H)) return Z * inverse_sqrt_minus(H(0.0), 0.0);
  const std::vector<double> knots = merged_breakpoints(Z, H);
  return MatrixFunction::project(
      Z.rows(), Z.cols(), [&](double t) { return Eigen::MatrixXd(Z(t) * inverse_sqrt_minus(H(t), t)); }, knots,
      std::max(degree, Z.degree()));
}

HessianBound hessian_bound(const MatrixFunction& Z, const MatrixFunction& H, int grid) {
  check_frame(Z);
  if (H.rows() != Z.cols() || H.cols() != Z.cols()) throw ShapeError(kModule, "H must be k x k with k = columns of Z");
  const SymplecticForm J(Z.rows());
  const Eigen::Index k = Z.cols();
  HessianBound out;

  // Every sample point must see a definite H before anything is integrated.
  for (double t : sample_grid(H, grid + 1)) inverse_sqrt_minus(H(t), t);

  if (is_constant(H)) {
    const Eigen::MatrixXd hinv = H(0.0).inverse();
    out.hessian = (J.matrix() * Z) * Eigen::MatrixXd(hinv) * (Z.transpose() * J.matrix());
  } else {
    out.sampled = true;
    std::vector<MatrixFunction::Piece> pieces;
    auto value = [&](double t) {
      return Eigen::MatrixXd(J.matrix() * Z(t) * H(t).inverse() * Z(t).transpose() * J.matrix());
    };
    for (int i = 0; i < grid; ++i) {
      const double a = static_cast<double>(i) / grid;
      const double b = static_cast<double>(i + 1) / grid;
      const Eigen::MatrixXd va = value(a);
      const Eigen::MatrixXd vb = value(b);
      pieces.push_back({a, b, {0.5 * (va + vb), 0.5 * (vb - va)}});
    }
    out.hessian = MatrixFunction(Z.rows(), Z.rows(), std::move(pieces));
  }

  std::vector<double> t;
  std::vector<double> w;
  piece_rule(merged_breakpoints(Z, H), 256, t, w);
  double r2 = 0.0;
  double tr = 0.0;
  for (std::size_t q = 0; q < t.size(); ++q) {
    const Eigen::MatrixXd zt = Z(t[q]) * inverse_sqrt_minus(H(t[q]), t[q]);
    // tr(J Z H^{-1} Z^T J) = |Z (-H)^{-1/2}|_F^2
    tr += w[q] * zt.squaredNorm();
    const double r = zt.size() ? Eigen::JacobiSVD<Eigen::MatrixXd>(zt).singularValues()(0) : 0.0;
    r2 += w[q] * r * r;
  }
  out.r_l2 = std::sqrt(r2);
  out.trace_integral = tr;
  out.bound = 0.5 * std::sqrt(static_cast<double>(k)) * out.r_l2 * std::sqrt(tr);
  return out;
}

bool gauge_equivalent(const MatrixFunction& Z1, const MatrixFunction& Z2, double tol, int grid) {
  if (Z1.rows() != Z2.rows() || Z1.cols() != Z2.cols()) throw ShapeError(kModule, "gauge comparison needs equal shapes");
  check_frame(Z1);
  const Eigen::MatrixXd J = SymplecticForm(Z1.rows()).matrix();
  std::vector<double> pts = sample_grid(Z1, grid);
  const std::vector<double> more = sample_grid(Z2, grid);
  pts.insert(pts.end(), more.begin(), more.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Eigen::MatrixXd> a1, b1, a2, b2;
  for (double t : pts) {
    const Eigen::MatrixXd z1 = Z1(t);
    const Eigen::MatrixXd z2 = Z2(t);
    a1.push_back(z1.transpose() * J);
    b1.push_back(z1);
    a2.push_back(z2.transpose() * J);
    b2.push_back(z2);
  }
  double dev = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const Eigen::MatrixXd k1 = a1[i] * b1[j];
      scale = std::max(scale, k1.cwiseAbs().maxCoeff());
      dev = std::max(dev, (k1 - a2[i] * b2[j]).cwiseAbs().maxCoeff());
    }
  }
  return dev <= tol * scale;
}

}  // namespace volcap
