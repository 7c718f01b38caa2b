#include "volcap/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "volcap/errors.hpp"
#include "volcap/legendre.hpp"

namespace volcap {
namespace {

constexpr const char* kModule = "galerkin";

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Eigen::MatrixXd skew_part(const Eigen::MatrixXd& m) { return 0.5 * (m - m.transpose()); }

}  // namespace

SubspaceSelector SubspaceSelector::moment_constraints(int k) {
  if (k < 0) throw DomainError(kModule, "moment count must be nonnegative");
  SubspaceSelector s;
  s.kind = Kind::moments;
  s.moments = k;
  return s;
}

SubspaceSelector SubspaceSelector::custom(MatrixFunction F) {
  SubspaceSelector s;
  s.kind = Kind::custom;
  s.functionals = std::move(F);
  return s;
}

SubspaceSelector SubspaceSelector::vertical(const MatrixFunction& Z) {
  if (Z.rows() % 2 != 0) throw ShapeError(kModule, "Z must have an even number of rows");
  const Eigen::Index n = Z.rows() / 2;
  return custom(Z.block(n, 0, n, Z.cols()));
}

QuadraticFormSpec volterra_form(const MatrixFunction& Z) {
  QuadraticFormSpec spec;
  spec.Z = Z;
  spec.J = SymplecticForm(Z.rows());
  spec.constraint = SubspaceSelector::vertical(Z);
  return spec;
}

Eigen::MatrixXd assemble(const QuadraticFormSpec& spec, int N) {
  if (N < 4) throw DomainError(kModule, "basis size N must be at least 4");
  const MatrixFunction& Z0 = spec.Z;
  const Eigen::Index k = Z0.cols();
  if (Z0.rows() != spec.J.dim()) throw ShapeError(kModule, "Z row count differs from the symplectic dimension");
  if (spec.H && (spec.H->rows() != k || spec.H->cols() != k)) {
    throw ShapeError(kModule, "H must be k x k with k = columns of Z");
  }
  const Eigen::Index kN = k * N;
  const Eigen::Index dim = Z0.rows();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(kN, kN);

  std::vector<double> knots = Z0.breakpoints();
  if (spec.H) knots = merged_breakpoints(Z0, *spec.H);
  const MatrixFunction Z = Z0.refine(knots);
  const std::optional<MatrixFunction> H =
      spec.H ? std::optional<MatrixFunction>(spec.H->refine(knots)) : std::nullopt;
  const Eigen::MatrixXd& J = spec.J.matrix();

  std::vector<Eigen::RowVectorXd> offset(dim, Eigen::RowVectorXd::Zero(kN));
  for (std::size_t p = 0; p < Z.pieces().size(); ++p) {
    const auto& zp = Z.pieces()[p];
    const int dz = zp.degree();
    const int dh = H ? H->pieces()[p].degree() : 0;
    const int Q = N + std::max(dz, dh) + 1;
    const legendre::GaussRule ref = legendre::gauss(Q);
    const double half = 0.5 * (zp.b - zp.a);
    const Eigen::VectorXd t = (zp.a + half * (ref.nodes.array() + 1.0)).matrix();
    const Eigen::VectorXd w = half * ref.weights;
    const Eigen::MatrixXd E = legendre::orthonormal_basis(N, t);

    if (H) {
      for (Eigen::Index c = 0; c < k; ++c) {
        for (Eigen::Index d = 0; d < k; ++d) {
          Eigen::VectorXd wh(Q);
          for (int q = 0; q < Q; ++q) wh(q) = w(q) * (*H)(t(q))(c, d);
          M.block(c * N, d * N, N, N).noalias() -= E.transpose() * wh.asDiagonal() * E;
        }
      }
    }
    if (Z.coefficient_norm() == 0.0) continue;

    std::vector<Eigen::MatrixXd> zq(Q);
    for (int q = 0; q < Q; ++q) zq[q] = Z(t(q));
    std::vector<Eigen::MatrixXd> W(dim, Eigen::MatrixXd(Q, kN));
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index c = 0; c < k; ++c) {
        for (int q = 0; q < Q; ++q) W[i].block(q, c * N, 1, N) = zq[q](i, c) * E.row(q);
      }
    }
    const Eigen::MatrixXd S = half * legendre::cumulative_integration(ref);
    std::vector<Eigen::MatrixXd> F(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      F[i] = S * W[i];
      F[i].rowwise() += offset[i];
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      const Eigen::MatrixXd WtD = W[i].transpose() * w.asDiagonal();
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (J(i, j) == 0.0) continue;
        M.noalias() += (spec.volterra_sign * J(i, j)) * (WtD * F[j]);
      }
    }
    for (Eigen::Index i = 0; i < dim; ++i) offset[i] += w.transpose() * W[i];
  }
  return M;
}

Eigen::MatrixXd project_functionals(const MatrixFunction& F, int N) {
  const Eigen::Index k = F.cols();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(F.rows(), k * N);
  for (const auto& piece : F.pieces()) {
    const legendre::GaussRule rule = legendre::gauss(N + piece.degree() + 1, piece.a, piece.b);
    const Eigen::MatrixXd E = legendre::orthonormal_basis(N, rule.nodes);
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
      const Eigen::MatrixXd fq = F(rule.nodes(q));
      for (Eigen::Index c = 0; c < k; ++c) {
        C.middleCols(c * N, N) += rule.weights(q) * fq.col(c) * E.row(q);
      }
    }
  }
  return C;
}

Eigen::MatrixXd constraint_matrix(const SubspaceSelector& selector, Eigen::Index k, int N) {
  switch (selector.kind) {
    case SubspaceSelector::Kind::none:
      return Eigen::MatrixXd(0, k * N);
    case SubspaceSelector::Kind::moments: {
      const int L = selector.moments;
      Eigen::MatrixXd C = Eigen::MatrixXd::Zero(L * k, k * N);
      const legendre::GaussRule rule = legendre::gauss(N + L, 0.0, 1.0);
      const Eigen::MatrixXd E = legendre::orthonormal_basis(N, rule.nodes);
      for (int l = 1; l <= L; ++l) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(N);
        for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
          row += rule.weights(q) * std::pow(1.0 - rule.nodes(q), l - 1) / factorial(l - 1) * E.row(q);
        }
        for (Eigen::Index c = 0; c < k; ++c) C.block((l - 1) * k + c, c * N, 1, N) = row;
      }
      return C;
    }
    case SubspaceSelector::Kind::custom:
      if (selector.functionals.cols() != k) {
        throw ShapeError(kModule, "constraint functionals must have k columns");
      }
      return project_functionals(selector.functionals, N);
  }
  return Eigen::MatrixXd(0, k * N);
}

Restriction restrict(const Eigen::MatrixXd& M, const Eigen::MatrixXd& constraints) {
  if (M.rows() != M.cols()) throw ShapeError(kModule, "restrict needs a square matrix");
  if (constraints.cols() != M.rows()) throw ShapeError(kModule, "constraint width differs from matrix size");
  const Eigen::Index n = M.rows();
  Restriction out;
  out.constraint_count = static_cast<int>(constraints.rows());
  Eigen::MatrixXd projected;
  if (constraints.rows() == 0) {
    projected = M;
    out.basis = Eigen::MatrixXd::Identity(n, n);
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(constraints.transpose());
    qr.setThreshold(1e-10);
    const Eigen::Index r = qr.rank();
    out.constraint_rank = static_cast<int>(r);
    out.rank_deficient = r < constraints.rows();
    Eigen::MatrixXd full = M;
    full.applyOnTheLeft(qr.householderQ().transpose());
    full.applyOnTheRight(qr.householderQ());
    projected = full.bottomRightCorner(n - r, n - r);
    Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(n, n - r);
    sel.bottomRows(n - r).setIdentity();
    sel.applyOnTheLeft(qr.householderQ());
    out.basis = std::move(sel);
  }
  out.asymmetry_residual = skew_part(projected).norm();
  out.matrix = 0.5 * (projected + projected.transpose());
  return out;
}

Restriction restrict(const Eigen::MatrixXd& M, const SubspaceSelector& selector, Eigen::Index k, int N) {
  if (M.rows() != k * N) throw ShapeError(kModule, "matrix size is not k*N");
  return restrict(M, constraint_matrix(selector, k, N));
}

namespace {

// Hilbert-Schmidt norm over tau < t of Zl_t^T Jl Zl_tau - sign Zr_t^T Jr Zr_tau.
// Direct tensor quadrature; a trace identity would cancel catastrophically.
double triangle_hs(const MatrixFunction& Zl, const Eigen::MatrixXd& Jl, const MatrixFunction* Zr,
                   const Eigen::MatrixXd& Jr, double sign) {
  std::vector<double> knots = Zl.breakpoints();
  int deg = Zl.degree();
  if (Zr) {
    knots = merged_breakpoints(Zl, *Zr);
    deg = std::max(deg, Zr->degree());
  }
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), knots.begin(), knots.end());
  edges.push_back(1.0);
  std::vector<double> t;
  std::vector<double> w;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const legendre::GaussRule rule = legendre::gauss(deg + 2, edges[e], edges[e + 1]);
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
      t.push_back(rule.nodes(q));
      w.push_back(rule.weights(q));
    }
  }
  std::vector<Eigen::MatrixXd> left(t.size());
  std::vector<Eigen::MatrixXd> right(t.size());
  for (std::size_t q = 0; q < t.size(); ++q) {
    left[q] = Zl(t[q]);
    if (Zr) right[q] = (*Zr)(t[q]);
  }
  double sum = 0.0;
  for (std::size_t q = 0; q < t.size(); ++q) {
    const Eigen::MatrixXd lt = left[q].transpose() * Jl;
    const Eigen::MatrixXd rt = Zr ? Eigen::MatrixXd(right[q].transpose() * Jr) : Eigen::MatrixXd();
    for (std::size_t p = 0; p < t.size(); ++p) {
      Eigen::MatrixXd d = lt * left[p];
      if (Zr) d -= sign * (rt * right[p]);
      sum += w[q] * w[p] * d.squaredNorm();
    }
  }
  // The squared integrand is symmetric under t <-> tau, so the triangle
  // carries exactly half of the square.
  return std::sqrt(0.5 * sum);
}

}  // namespace

SkewFactorization skew_factorize(const QuadraticFormSpec& spec, int N, double tol) {
  if (!(tol > 0.0)) throw DomainError(kModule, "tolerance must be positive");
  QuadraticFormSpec pure = spec;
  pure.H.reset();
  const Eigen::MatrixXd A = skew_part(assemble(pure, N));

  SkewFactorization out;
  const Eigen::VectorXd sv = A.size() ? Eigen::BDCSVD<Eigen::MatrixXd>(A).singularValues() : Eigen::VectorXd();
  const double smax = sv.size() ? sv(0) : 0.0;
  auto rank_at = [&](double rel) {
    return static_cast<int>((sv.array() > rel * smax).count());
  };
  out.tol_used = tol;
  if (smax > 0.0) {
    out.rank = rank_at(tol);
    if (out.rank % 2 != 0) {
      out.tol_used = 10.0 * tol;
      out.rank = rank_at(out.tol_used);
      if (out.rank % 2 != 0) {
        throw ToleranceError(kModule, "skew part has odd numerical rank " + std::to_string(out.rank) +
                                          " at tolerance " + std::to_string(out.tol_used));
      }
    }
  }
  const int m = out.rank / 2;
  for (int i = 0; i < m; ++i) out.galerkin_skew_eigs.push_back(0.5 * (sv(2 * i) + sv(2 * i + 1)));

  out.A0 = SymplecticForm(std::max(2, out.rank)).matrix();
  if (m == 0) {
    out.A0.resize(0, 0);
    out.frame = MatrixFunction::zero(0, spec.Z.cols());
    out.orthonormal_frame = out.frame;
    out.kernel_norm = triangle_hs(spec.Z, spec.J.matrix(), nullptr, {}, 0.0);
    out.reconstruction_error = out.kernel_norm;
    return out;
  }

  // Orthonormal coordinates for the span of the rows of Z.
  const Eigen::MatrixXd G = (spec.Z * spec.Z.transpose()).integrate();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> geig(0.5 * (G + G.transpose()));
  if (geig.info() != Eigen::Success) throw NumericalError(kModule, "Gram eigensolver failed");
  const double gmax = geig.eigenvalues().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    if (geig.eigenvalues()(i) > 1e-13 * gmax) keep.push_back(i);
  }
  const Eigen::Index r = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd U(G.rows(), r);
  Eigen::VectorXd lam(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    U.col(i) = geig.eigenvectors().col(keep[i]);
    lam(i) = geig.eigenvalues()(keep[i]);
  }
  const Eigen::MatrixXd L = U * lam.cwiseSqrt().asDiagonal();
  const Eigen::MatrixXd B = spec.volterra_sign * (L.transpose() * spec.J.matrix() * L);
  Eigen::RealSchur<Eigen::MatrixXd> schur(0.5 * (B - B.transpose()));
  if (schur.info() != Eigen::Success) throw NumericalError(kModule, "real Schur decomposition failed");
  const Eigen::MatrixXd& T = schur.matrixT();
  const Eigen::MatrixXd& Qs = schur.matrixU();

  // 2x2 blocks [[0, beta], [-beta, 0]] on (q1, q2); the canonical pair (u, w)
  // with B = beta (w u^T - u w^T) is (q2, q1) for beta > 0 and (q1, q2) otherwise.
  std::vector<std::tuple<double, Eigen::VectorXd, Eigen::VectorXd>> blocks;
  const double bscale = std::max(T.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < r;) {
    if (i + 1 < r && std::abs(T(i + 1, i)) > 1e-14 * bscale) {
      const double beta = 0.5 * (T(i, i + 1) - T(i + 1, i));
      if (beta > 0.0) {
        blocks.emplace_back(beta, Qs.col(i + 1), Qs.col(i));
      } else {
        blocks.emplace_back(-beta, Qs.col(i), Qs.col(i + 1));
      }
      i += 2;
    } else {
      ++i;
    }
  }
  if (static_cast<int>(blocks.size()) < m) {
    throw NumericalError(kModule, "frame has " + std::to_string(blocks.size()) +
                                      " rotation blocks, rank needs " + std::to_string(m));
  }
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const auto& x, const auto& y) { return std::get<0>(x) > std::get<0>(y); });

  Eigen::MatrixXd P(r, 2 * m);
  out.amplitudes.resize(m);
  for (int i = 0; i < m; ++i) {
    out.amplitudes(i) = std::get<0>(blocks[i]);
    P.col(i) = std::get<1>(blocks[i]);
    P.col(m + i) = std::get<2>(blocks[i]);
    out.skew_eigs.push_back(0.5 * out.amplitudes(i));
  }
  const Eigen::MatrixXd to_phi = lam.cwiseSqrt().cwiseInverse().asDiagonal() * U.transpose();
  out.orthonormal_frame = Eigen::MatrixXd(P.transpose() * to_phi) * spec.Z;
  Eigen::VectorXd scale(2 * m);
  scale << out.amplitudes.cwiseSqrt(), out.amplitudes.cwiseSqrt();
  out.frame = Eigen::MatrixXd(scale.asDiagonal() * P.transpose() * to_phi) * spec.Z;

  out.kernel_norm = triangle_hs(spec.Z, spec.J.matrix(), nullptr, {}, 0.0);
  out.reconstruction_error =
      triangle_hs(out.frame, out.A0, &spec.Z, spec.J.matrix(), spec.volterra_sign);
  return out;
}

double capacity_bound(const SkewFactorization& f) {
  const int m = f.rank / 2;
  double sum = 0.0;
  for (double rho : f.skew_eigs) sum += rho * rho;
  return 2.0 * std::sqrt(static_cast<double>(m)) * std::sqrt(sum);
}

}  // namespace volcap
