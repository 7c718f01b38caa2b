#include "volcap/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volcap/errors.hpp"
#include "volcap/legendre.hpp"

namespace volcap {
namespace {

constexpr const char* kModule = "matfun";

// Legendre coefficients on [a, b] of a function sampled by `value`, using an
// n-point Gauss rule (exact for polynomial data of degree < n).
std::vector<Eigen::MatrixXd> interpolate_piece(Eigen::Index rows, Eigen::Index cols, double a,
                                               double b, int n,
                                               const std::function<Eigen::MatrixXd(double)>& value) {
  const legendre::GaussRule ref = legendre::gauss(n);
  Eigen::MatrixXd samples(n, rows * cols);
  for (int q = 0; q < n; ++q) {
    const double t = a + 0.5 * (b - a) * (ref.nodes(q) + 1.0);
    const Eigen::MatrixXd v = value(t);
    samples.row(q) = Eigen::Map<const Eigen::RowVectorXd>(v.data(), rows * cols);
  }
  const Eigen::MatrixXd c = legendre::forward_transform(ref, samples);
  std::vector<Eigen::MatrixXd> coeffs(n);
  for (int d = 0; d < n; ++d) {
    coeffs[d] = Eigen::Map<const Eigen::MatrixXd>(c.row(d).eval().data(), rows, cols);
  }
  return coeffs;
}

Eigen::MatrixXd eval_piece(const MatrixFunction::Piece& piece, double t, Eigen::Index rows,
                           Eigen::Index cols) {
  const double s = piece.b > piece.a ? 2.0 * (t - piece.a) / (piece.b - piece.a) - 1.0 : -1.0;
  const Eigen::VectorXd p = legendre::values(piece.degree(), std::clamp(s, -1.0, 1.0));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
  for (int d = 0; d <= piece.degree(); ++d) out += p(d) * piece.coeffs[d];
  return out;
}

std::vector<double> union_knots(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

template <class Op>
MatrixFunction coefficientwise(const MatrixFunction& f, Eigen::Index rows, Eigen::Index cols, Op op) {
  std::vector<MatrixFunction::Piece> pieces = f.pieces();
  for (auto& piece : pieces) {
    for (auto& c : piece.coeffs) c = op(c);
  }
  return MatrixFunction(rows, cols, std::move(pieces), f.projection_residual());
}

}  // namespace

MatrixFunction::MatrixFunction(Eigen::Index rows, Eigen::Index cols, std::vector<Piece> pieces,
                               double projection_residual)
    : rows_(rows), cols_(cols), pieces_(std::move(pieces)), projection_residual_(projection_residual) {
  if (pieces_.empty()) throw DomainError(kModule, "a matrix function needs at least one piece");
  if (pieces_.front().a != 0.0 || pieces_.back().b != 1.0) {
    throw DomainError(kModule, "pieces must cover [0, 1]");
  }
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    const Piece& piece = pieces_[p];
    if (!(piece.b > piece.a)) throw DomainError(kModule, "piece intervals must be nonempty");
    if (p > 0 && pieces_[p - 1].b != piece.a) {
      throw DomainError(kModule, "pieces must partition [0, 1] without gaps or overlaps");
    }
    if (piece.coeffs.empty()) throw DomainError(kModule, "piece without coefficients");
    for (const auto& c : piece.coeffs) {
      if (c.rows() != rows || c.cols() != cols) {
        throw ShapeError(kModule, "coefficient shape does not match " + std::to_string(rows) + "x" +
                                      std::to_string(cols));
      }
    }
  }
}

MatrixFunction MatrixFunction::constant(const Eigen::MatrixXd& value) {
  return MatrixFunction(value.rows(), value.cols(), {Piece{0.0, 1.0, {value}}});
}

MatrixFunction MatrixFunction::zero(Eigen::Index rows, Eigen::Index cols) {
  return constant(Eigen::MatrixXd::Zero(rows, cols));
}

MatrixFunction MatrixFunction::polynomial(const std::vector<Eigen::MatrixXd>& power) {
  return piecewise_polynomial({}, {power});
}

MatrixFunction MatrixFunction::piecewise_polynomial(
    const std::vector<double>& breakpoints, const std::vector<std::vector<Eigen::MatrixXd>>& power) {
  if (power.size() != breakpoints.size() + 1) {
    throw ShapeError(kModule, "need one coefficient list per piece");
  }
  std::vector<double> knots{0.0};
  knots.insert(knots.end(), breakpoints.begin(), breakpoints.end());
  knots.push_back(1.0);
  std::vector<Piece> pieces;
  Eigen::Index rows = -1;
  Eigen::Index cols = -1;
  for (std::size_t p = 0; p < power.size(); ++p) {
    const auto& mono = power[p];
    if (mono.empty()) throw ShapeError(kModule, "empty polynomial");
    if (rows < 0) {
      rows = mono.front().rows();
      cols = mono.front().cols();
    }
    for (const auto& c : mono) {
      if (c.rows() != rows || c.cols() != cols) throw ShapeError(kModule, "inconsistent monomial shapes");
    }
    auto value = [&](double t) {
      Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
      double tp = 1.0;
      for (const auto& c : mono) {
        out += tp * c;
        tp *= t;
      }
      return out;
    };
    pieces.push_back(Piece{knots[p], knots[p + 1],
                           interpolate_piece(rows, cols, knots[p], knots[p + 1],
                                             static_cast<int>(mono.size()), value)});
  }
  return MatrixFunction(rows, cols, std::move(pieces));
}

MatrixFunction MatrixFunction::project(Eigen::Index rows, Eigen::Index cols,
                                       const std::function<Eigen::MatrixXd(double)>& f,
                                       const std::vector<double>& breakpoints, int degree) {
  if (degree < 0) throw DomainError(kModule, "projection degree must be nonnegative");
  std::vector<double> knots{0.0};
  knots.insert(knots.end(), breakpoints.begin(), breakpoints.end());
  knots.push_back(1.0);
  const int nodes = std::max(128, 8 * (degree + 1));
  const legendre::GaussRule ref = legendre::gauss(nodes);
  const Eigen::MatrixXd p = legendre::vandermonde(degree, ref.nodes);

  std::vector<Piece> pieces;
  double residual_sq = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k];
    const double b = knots[k + 1];
    std::vector<Eigen::MatrixXd> samples(nodes);
    for (int q = 0; q < nodes; ++q) {
      samples[q] = f(a + 0.5 * (b - a) * (ref.nodes(q) + 1.0));
      if (samples[q].rows() != rows || samples[q].cols() != cols) {
        throw ShapeError(kModule, "projected function returned the wrong shape");
      }
    }
    Piece piece{a, b, std::vector<Eigen::MatrixXd>(degree + 1, Eigen::MatrixXd::Zero(rows, cols))};
    for (int d = 0; d <= degree; ++d) {
      for (int q = 0; q < nodes; ++q) piece.coeffs[d] += ref.weights(q) * p(q, d) * samples[q];
      piece.coeffs[d] *= 0.5 * (2.0 * d + 1.0);
    }
    for (int q = 0; q < nodes; ++q) {
      Eigen::MatrixXd approx = Eigen::MatrixXd::Zero(rows, cols);
      for (int d = 0; d <= degree; ++d) approx += p(q, d) * piece.coeffs[d];
      residual_sq += 0.5 * (b - a) * ref.weights(q) * (samples[q] - approx).squaredNorm();
    }
    pieces.push_back(std::move(piece));
  }
  return MatrixFunction(rows, cols, std::move(pieces), std::sqrt(residual_sq));
}

std::vector<double> MatrixFunction::breakpoints() const {
  std::vector<double> out;
  for (std::size_t p = 1; p < pieces_.size(); ++p) out.push_back(pieces_[p].a);
  return out;
}

int MatrixFunction::degree() const {
  int d = 0;
  for (const auto& piece : pieces_) d = std::max(d, piece.degree());
  return d;
}

int MatrixFunction::piece_index(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError(kModule, "evaluation point " + std::to_string(t) + " outside [0, 1]");
  }
  // Right-continuous: the piece whose half-open interval [a, b) holds t.
  for (std::size_t p = 0; p + 1 < pieces_.size(); ++p) {
    if (t < pieces_[p].b) return static_cast<int>(p);
  }
  return static_cast<int>(pieces_.size()) - 1;
}

Eigen::MatrixXd MatrixFunction::operator()(double t) const {
  return eval_piece(pieces_[piece_index(t)], t, rows_, cols_);
}

MatrixFunction MatrixFunction::derivative(int order) const {
  if (order < 0) throw DomainError(kModule, "derivative order must be nonnegative");
  if (order == 0) return *this;
  std::vector<Piece> pieces = pieces_;
  for (auto& piece : pieces) {
    for (int k = 0; k < order; ++k) {
      const int deg = piece.degree();
      if (deg == 0) {
        piece.coeffs.assign(1, Eigen::MatrixXd::Zero(rows_, cols_));
        continue;
      }
      const double scale = 2.0 / (piece.b - piece.a);
      // d_n = (2n+1) sum_{p > n, p - n odd} c_p
      std::vector<Eigen::MatrixXd> d(deg, Eigen::MatrixXd::Zero(rows_, cols_));
      for (int n = 0; n < deg; ++n) {
        for (int p = n + 1; p <= deg; p += 2) d[n] += piece.coeffs[p];
        d[n] *= (2.0 * n + 1.0) * scale;
      }
      piece.coeffs = std::move(d);
    }
  }
  return MatrixFunction(rows_, cols_, std::move(pieces), projection_residual_);
}

MatrixFunction MatrixFunction::antiderivative() const {
  std::vector<Piece> pieces;
  Eigen::MatrixXd offset = Eigen::MatrixXd::Zero(rows_, cols_);
  for (const auto& piece : pieces_) {
    const int deg = piece.degree();
    const double half = 0.5 * (piece.b - piece.a);
    std::vector<Eigen::MatrixXd> e(deg + 2, Eigen::MatrixXd::Zero(rows_, cols_));
    // int_{-1}^s P_0 = P_0 + P_1; int_{-1}^s P_p = (P_{p+1} - P_{p-1}) / (2p+1).
    e[0] += piece.coeffs[0];
    e[1] += piece.coeffs[0];
    for (int p = 1; p <= deg; ++p) {
      e[p + 1] += piece.coeffs[p] / (2.0 * p + 1.0);
      e[p - 1] -= piece.coeffs[p] / (2.0 * p + 1.0);
    }
    for (auto& c : e) c *= half;
    e[0] += offset;
    // Value at s = 1 is the sum of all coefficients.
    Eigen::MatrixXd end = Eigen::MatrixXd::Zero(rows_, cols_);
    for (const auto& c : e) end += c;
    offset = end;
    pieces.push_back(Piece{piece.a, piece.b, std::move(e)});
  }
  return MatrixFunction(rows_, cols_, std::move(pieces), projection_residual_);
}

Eigen::MatrixXd MatrixFunction::integrate(double a, double b) const {
  if (!(a >= 0.0 && b <= 1.0)) throw DomainError(kModule, "integration limits outside [0, 1]");
  if (a > b) throw DomainError(kModule, "integration limits reversed (a > b)");
  const MatrixFunction primitive = antiderivative();
  return primitive(b) - primitive(a);
}

MatrixFunction MatrixFunction::transpose() const {
  return coefficientwise(*this, cols_, rows_, [](const Eigen::MatrixXd& c) { return c.transpose().eval(); });
}

MatrixFunction MatrixFunction::block(Eigen::Index row, Eigen::Index col, Eigen::Index rows,
                                     Eigen::Index cols) const {
  if (row < 0 || col < 0 || row + rows > rows_ || col + cols > cols_) {
    throw ShapeError(kModule, "block outside the matrix");
  }
  return coefficientwise(*this, rows, cols,
                         [&](const Eigen::MatrixXd& c) { return c.block(row, col, rows, cols).eval(); });
}

MatrixFunction MatrixFunction::refine(const std::vector<double>& knots) const {
  const std::vector<double> all = union_knots(breakpoints(), knots);
  if (all.size() + 1 == pieces_.size()) return *this;
  std::vector<double> edges{0.0};
  for (double k : all) {
    if (k > 0.0 && k < 1.0) edges.push_back(k);
  }
  edges.push_back(1.0);
  std::vector<Piece> pieces;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e];
    const double b = edges[e + 1];
    const Piece& source = pieces_[piece_index(0.5 * (a + b))];
    if (source.a == a && source.b == b) {
      pieces.push_back(source);
      continue;
    }
    auto value = [&](double t) { return eval_piece(source, t, rows_, cols_); };
    pieces.push_back(Piece{a, b, interpolate_piece(rows_, cols_, a, b, source.degree() + 1, value)});
  }
  return MatrixFunction(rows_, cols_, std::move(pieces), projection_residual_);
}

double MatrixFunction::coefficient_norm() const {
  double best = 0.0;
  for (const auto& piece : pieces_) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(rows_, cols_);
    for (const auto& c : piece.coeffs) sum += c.cwiseAbs();
    if (sum.size() > 0) best = std::max(best, sum.maxCoeff());
  }
  return best;
}

MatrixFunction MatrixFunction::operator-() const { return -1.0 * (*this); }

MatrixFunction operator+(const MatrixFunction& lhs, const MatrixFunction& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw ShapeError(kModule, "sum of matrix functions with different shapes");
  }
  const auto knots = merged_breakpoints(lhs, rhs);
  const MatrixFunction l = lhs.refine(knots);
  const MatrixFunction r = rhs.refine(knots);
  std::vector<MatrixFunction::Piece> pieces;
  for (std::size_t p = 0; p < l.pieces().size(); ++p) {
    const auto& lp = l.pieces()[p];
    const auto& rp = r.pieces()[p];
    const int deg = std::max(lp.degree(), rp.degree());
    std::vector<Eigen::MatrixXd> c(deg + 1, Eigen::MatrixXd::Zero(lhs.rows(), lhs.cols()));
    for (int d = 0; d <= lp.degree(); ++d) c[d] += lp.coeffs[d];
    for (int d = 0; d <= rp.degree(); ++d) c[d] += rp.coeffs[d];
    pieces.push_back({lp.a, lp.b, std::move(c)});
  }
  return MatrixFunction(lhs.rows(), lhs.cols(), std::move(pieces),
                        std::max(lhs.projection_residual(), rhs.projection_residual()));
}

MatrixFunction operator-(const MatrixFunction& lhs, const MatrixFunction& rhs) { return lhs + (-rhs); }

MatrixFunction operator*(double scale, const MatrixFunction& f) {
  std::vector<MatrixFunction::Piece> pieces = f.pieces();
  for (auto& piece : pieces) {
    for (auto& c : piece.coeffs) c *= scale;
  }
  return MatrixFunction(f.rows(), f.cols(), std::move(pieces), std::abs(scale) * f.projection_residual());
}

MatrixFunction operator*(const Eigen::MatrixXd& lhs, const MatrixFunction& f) {
  if (lhs.cols() != f.rows()) throw ShapeError(kModule, "left factor has the wrong number of columns");
  std::vector<MatrixFunction::Piece> pieces = f.pieces();
  for (auto& piece : pieces) {
    for (auto& c : piece.coeffs) c = (lhs * c).eval();
  }
  return MatrixFunction(lhs.rows(), f.cols(), std::move(pieces), f.projection_residual());
}

MatrixFunction operator*(const MatrixFunction& f, const Eigen::MatrixXd& rhs) {
  if (f.cols() != rhs.rows()) throw ShapeError(kModule, "right factor has the wrong number of rows");
  std::vector<MatrixFunction::Piece> pieces = f.pieces();
  for (auto& piece : pieces) {
    for (auto& c : piece.coeffs) c = (c * rhs).eval();
  }
  return MatrixFunction(f.rows(), rhs.cols(), std::move(pieces), f.projection_residual());
}

MatrixFunction operator*(const MatrixFunction& lhs, const MatrixFunction& rhs) {
  if (lhs.cols() != rhs.rows()) {
    throw ShapeError(kModule, "product of " + std::to_string(lhs.rows()) + "x" +
                                  std::to_string(lhs.cols()) + " and " + std::to_string(rhs.rows()) +
                                  "x" + std::to_string(rhs.cols()) + " functions");
  }
  const auto knots = merged_breakpoints(lhs, rhs);
  const MatrixFunction l = lhs.refine(knots);
  const MatrixFunction r = rhs.refine(knots);
  std::vector<MatrixFunction::Piece> pieces;
  for (std::size_t p = 0; p < l.pieces().size(); ++p) {
    const auto& lp = l.pieces()[p];
    const auto& rp = r.pieces()[p];
    auto value = [&](double t) { return (eval_piece(lp, t, l.rows(), l.cols()) *
                                         eval_piece(rp, t, r.rows(), r.cols())).eval(); };
    pieces.push_back({lp.a, lp.b,
                      interpolate_piece(lhs.rows(), rhs.cols(), lp.a, lp.b,
                                        lp.degree() + rp.degree() + 1, value)});
  }
  return MatrixFunction(lhs.rows(), rhs.cols(), std::move(pieces),
                        std::max(lhs.projection_residual(), rhs.projection_residual()));
}

namespace {

MatrixFunction stack(const MatrixFunction& first, const MatrixFunction& second, bool vertical) {
  const auto knots = merged_breakpoints(first, second);
  const MatrixFunction f = first.refine(knots);
  const MatrixFunction s = second.refine(knots);
  const Eigen::Index rows = vertical ? f.rows() + s.rows() : f.rows();
  const Eigen::Index cols = vertical ? f.cols() : f.cols() + s.cols();
  std::vector<MatrixFunction::Piece> pieces;
  for (std::size_t p = 0; p < f.pieces().size(); ++p) {
    const auto& fp = f.pieces()[p];
    const auto& sp = s.pieces()[p];
    const int deg = std::max(fp.degree(), sp.degree());
    std::vector<Eigen::MatrixXd> c(deg + 1, Eigen::MatrixXd::Zero(rows, cols));
    for (int d = 0; d <= fp.degree(); ++d) c[d].topLeftCorner(f.rows(), f.cols()) = fp.coeffs[d];
    for (int d = 0; d <= sp.degree(); ++d) c[d].bottomRightCorner(s.rows(), s.cols()) = sp.coeffs[d];
    pieces.push_back({fp.a, fp.b, std::move(c)});
  }
  return MatrixFunction(rows, cols, std::move(pieces),
                        std::max(first.projection_residual(), second.projection_residual()));
}

}  // namespace

MatrixFunction vstack(const MatrixFunction& top, const MatrixFunction& bottom) {
  if (top.cols() != bottom.cols()) throw ShapeError(kModule, "vstack needs equal column counts");
  return stack(top, bottom, true);
}

MatrixFunction hstack(const MatrixFunction& left, const MatrixFunction& right) {
  if (left.rows() != right.rows()) throw ShapeError(kModule, "hstack needs equal row counts");
  return stack(left, right, false);
}

std::vector<double> merged_breakpoints(const MatrixFunction& lhs, const MatrixFunction& rhs) {
  return union_knots(lhs.breakpoints(), rhs.breakpoints());
}

std::vector<double> sample_grid(const MatrixFunction& f, int count) {
  std::vector<double> grid;
  for (int i = 0; i < count; ++i) grid.push_back(count == 1 ? 0.0 : static_cast<double>(i) / (count - 1));
  return union_knots(grid, f.breakpoints());
}

double grid_sup_norm(const MatrixFunction& f, const std::vector<double>& grid) {
  double best = 0.0;
  for (double t : grid) {
    const Eigen::MatrixXd v = f(t);
    if (v.size() > 0) best = std::max(best, v.cwiseAbs().maxCoeff());
  }
  return best;
}

SymplecticForm::SymplecticForm(Eigen::Index dim) : dim_(dim) {
  if (dim <= 0 || dim % 2 != 0) {
    throw DomainError(kModule, "symplectic dimension must be a positive even number");
  }
  const Eigen::Index n = dim / 2;
  j_ = Eigen::MatrixXd::Zero(dim, dim);
  j_.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  j_.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
}

double SymplecticForm::operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  return (j_ * x).dot(y);
}

MatrixFunction sandwich(const MatrixFunction& a, const SymplecticForm& j, const MatrixFunction& b) {
  if (a.rows() != j.dim() || b.rows() != j.dim()) {
    throw ShapeError(kModule, "sandwich factors need " + std::to_string(j.dim()) + " rows");
  }
  return (a.transpose() * j.matrix()) * b;
}

}  // namespace volcap
