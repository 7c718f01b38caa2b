#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace volcap {

/// Piecewise-polynomial matrix-valued function on [0, 1].
///
/// Each piece stores one coefficient matrix per Legendre degree in the local
/// variable s = 2(t - a)/(b - a) - 1, so differentiation, antiderivatives and
/// products stay inside the representation. Evaluation at an interior knot
/// returns the value of the piece on its right.
///
/// Instances are immutable; every operation returns a new function.
class MatrixFunction {
 public:
  struct Piece {
    double a = 0.0;
    double b = 1.0;
    std::vector<Eigen::MatrixXd> coeffs;  ///< coeffs[d] multiplies P_d(s)

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  };

  MatrixFunction() = default;

  /// Validates that the pieces partition [0, 1] in order and that every
  /// coefficient matrix is rows x cols.
  MatrixFunction(Eigen::Index rows, Eigen::Index cols, std::vector<Piece> pieces,
                 double projection_residual = 0.0);

  static MatrixFunction constant(const Eigen::MatrixXd& value);
  static MatrixFunction zero(Eigen::Index rows, Eigen::Index cols);

  /// sum_d power[d] t^d on a single piece.
  static MatrixFunction polynomial(const std::vector<Eigen::MatrixXd>& power);

  /// Piecewise version: `power[p]` holds the monomial coefficients (in the
  /// global variable t) used on the p-th interval delimited by `breakpoints`.
  static MatrixFunction piecewise_polynomial(const std::vector<double>& breakpoints,
                                             const std::vector<std::vector<Eigen::MatrixXd>>& power);

  /// L^2 projection of an arbitrary function onto polynomials of `degree` on
  /// every piece. The L^2 distance to `f` is kept in projection_residual().
  static MatrixFunction project(Eigen::Index rows, Eigen::Index cols,
                                const std::function<Eigen::MatrixXd(double)>& f,
                                const std::vector<double>& breakpoints = {}, int degree = 16);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  /// Interior knots, strictly increasing.
  std::vector<double> breakpoints() const;
  /// Largest degree over all pieces.
  int degree() const;
  double projection_residual() const { return projection_residual_; }

  /// Value at t in [0, 1]; throws DomainError outside.
  Eigen::MatrixXd operator()(double t) const;
  Eigen::MatrixXd eval(double t) const { return (*this)(t); }

  MatrixFunction derivative(int order = 1) const;
  /// Continuous antiderivative vanishing at t = 0.
  MatrixFunction antiderivative() const;
  /// int_a^b F(t) dt for 0 <= a <= b <= 1.
  Eigen::MatrixXd integrate(double a, double b) const;
  Eigen::MatrixXd integrate() const { return integrate(0.0, 1.0); }

  MatrixFunction transpose() const;
  MatrixFunction block(Eigen::Index row, Eigen::Index col, Eigen::Index rows, Eigen::Index cols) const;
  /// Same function re-expressed on the union of its knots and `knots`.
  MatrixFunction refine(const std::vector<double>& knots) const;

  /// Upper bound on sup_t max_ij |F_ij(t)| from the coefficients (|P_d| <= 1).
  double coefficient_norm() const;

  MatrixFunction operator-() const;

 private:
  int piece_index(double t) const;

  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  std::vector<Piece> pieces_;
  double projection_residual_ = 0.0;
};

MatrixFunction operator+(const MatrixFunction& lhs, const MatrixFunction& rhs);
MatrixFunction operator-(const MatrixFunction& lhs, const MatrixFunction& rhs);
MatrixFunction operator*(double scale, const MatrixFunction& f);
MatrixFunction operator*(const Eigen::MatrixXd& lhs, const MatrixFunction& f);
MatrixFunction operator*(const MatrixFunction& f, const Eigen::MatrixXd& rhs);
/// Pointwise matrix product t -> A(t) B(t); degree adds up.
MatrixFunction operator*(const MatrixFunction& lhs, const MatrixFunction& rhs);

MatrixFunction vstack(const MatrixFunction& top, const MatrixFunction& bottom);
MatrixFunction hstack(const MatrixFunction& left, const MatrixFunction& right);

/// Sorted union of the interior knots of both functions.
std::vector<double> merged_breakpoints(const MatrixFunction& lhs, const MatrixFunction& rhs);

/// `count` equispaced points of [0, 1] (endpoints included) plus every knot.
std::vector<double> sample_grid(const MatrixFunction& f, int count);

/// max over `grid` of max_ij |F_ij(t)|.
double grid_sup_norm(const MatrixFunction& f, const std::vector<double>& grid);

/// Standard symplectic structure on R^{2n}: J = [[0, -I], [I, 0]].
class SymplecticForm {
 public:
  explicit SymplecticForm(Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  Eigen::Index half_dim() const { return dim_ / 2; }
  const Eigen::MatrixXd& matrix() const { return j_; }
  /// sigma(x, y) = <J x, y>.
  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

 private:
  Eigen::Index dim_;
  Eigen::MatrixXd j_;
};

/// t -> A(t)^T J B(t).
MatrixFunction sandwich(const MatrixFunction& a, const SymplecticForm& j, const MatrixFunction& b);

}  // namespace volcap
