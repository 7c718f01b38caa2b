#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/instances.hpp"
#include "support/oracles.hpp"
#include "volcap/asympt.hpp"
#include "volcap/capacity.hpp"
#include "volcap/errors.hpp"
#include "volcap/galerkin.hpp"

using namespace volcap;
using volcap::testing::Mat;

namespace {

QuadraticFormSpec pure(const MatrixFunction& Z) {
  QuadraticFormSpec s;
  s.Z = Z;
  s.J = SymplecticForm(Z.rows());
  return s;
}

}  // namespace

TEST_CASE("assemble trivial forms") {
  QuadraticFormSpec s = pure(MatrixFunction::zero(2, 2));
  CHECK(assemble(s, 8).norm() == 0.0);
  s.H = MatrixFunction::constant(-Mat::Identity(2, 2));
  CHECK((assemble(s, 8) - Mat::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK_THROWS_AS(assemble(s, 3), DomainError);
  s.H = MatrixFunction::constant(-Mat::Identity(3, 3));
  CHECK_THROWS_AS(assemble(s, 8), ShapeError);
}

TEST_CASE("assemble matches the brute-force double integral") {
  const int N = 64;
  SUBCASE("constant frame") {
    const auto Z = volcap::testing::order1_frame();
    const Mat M = assemble(pure(Z), N);
    const Mat ref = oracle::brute_force_galerkin(Z, N, 1.0, nullptr, N + 8);
    CHECK((M - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("polynomial frame with H and negative sign") {
    std::mt19937_64 rng(6);
    const auto Z = volcap::testing::random_polynomial(rng, 4, 2, 3);
    const auto H = MatrixFunction::polynomial({-volcap::testing::random_spd(rng, 2), volcap::testing::random_symmetric(rng, 2)});
    QuadraticFormSpec s = pure(Z);
    s.H = H;
    s.volterra_sign = -1.0;
    const int n = 24;
    const Mat M = assemble(s, n);
    const Mat ref = oracle::brute_force_galerkin(Z, n, -1.0, &H, n + 12);
    CHECK((M - ref).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + ref.cwiseAbs().maxCoeff()));
  }
  SUBCASE("breakpoints do not change the operator") {
    std::mt19937_64 rng(7);
    const auto Z = volcap::testing::random_polynomial(rng, 2, 2, 2);
    const Mat a = assemble(pure(Z), 16);
    const Mat b = assemble(pure(Z.refine({0.2, 0.65})), 16);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("restrict") {
  const int N = 64;
  const auto Z = volcap::testing::order1_frame();
  const Mat M = assemble(pure(Z), N);

  const Restriction none = restrict(M, SubspaceSelector::none(), 2, N);
  CHECK((none.matrix - 0.5 * (M + M.transpose())).norm() < 1e-14);
  CHECK(none.asymmetry_residual == doctest::Approx(0.5 * (M - M.transpose()).norm()));

  const Restriction v1 = restrict(M, SubspaceSelector::moment_constraints(1), 2, N);
  CHECK(v1.asymmetry_residual < 1e-8);
  CHECK(v1.constraint_rank == 2);
  CHECK_FALSE(v1.rank_deficient);

  SUBCASE("random u, v in V: <u, Kv> = <Ku, v>") {
    std::mt19937_64 rng(10);
    for (int i = 0; i < 5; ++i) {
      const Eigen::VectorXd u = v1.basis * volcap::testing::random_matrix(rng, v1.basis.cols(), 1);
      const Eigen::VectorXd v = v1.basis * volcap::testing::random_matrix(rng, v1.basis.cols(), 1);
      CHECK(std::abs(u.dot(M * v) - v.dot(M * u)) < 1e-10 * u.norm() * v.norm());
    }
  }
  SUBCASE("custom functionals equal to the first moments give the same matrix") {
    const auto ones = MatrixFunction::constant(Mat::Identity(2, 2));
    const Restriction c = restrict(M, SubspaceSelector::custom(ones), 2, N);
    CHECK((c.matrix - v1.matrix).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("rank deficiency is reported") {
    const auto twice = MatrixFunction::constant((Mat(4, 2) << 1, 0, 0, 1, 2, 0, 0, 2).finished());
    const Restriction d = restrict(M, SubspaceSelector::custom(twice), 2, N);
    CHECK(d.rank_deficient);
    CHECK(d.constraint_rank == 2);
    CHECK(d.matrix.rows() == 2 * N - 2);
  }
}

TEST_CASE("symmetry defect on V shrinks with N") {
  // Piecewise frame: exactness of the quadrature no longer hides the trend.
  const auto Z = MatrixFunction::project(
      2, 2, [](double t) { return Mat((Mat(2, 2) << std::exp(t), std::sin(3 * t), 0, 1 + t * t).finished()); }, {0.5}, 10);
  double prev = INFINITY;
  for (int N : {16, 32, 64}) {
    const Mat M = assemble(pure(Z), N);
    const Restriction r = restrict(M, SubspaceSelector::vertical(Z), 2, N);
    CHECK(r.asymmetry_residual <= std::max(prev, 1e-12));
    CHECK(r.asymmetry_residual < 1e-8);
    prev = r.asymmetry_residual;
  }
}

TEST_CASE("spectrum") {
  const auto empty = spectrum(Mat::Zero(3, 3));
  CHECK(empty.positive.empty());
  CHECK(empty.negative.empty());
  const Mat d = Eigen::Vector3d(3, -1, 2).asDiagonal();
  const auto s = spectrum(d);
  CHECK(s.positive == std::vector<double>{3, 2});
  CHECK(s.negative == std::vector<double>{-1});
  CHECK(s.at(1) == 3.0);
  CHECK(s.at(-1) == -1.0);
  CHECK(s.at(5) == 0.0);
}

TEST_CASE("constant frame at N = 256: lambda_n pi n -> 1") {
  const int N = 256;
  const auto form = volterra_form(volcap::testing::order1_frame());
  const Restriction r = restrict(assemble(form, N), form.constraint, 2, N);
  const auto s = spectrum(r.matrix, r.asymmetry_residual, N);
  for (int n = 10; n <= 40; ++n) {
    CHECK(s.at(n) * std::numbers::pi * n == doctest::Approx(1.0).epsilon(0.03));
    CHECK(-s.at(-n) * std::numbers::pi * n == doctest::Approx(1.0).epsilon(0.03));
  }
}

TEST_CASE("skew_factorize") {
  SUBCASE("zero frame") {
    const auto f = skew_factorize(pure(MatrixFunction::zero(2, 2)), 16);
    CHECK(f.rank == 0);
    CHECK(f.skew_eigs.empty());
    CHECK(capacity_bound(f) == 0.0);
  }
  SUBCASE("triangular frame with xi1 = xi2 = 1, xi3 = 0") {
    const auto one = MatrixFunction::constant(Mat::Ones(1, 1));
    const auto Z = volcap::testing::triangular_frame(one, one, MatrixFunction::zero(1, 1));
    const auto f = skew_factorize(pure(Z), 64);
    CHECK(f.rank == 2);
    REQUIRE(f.skew_eigs.size() == 1);
    CHECK(f.skew_eigs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.galerkin_skew_eigs[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(capacity_bound(f) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((f.A0 - SymplecticForm(2).matrix()).norm() == 0.0);
  }
  SUBCASE("random rank-4 frame: roundtrip") {
    std::mt19937_64 rng(12);
    const auto Z = volcap::testing::random_rank_frame(rng, 2, 1, 2, 3);
    const int N = 128;
    const auto f = skew_factorize(pure(Z), N);
    CHECK(f.rank == 4);
    CHECK(f.reconstruction_error <= 1e-8 * f.kernel_norm);
    // Orthonormal frame rows.
    const Mat gram = (f.orthonormal_frame * f.orthonormal_frame.transpose()).integrate();
    CHECK((gram - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    // Re-assembling from the frame reproduces the skew part of the matrix.
    QuadraticFormSpec rebuilt = pure(f.frame);
    rebuilt.J = SymplecticForm(4);
    const Mat a = assemble(pure(Z), N);
    const Mat b = assemble(rebuilt, N);
    CHECK(((a - a.transpose()) - (b - b.transpose())).cwiseAbs().maxCoeff() < 1e-10 * (a - a.transpose()).cwiseAbs().maxCoeff());
  }
}

TEST_CASE("skew bound dominates the fitted capacity on random frames") {
  std::mt19937_64 rng(13);
  const int N = 192;
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto Z = volcap::testing::random_polynomial(rng, 2 * (1 + trial % 2), 2 + trial % 3, trial % 3);
    const auto form = volterra_form(Z);
    const Restriction r = restrict(assemble(form, N), form.constraint, Z.cols(), N);
    const auto fit = fit_capacity(spectrum(r.matrix), default_window(N));
    if (fit.infinite || fit.order != 1) continue;
    const double bound = capacity_bound(skew_factorize(pure(Z), N));
    CHECK(bound >= (1.0 - 1e-9) * std::max(fit.plus.value, fit.minus.value));
    ++checked;
  }
  CHECK(checked >= 15);
}

TEST_CASE("numerical skew rank is even for every tolerance") {
  // Pairs with amplitudes 1 and 1e-6.
  QuadraticFormSpec s;
  s.J = SymplecticForm(4);
  Mat z = Mat::Zero(4, 4);
  z(0, 0) = 1;
  z(2, 1) = 1;
  z(1, 2) = 1e-3;
  z(3, 3) = 1e-3;
  s.Z = MatrixFunction::constant(z);
  CHECK(skew_factorize(s, 8, 1e-10).rank == 4);
  CHECK(skew_factorize(s, 8, 1e-3).rank == 2);
  for (double tol = 1e-14; tol < 1.0; tol *= 3.7) CHECK(skew_factorize(s, 8, tol).rank % 2 == 0);
}
