#include <doctest.h>

#include <cmath>
#include <random>

#include "support/instances.hpp"
#include "support/oracles.hpp"
#include "volcap/capacity.hpp"
#include "volcap/errors.hpp"

using namespace volcap;
using volcap::testing::Mat;

TEST_CASE("build_Aj on constant frames") {
  const SymplecticForm J(2);
  std::mt19937_64 rng(2);
  const Mat z = volcap::testing::random_matrix(rng, 2, 3);
  const auto Z = MatrixFunction::constant(z);
  CHECK((build_Aj(Z, 1, J)(0.4) - z.transpose() * J.matrix() * z).norm() < 1e-14);
  CHECK(build_Aj(Z, 2, J).coefficient_norm() == 0.0);
  CHECK_THROWS_AS(build_Aj(Z, 0, J), DomainError);
  CHECK_THROWS_AS(build_Aj(Z, 1, SymplecticForm(4)), ShapeError);
}

TEST_CASE("build_Aj on the triangular frame") {
  const auto xi = MatrixFunction::polynomial({Mat::Constant(1, 1, 1.0), Mat::Constant(1, 1, 2.0)});
  const auto Z = volcap::testing::triangular_frame(xi, xi, MatrixFunction::zero(1, 1));
  const auto A1 = build_Aj(Z, 1, SymplecticForm(2));
  for (double t : {0.0, 0.5, 1.0}) {
    const double p = std::pow(1.0 + 2.0 * t, 2);
    CHECK((A1(t) - (Mat(2, 2) << 0, -p, p, 0).finished()).norm() < 1e-13);
  }
}

TEST_CASE("build_Aj on Z = [[t], [1]] matches finite differences") {
  const auto Z = volcap::testing::order2_frame();
  const SymplecticForm J(2);
  CHECK(build_Aj(Z, 1, J).coefficient_norm() < 1e-15);
  const auto A2 = build_Aj(Z, 2, J);
  for (double t : {0.2, 0.5, 0.8}) {
    const Mat dz = oracle::central_difference(Z, t, 1, 1e-5);
    const Mat ref = Z(t).transpose() * J.matrix() * dz;
    CHECK(A2(t)(0, 0) == doctest::Approx(ref(0, 0)).epsilon(1e-8));
    CHECK(A2(t)(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("odd A_j are skew, even A_j symmetric when the previous one is constant") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto Z = volcap::testing::random_polynomial(rng, 4, 3, 4);
    for (int j : {1, 3, 5}) {
      const auto A = build_Aj(Z, j, SymplecticForm(4));
      for (const auto& piece : A.pieces()) {
        for (const auto& c : piece.coeffs) CHECK((c + c.transpose()).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + c.norm()));
      }
    }
  }
  // Isotropic frame with G linear: A_1 = 0, so A_2 must be symmetric.
  const auto X = volcap::testing::random_polynomial(rng, 2, 2, 2);
  const Mat s = volcap::testing::random_symmetric(rng, 2);
  const auto G = MatrixFunction::polynomial({Mat::Zero(2, 2), s});
  const auto Z = volcap::testing::isotropic_frame(X, G);
  const auto A2 = build_Aj(Z, 2, SymplecticForm(4));
  for (const auto& c : A2.pieces()[0].coeffs) CHECK((c - c.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("first_nonzero_order") {
  const SymplecticForm J(2);
  CHECK(first_nonzero_order(volcap::testing::order1_frame(), J).order == 1);
  const auto iso = MatrixFunction::constant((Mat(2, 2) << 1, 2, 0, 0).finished());
  const auto inf = first_nonzero_order(iso, J);
  CHECK(inf.infinite);
  CHECK(inf.margin <= 1e-10);
  CHECK(first_nonzero_order(volcap::testing::order2_frame(), J).order == 2);
  CHECK(first_nonzero_order(volcap::testing::order3_frame(), SymplecticForm(6)).order == 3);
  CHECK_THROWS_AS(first_nonzero_order(iso, J, 0), DomainError);
  CHECK_THROWS_AS(first_nonzero_order(iso, J, 4, 0.0), DomainError);
}

TEST_CASE("mu values") {
  const Mat j = (Mat(2, 2) << 0, -1, 1, 0).finished();
  CHECK(mu_at(j, 1).plus == doctest::Approx(1.0));
  const MuValue m = mu_at((Mat(2, 2) << 4, 0, 0, -9).finished(), 2);
  CHECK(m.plus == doctest::Approx(2.0));
  CHECK(m.minus == doctest::Approx(3.0));
  CHECK_THROWS_AS(mu_at(Mat::Constant(1, 1, NAN), 2), NumericalError);

  SUBCASE("sqrt profile against adaptive quadrature") {
    const auto a = MatrixFunction::polynomial({Mat::Zero(1, 1), Mat::Ones(1, 1)});
    const MuIntegral mu = mu_profile(a, 2);
    const double ref = oracle::integral([](double t) { return std::sqrt(t); }, 0.0, 1.0);
    CHECK(mu.converged);
    CHECK(mu.plus == doctest::Approx(ref).epsilon(1e-8));
    CHECK(mu.minus == 0.0);
    for (const auto& s : mu.samples) CHECK(s.plus == doctest::Approx(std::sqrt(s.t)));
  }
}

TEST_CASE("predict_capacity") {
  const SymplecticForm J(2);
  const auto c1 = predict_capacity(volcap::testing::order1_frame(), J);
  CHECK(c1.order == 1);
  CHECK(c1.value == doctest::Approx(1.0).epsilon(1e-12));

  const auto one = MatrixFunction::constant(Mat::Ones(1, 1));
  const auto c3 = predict_capacity(volcap::testing::triangular_frame(one, one, MatrixFunction::zero(1, 1)), J);
  CHECK(c3.order == 1);
  CHECK(c3.value == doctest::Approx(1.0).epsilon(1e-12));

  const auto c2 = predict_capacity(volcap::testing::order2_frame(), J);
  CHECK(c2.even());
  CHECK(c2.value_plus == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c2.value_minus == 0.0);

  const auto c33 = predict_capacity(volcap::testing::order3_frame(), SymplecticForm(6));
  CHECK(c33.order == 3);
  CHECK(c33.value == doctest::Approx(2.0).epsilon(1e-12));

  const auto goh = predict_capacity(volcap::testing::goh_failing_frame(), J);
  CHECK(goh.value == doctest::Approx(1.5).epsilon(1e-12));

  CHECK(predict_capacity(MatrixFunction::constant((Mat(2, 1) << 1, 0).finished()), J).infinite);
}

TEST_CASE("capacity scales with c^2 and mu with c^(2/j)") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> cdist(0.2, 3.0);
  for (int trial = 0; trial < 8; ++trial) {
    const auto Z = trial % 2 ? volcap::testing::random_polynomial(rng, 2, 2, 2) : volcap::testing::order2_frame();
    const double c = cdist(rng);
    const auto base = predict_capacity(Z, SymplecticForm(2));
    const auto scaled = predict_capacity(c * Z, SymplecticForm(2));
    REQUIRE(scaled.order == base.order);
    const int j = base.order;
    const double v0 = j % 2 ? base.value : base.value_plus;
    const double v1 = j % 2 ? scaled.value : scaled.value_plus;
    CHECK(v1 == doctest::Approx(c * c * v0).epsilon(1e-7));
    const auto& s0 = base.mu.samples.front();
    const auto& s1 = scaled.mu.samples.front();
    if (s0.t == s1.t) CHECK(s1.plus == doctest::Approx(std::pow(c, 2.0 / j) * s0.plus).epsilon(1e-10));
    for (const auto& s : scaled.mu.samples) CHECK(s.plus >= 0.0);
  }
}
