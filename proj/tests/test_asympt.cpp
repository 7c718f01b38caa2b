#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/instances.hpp"
#include "volcap/asympt.hpp"
#include "volcap/errors.hpp"
#include "volcap/galerkin.hpp"
#include "volcap/modelbvp.hpp"

using namespace volcap;

namespace {

constexpr double pi = std::numbers::pi;

SpectrumResult synthetic(double xp, double xm, int j, int count) {
  SpectrumResult s;
  for (int n = 1; n <= count; ++n) {
    if (xp > 0) s.positive.push_back(xp / std::pow(pi * n, j));
    if (xm > 0) s.negative.push_back(-xm / std::pow(pi * n, j));
  }
  return s;
}

}  // namespace

TEST_CASE("counting function") {
  CHECK(counting_function(SpectrumResult{}, 1, 10.0, Sign::plus) == 0);
  const auto s = synthetic(1.0, 1.0, 1, 1000);
  // 1/(pi l) > 1/n  <=>  l < n / pi
  for (double n : {3.0, 10.0, 31.4, 100.0}) {
    const int expected = static_cast<int>(std::ceil(n / pi)) - 1;
    CHECK(counting_function(s, 1, n, Sign::plus) == expected);
    CHECK(counting_function(s, 1, n, Sign::minus) == expected);
  }
  CHECK_THROWS_AS(counting_function(s, 0, 1.0, Sign::plus), DomainError);
}

TEST_CASE("counting function and arrangement are dual") {
  const auto s = synthetic(2.0, 0.0, 2, 500);
  for (double n = 1.0; n < 200.0; n *= 1.3) {
    const int c = counting_function(s, 2, n, Sign::plus);
    if (c > 0) CHECK(s.at(c) > std::pow(n, -2.0));
    if (c < 500) CHECK(s.at(c + 1) <= std::pow(n, -2.0));
  }
}

TEST_CASE("fit on exact sequences") {
  const auto f1 = fit_capacity(synthetic(1.0, 1.0, 1, 200), {20, 60});
  CHECK(f1.order == 1);
  CHECK(f1.plus.value == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(f1.minus.value == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(f1.residual() < 1e-13);

  const auto f2 = fit_capacity(synthetic(5.0, 3.0, 2, 200), {20, 60});
  CHECK(f2.order == 2);
  CHECK(f2.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f2.plus.value == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(f2.minus.value == doctest::Approx(3.0).epsilon(1e-13));

  const auto one_sided = fit_capacity(synthetic(5.0, 0.0, 2, 200), {20, 60});
  CHECK(one_sided.order == 2);
  CHECK_FALSE(one_sided.minus.available);
  CHECK(one_sided.minus.value == 0.0);

  CHECK_THROWS_AS(fit_capacity(synthetic(1.0, 1.0, 1, 200), {10, 15}), DomainError);
  CHECK(fit_capacity(SpectrumResult{}, {10, 40}).infinite);

  SpectrumResult fast;
  for (int n = 1; n <= 100; ++n) fast.positive.push_back(std::exp(-0.5 * n));
  CHECK(fit_capacity(fast, {20, 60}).infinite);
}

TEST_CASE("homogeneity of the fitted value") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> a(0.1, 10.0);
  auto s = synthetic(1.0, 2.0, 1, 200);
  for (double& v : s.positive) v *= 1.0 + 0.3 / std::sqrt(&v - s.positive.data() + 1.0);
  const auto base = fit_capacity(s, {20, 60});
  for (int i = 0; i < 5; ++i) {
    const double c = a(rng);
    SpectrumResult scaled = s;
    for (double& v : scaled.positive) v *= c;
    for (double& v : scaled.negative) v *= c;
    const auto f = fit_capacity(scaled, {20, 60});
    CHECK(f.plus.value == doctest::Approx(c * base.plus.value).epsilon(1e-12));
    CHECK(f.minus.value == doctest::Approx(c * base.minus.value).epsilon(1e-12));
  }
}

TEST_CASE("tail perturbation moves the fit by at most the residual") {
  auto s = synthetic(1.0, 1.0, 2, 300);
  for (std::size_t i = 0; i < s.positive.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    s.positive[i] += 0.4 * std::pow(n, -2.5) * (i % 2 ? 1.0 : -1.0);
  }
  const auto f = fit_capacity(s, {25, 50});
  CHECK(f.order == 2);
  CHECK(std::abs(f.plus.value - 1.0) <= f.plus.residual);
}

TEST_CASE("additivity") {
  auto fit = [](double xi, int j) { return fit_capacity(synthetic(xi, xi, j, 400), {40, 80}); };
  CHECK(check_additivity(fit(1, 1), fit(1, 1), fit(2, 1), 1e-12).pass);
  const auto r = check_additivity(fit(4, 2), fit(9, 2), fit(25, 2), 1e-12);
  CHECK(r.pass);
  CHECK(r.expected == doctest::Approx(25.0));
  CHECK_FALSE(check_additivity(fit(4, 2), fit(9, 2), fit(13, 2), 0.02).pass);
  CHECK_FALSE(check_additivity(fit(1, 1), fit(1, 2), fit(2, 1), 0.02).pass);

  SUBCASE("merged model spectra") {
    const ModelSpectrum a{4.0, 1, 1.0, Parity::even};
    const ModelSpectrum b{9.0, 1, 1.0, Parity::even};
    const auto sa = exact_spectrum(a, 2000);
    const auto sb = exact_spectrum(b, 2000);
    const auto merged = merge_direct_sum({sa, sb}, 2000);
    const Window w{200, 600};
    const auto report = check_additivity(fit_capacity(sa, w), fit_capacity(sb, w), fit_capacity(merged, w), 0.02);
    CHECK(report.pass);
  }
}

TEST_CASE("restriction interlacing") {
  const auto s = spectrum_from_values({3, 2, 1});
  CHECK(check_restriction_stability(s, s, 0).pass);
  CHECK(check_restriction_stability(s, spectrum_from_values({2, 1}), 1).pass);
  CHECK_FALSE(check_restriction_stability(s, spectrum_from_values({3.5, 1}), 1).pass);
  CHECK_FALSE(check_restriction_stability(s, spectrum_from_values({2, 1}), 0).pass);

  SUBCASE("Galerkin form with extra moment constraints") {
    const int N = 96;
    const auto Z = volcap::testing::goh_failing_frame();
    const auto form = volterra_form(Z);
    const Eigen::MatrixXd M = assemble(form, N);
    const Eigen::MatrixXd base = constraint_matrix(form.constraint, 2, N);
    const Restriction full = restrict(M, base);
    const auto sf = spectrum(full.matrix);
    for (int d = 1; d <= 3; ++d) {
      const Eigen::MatrixXd extra = constraint_matrix(SubspaceSelector::moment_constraints(d + 1), 2, N)
                                        .bottomRows(2 * d)
                                        .topRows(d);
      Eigen::MatrixXd all(base.rows() + d, base.cols());
      all << base, extra;
      const Restriction sub = restrict(M, all);
      REQUIRE(sub.constraint_rank - full.constraint_rank == d);
      CHECK(check_restriction_stability(sf, spectrum(sub.matrix), d).pass);
    }
  }
}
