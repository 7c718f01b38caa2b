#include "volcap/asympt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "volcap/errors.hpp"

namespace volcap {
namespace {

constexpr int kMinEntries = 8;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SignFit fit_side(const std::vector<double>& side, Window w) {
  SignFit fit;
  std::vector<double> x;
  std::vector<double> y;
  for (int n = w.lo; n <= w.hi && n <= static_cast<int>(side.size()); ++n) {
    const double v = std::abs(side[n - 1]);
    if (v > 0.0 && std::isfinite(std::log(v))) {
      x.push_back(std::log(static_cast<double>(n)));
      y.push_back(std::log(v));
    }
  }
  fit.count = static_cast<int>(x.size());
  if (fit.count < kMinEntries) return fit;
  fit.available = true;
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  fit.slope = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

void estimate_value(SignFit& fit, const std::vector<double>& side, Window w, int order) {
  if (!fit.available) return;
  std::vector<double> scaled;
  std::vector<double> idx;
  for (int n = w.lo; n <= w.hi && n <= static_cast<int>(side.size()); ++n) {
    const double v = std::abs(side[n - 1]);
    if (v > 0.0) scaled.push_back(v * std::pow(std::numbers::pi * n, order));
  }
  fit.value = median(scaled);
  fit.residual = 0.0;
  for (double s : scaled) fit.residual = std::max(fit.residual, std::abs(s - fit.value) / fit.value);
}

}  // namespace

int counting_function(const SpectrumResult& s, int j, double n, Sign sign) {
  if (j < 1) throw DomainError("asympt", "counting function needs j >= 1");
  if (!(n > 0.0)) return 0;
  const auto& side = sign == Sign::plus ? s.positive : s.negative;
  const double threshold = std::pow(n, -j);
  int count = 0;
  for (double v : side) {
    if (std::abs(v) > threshold) ++count;
  }
  return count;
}

Window default_window(int N) {
  if (N < 12) throw DomainError("asympt", "basis too small for a default window");
  return {std::max(1, N / 12), N / 6};
}

CapacityFit fit_capacity(const SpectrumResult& s, Window window, int j_max) {
  if (window.lo < 1 || window.size() < kMinEntries) {
    throw DomainError("asympt", "fit window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) +
                                    "] holds fewer than 8 indices");
  }
  CapacityFit fit;
  fit.window = window;
  fit.plus = fit_side(s.positive, window);
  fit.minus = fit_side(s.negative, window);
  if (!fit.plus.available && !fit.minus.available) {
    fit.infinite = true;
    return fit;
  }
  // The side with the larger entries dominates the order estimate; a faster
  // decaying side belongs to the same order with a smaller constant.
  auto level = [&](const std::vector<double>& side, const SignFit& f) {
    return f.available ? std::abs(side[std::min<int>(window.lo, side.size()) - 1]) : 0.0;
  };
  const bool use_plus = level(s.positive, fit.plus) >= level(s.negative, fit.minus);
  const SignFit& lead = use_plus ? fit.plus : fit.minus;
  const SignFit& other = use_plus ? fit.minus : fit.plus;
  fit.slope = lead.slope;
  if (other.available && std::abs(other.slope - lead.slope) < 0.5) fit.slope = 0.5 * (lead.slope + other.slope);
  if (fit.slope > j_max + 0.5) {
    fit.infinite = true;
    return fit;
  }
  fit.order = std::max(1, static_cast<int>(std::lround(fit.slope)));
  estimate_value(fit.plus, s.positive, window, fit.order);
  estimate_value(fit.minus, s.negative, window, fit.order);
  return fit;
}

CheckReport check_additivity(const CapacityFit& fit1, const CapacityFit& fit2, const CapacityFit& merged,
                             double tol) {
  CheckReport report;
  if (fit1.infinite || fit2.infinite || merged.infinite || fit1.order != fit2.order) {
    report.pass = false;
    report.message = "orders differ or a fit is infinite";
    return report;
  }
  const int j = fit1.order;
  std::ostringstream msg;
  auto side = [&](const SignFit& a, const SignFit& b, const SignFit& m, const char* name) {
    if (!m.available) return;
    const double expected = std::pow(std::pow(a.value, 1.0 / j) + std::pow(b.value, 1.0 / j), j);
    const double err = std::abs(m.value - expected);
    const double rel = m.value > 0.0 ? err / m.value : (err > 0.0 ? INFINITY : 0.0);
    report.worst = std::max(report.worst, rel);
    ++report.checked;
    if (report.checked == 1) {
      report.expected = expected;
      report.observed = m.value;
    }
    if (!(err <= tol * m.value)) report.pass = false;
    msg << name << ": expected " << expected << ", merged " << m.value << "; ";
  };
  side(fit1.plus, fit2.plus, merged.plus, "plus");
  side(fit1.minus, fit2.minus, merged.minus, "minus");
  if (report.checked == 0) {
    report.pass = false;
    msg << "merged fit has no usable side";
  }
  report.message = msg.str();
  return report;
}

CheckReport check_restriction_stability(const SpectrumResult& full, const SpectrumResult& restricted, int d,
                                        double tol) {
  if (d < 0) throw DomainError("asympt", "codimension must be nonnegative");
  CheckReport report;
  double scale = 0.0;
  for (const auto* s : {&full, &restricted}) {
    if (!s->positive.empty()) scale = std::max(scale, std::abs(s->positive.front()));
    if (!s->negative.empty()) scale = std::max(scale, std::abs(s->negative.front()));
  }
  const double slack = tol * std::max(scale, 1e-300);
  auto get = [](const std::vector<double>& v, int n) { return n >= 1 && n <= static_cast<int>(v.size()) ? v[n - 1] : 0.0; };
  std::ostringstream msg;
  auto chain = [&](const std::vector<double>& f, const std::vector<double>& r, double dir, const char* name) {
    const int len = static_cast<int>(std::max(f.size(), r.size()));
    for (int n = 1; n <= len; ++n) {
      // dir = +1 on the positive side, -1 mirrors the inequalities.
      const double lower = dir * get(r, n);
      const double mid = dir * get(f, n);
      ++report.checked;
      double violation = std::max(0.0, lower - mid);
      if (n - d >= 1) violation = std::max(violation, mid - dir * get(r, n - d));
      if (violation > report.worst) report.worst = violation;
      if (violation > slack) {
        if (report.pass) msg << name << " interlacing fails first at n = " << n << "; ";
        report.pass = false;
      }
    }
  };
  chain(full.positive, restricted.positive, 1.0, "positive");
  chain(full.negative, restricted.negative, -1.0, "negative");
  if (report.pass) msg << "interlacing holds over " << report.checked << " indices";
  report.message = msg.str();
  return report;
}

}  // namespace volcap
