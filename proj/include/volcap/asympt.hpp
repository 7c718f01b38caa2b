#pragma once

#include <string>
#include <vector>

#include "volcap/spectrum.hpp"

namespace volcap {

enum class Sign { plus, minus };

/// C_j^{+-}(n) = #{ l : 0 < |lambda_l|^{-1/j} < n } on the chosen side.
int counting_function(const SpectrumResult& s, int j, double n, Sign sign);

/// 1-based inclusive index range of the monotone arrangement.
struct Window {
  int lo = 0;
  int hi = 0;
  int size() const { return hi - lo + 1; }
};

/// [N/12, N/6] for a Galerkin spectrum with per-component basis size N.
Window default_window(int N);

struct SignFit {
  bool available = false;  // at least 8 nonzero entries inside the window
  int count = 0;           // nonzero entries inside the window
  double slope = 0.0;      // -d log|lambda_n| / d log n, least squares
  double value = 0.0;      // median of |lambda_n| (pi n)^order
  double residual = 0.0;   // max relative deviation from `value` in the window
};

struct CapacityFit {
  Window window;
  bool infinite = false;
  double slope = 0.0;  // combined real-valued order estimate
  int order = 0;       // rounded
  SignFit plus;
  SignFit minus;
  double residual() const { return std::max(plus.residual, minus.residual); }
};

/// Log-log regression of the decay order and median estimate of the leading
/// constant on each side. Sides with fewer than 8 entries report value 0; if
/// neither side has 8 entries, or the slope exceeds j_max + 1/2, the fit is
/// declared infinite.
CapacityFit fit_capacity(const SpectrumResult& s, Window window, int j_max = 8);

struct CheckReport {
  bool pass = true;
  std::string message;
  double expected = 0.0;
  double observed = 0.0;
  double worst = 0.0;  // largest relative error or violation found
  int checked = 0;
};

/// (xi1^{1/j} + xi2^{1/j})^j against the merged fit, per side present in all
/// three fits.
CheckReport check_additivity(const CapacityFit& fit1, const CapacityFit& fit2, const CapacityFit& merged,
                             double tol);

/// lambda_n(R) <= lambda_n(F) <= lambda_{n-d}(R) on the positive side and the
/// mirrored chain on the negative side; missing entries count as 0.
CheckReport check_restriction_stability(const SpectrumResult& full, const SpectrumResult& restricted, int d,
                                        double tol = 1e-10);

}  // namespace volcap
