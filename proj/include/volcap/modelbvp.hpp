#pragma once

#include <utility>
#include <vector>

#include "volcap/spectrum.hpp"

namespace volcap {

enum class Parity { even, odd };

/// Constant-coefficient model problem of order 2k (even) or 2k-1 (odd) on an
/// interval of length `length`. Every eigenvalue has multiplicity two.
struct ModelSpectrum {
  double mu = 1.0;
  int k = 1;
  double length = 1.0;
  Parity parity = Parity::even;

  /// Capacity order j = 2k or 2k-1.
  int order() const { return parity == Parity::even ? 2 * k : 2 * k - 1; }
  /// |mu| length^j, the capacity of the model problem.
  double capacity() const;
  /// lambda_r for r in Z \ {0}; zero where the arrangement is empty.
  double eigenvalue(int r) const;
};

/// First `count` entries of both monotone arrangements.
SpectrumResult exact_spectrum(const ModelSpectrum& model, int count);

/// Merged monotone arrangement (by decreasing magnitude) of the multiset union,
/// truncated to `count`. Each input must be monotone arranged.
std::vector<double> merge_direct_sum(const std::vector<std::vector<double>>& spectra, int count);
SpectrumResult merge_direct_sum(const std::vector<SpectrumResult>& spectra, int count);

/// Sandwich for lambda_r of a form that differs from `model` by m model blocks:
/// xi / (pi (r + 2mk + p))^j <= lambda_r <= xi / (pi (r - 2mk - p))^j, with
/// p = r mod 2. The upper bound is +inf when r - 2mk - p <= 0.
std::pair<double, double> shift_bounds(const ModelSpectrum& model, int m, int r);

}  // namespace volcap
