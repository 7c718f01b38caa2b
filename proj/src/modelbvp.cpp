#include "volcap/modelbvp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "volcap/errors.hpp"

namespace volcap {
namespace {

void validate(const ModelSpectrum& model) {
  if (model.k < 1) throw DomainError("modelbvp", "k must be >= 1");
  if (!(model.length > 0.0 && model.length <= 1.0)) throw DomainError("modelbvp", "length must lie in (0, 1]");
  if (!std::isfinite(model.mu)) throw DomainError("modelbvp", "mu must be finite");
}

}  // namespace

double ModelSpectrum::capacity() const { return std::abs(mu) * std::pow(length, order()); }

double ModelSpectrum::eigenvalue(int r) const {
  validate(*this);
  if (r == 0) throw DomainError("modelbvp", "eigenvalue index 0 does not exist");
  if (mu == 0.0) return 0.0;
  const int j = order();
  const double denom = std::pow(2.0 * std::numbers::pi * ((std::abs(r) + 1) / 2), j);
  const double magnitude = std::abs(mu) * std::pow(length, j) / denom;
  if (parity == Parity::even) {
    // One-sided: the arrangement on the side opposite to sign(mu) is empty.
    if ((r > 0) != (mu > 0.0)) return 0.0;
    return std::copysign(magnitude, mu);
  }
  return r > 0 ? magnitude : -magnitude;
}

SpectrumResult exact_spectrum(const ModelSpectrum& model, int count) {
  validate(model);
  if (count < 1) throw DomainError("modelbvp", "count must be >= 1");
  SpectrumResult out;
  if (model.mu == 0.0) return out;
  const bool pos = model.parity == Parity::odd || model.mu > 0.0;
  const bool neg = model.parity == Parity::odd || model.mu < 0.0;
  for (int r = 1; r <= count; ++r) {
    if (pos) out.positive.push_back(model.eigenvalue(r));
    if (neg) out.negative.push_back(model.eigenvalue(-r));
  }
  return out;
}

std::vector<double> merge_direct_sum(const std::vector<std::vector<double>>& spectra, int count) {
  using Head = std::pair<double, std::pair<std::size_t, std::size_t>>;  // |value|, (list, index)
  std::priority_queue<Head> heap;
  for (std::size_t s = 0; s < spectra.size(); ++s) {
    if (!spectra[s].empty()) heap.push({std::abs(spectra[s][0]), {s, 0}});
  }
  std::vector<double> out;
  while (!heap.empty() && static_cast<int>(out.size()) < count) {
    const auto [mag, pos] = heap.top();
    heap.pop();
    out.push_back(spectra[pos.first][pos.second]);
    if (pos.second + 1 < spectra[pos.first].size()) {
      heap.push({std::abs(spectra[pos.first][pos.second + 1]), {pos.first, pos.second + 1}});
    }
  }
  return out;
}

SpectrumResult merge_direct_sum(const std::vector<SpectrumResult>& spectra, int count) {
  std::vector<std::vector<double>> pos;
  std::vector<std::vector<double>> neg;
  for (const auto& s : spectra) {
    pos.push_back(s.positive);
    neg.push_back(s.negative);
  }
  SpectrumResult out;
  out.positive = merge_direct_sum(pos, count);
  out.negative = merge_direct_sum(neg, count);
  return out;
}

std::pair<double, double> shift_bounds(const ModelSpectrum& model, int m, int r) {
  validate(model);
  if (m < 0) throw DomainError("modelbvp", "m must be nonnegative");
  if (r < 1 || r < m * model.k) {
    throw DomainError("modelbvp", "shift bounds hold for r >= m k = " + std::to_string(m * model.k));
  }
  const int j = model.order();
  const double xi = model.capacity();
  const int shift = 2 * m * model.k + r % 2;
  const double lower = xi / std::pow(std::numbers::pi * (r + shift), j);
  const int below = r - shift;
  const double upper =
      below > 0 ? xi / std::pow(std::numbers::pi * below, j) : std::numeric_limits<double>::infinity();
  return {lower, upper};
}

}  // namespace volcap
