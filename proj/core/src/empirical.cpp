#include "copdyn/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace copdyn {

EmpiricalDistribution::EmpiricalDistribution(std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("EmpiricalDistribution: empty sample");
  index_.resize(sample.size());
  std::iota(index_.begin(), index_.end(), std::size_t{0});
  for (double x : sample) {
    if (std::isnan(x)) throw std::invalid_argument("EmpiricalDistribution: NaN in sample");
  }
  std::stable_sort(index_.begin(), index_.end(),
                   [&](std::size_t a, std::size_t b) { return sample[a] < sample[b]; });
  sorted_.reserve(sample.size());
  for (std::size_t i : index_) sorted_.push_back(sample[i]);

  std::size_t run = 1;
  for (std::size_t i = 1; i < sorted_.size(); ++i) {
    run = sorted_[i] == sorted_[i - 1] ? run + 1 : 1;
    max_tie_ = std::max(max_tie_, run);
  }
}

double EmpiricalDistribution::ecdf(double x) const {
  const auto below = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
  return static_cast<double>(below) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("quantile: u must lie in [0, 1]");
  if (u == 0.0) return sorted_.front();
  const double n = static_cast<double>(sorted_.size());
  // smallest k with k/T >= u; the position k-1 holds a value whose ECDF is
  // at least k/T, and every smaller value has ECDF below u
  auto k = static_cast<std::size_t>(std::ceil(u * n));
  k = std::clamp<std::size_t>(k, 1, sorted_.size());
  while (k > 1 && static_cast<double>(k - 1) / n >= u) --k;
  while (k < sorted_.size() && static_cast<double>(k) / n < u) ++k;
  return sorted_[k - 1];
}

double EmpiricalDistribution::quantile_fraction(std::size_t num, std::size_t den) const {
  if (den == 0 || num > den) throw std::invalid_argument("quantile_fraction: need 0 <= num <= den, den > 0");
  if (num == 0) return sorted_.front();
  const std::uint64_t n = sorted_.size();
  if (num > std::numeric_limits<std::uint64_t>::max() / n) {
    throw std::overflow_error("quantile_fraction: num * T overflows");
  }
  const std::uint64_t k = (num * n + den - 1) / den;
  return sorted_[k - 1];
}

std::vector<double> rank_transform(std::span<const double> series) {
  const EmpiricalDistribution dist(series);
  std::vector<double> out(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) out[t] = dist.ecdf(series[t]);
  return out;
}

}  // namespace copdyn
