#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace copdyn {

// Step-function ECDF of a finite sample, F(x) = #{samples <= x} / T, and its
// generalized inverse. No smoothing or interpolation.
class EmpiricalDistribution {
 public:
  // Throws std::invalid_argument on an empty sample or NaN values.
  explicit EmpiricalDistribution(std::span<const double> sample);

  std::size_t size() const noexcept { return sorted_.size(); }

  // Nondecreasing copy of the sample and the time index each sorted element
  // came from (stable for ties).
  std::span<const double> sorted_sample() const noexcept { return sorted_; }
  std::span<const std::size_t> original_index() const noexcept { return index_; }

  double ecdf(double x) const;

  // inf{x : F(x) >= u} for 0 < u <= 1, i.e. the smallest sample value whose
  // ECDF reaches u. For u == 0 the sample minimum is returned.
  double quantile(double u) const;

  // quantile(num / den) with the comparison F(x) >= num/den done in exact
  // integer arithmetic. Grid estimators use this so bin edges never depend on
  // how i/m rounds.
  double quantile_fraction(std::size_t num, std::size_t den) const;

  // Largest number of tied observations (1 when all values are distinct).
  std::size_t max_tie() const noexcept { return max_tie_; }

 private:
  std::vector<double> sorted_;
  std::vector<std::size_t> index_;
  std::size_t max_tie_ = 1;
};

// output[t] = F(series[t]); tied observations share the maximal rank of their
// group. Distinct values map to a permutation of {1/T, ..., 1}.
std::vector<double> rank_transform(std::span<const double> series);

}  // namespace copdyn
