#pragma once

#include <cstddef>
#include <vector>

namespace copdyn {

// Symmetric K x K correlation matrix with unit diagonal and entries in [-1, 1].
class CorrelationMatrix {
 public:
  // values is K x K row-major. Throws std::invalid_argument when the matrix is
  // not symmetric, the diagonal is not exactly 1, or an entry leaves [-1, 1].
  CorrelationMatrix(std::size_t size, std::vector<double> values);

  // Every off-diagonal entry equal to c.
  static CorrelationMatrix constant(std::size_t size, double c);

  std::size_t size() const noexcept { return k_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * k_ + j]; }
  const std::vector<double>& values() const noexcept { return values_; }

  std::size_t pair_count() const noexcept { return k_ * (k_ - 1) / 2; }

  // Strictly-upper-triangle entries in (i < j) lexicographic order.
  std::vector<double> upper_triangle() const;

 private:
  std::size_t k_;
  std::vector<double> values_;
};

}  // namespace copdyn
