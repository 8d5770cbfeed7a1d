#include "copdyn/correlation.hpp"

#include <cmath>
#include <stdexcept>

namespace copdyn {

CorrelationMatrix::CorrelationMatrix(std::size_t size, std::vector<double> values)
    : k_(size), values_(std::move(values)) {
  if (k_ == 0) throw std::invalid_argument("CorrelationMatrix: empty matrix");
  if (values_.size() != k_ * k_) throw std::invalid_argument("CorrelationMatrix: expected K*K values");
  for (std::size_t i = 0; i < k_; ++i) {
    if (values_[i * k_ + i] != 1.0) throw std::invalid_argument("CorrelationMatrix: diagonal must be 1");
    for (std::size_t j = i + 1; j < k_; ++j) {
      const double c = values_[i * k_ + j];
      if (c != values_[j * k_ + i]) throw std::invalid_argument("CorrelationMatrix: matrix is not symmetric");
      if (!(std::abs(c) <= 1.0)) throw std::invalid_argument("CorrelationMatrix: entry outside [-1, 1]");
    }
  }
}

CorrelationMatrix CorrelationMatrix::constant(std::size_t size, double c) {
  std::vector<double> values(size * size, c);
  for (std::size_t i = 0; i < size; ++i) values[i * size + i] = 1.0;
  return CorrelationMatrix(size, std::move(values));
}

std::vector<double> CorrelationMatrix::upper_triangle() const {
  std::vector<double> out;
  out.reserve(pair_count());
  for (std::size_t i = 0; i < k_; ++i)
    for (std::size_t j = i + 1; j < k_; ++j) out.push_back(values_[i * k_ + j]);
  return out;
}

}  // namespace copdyn
