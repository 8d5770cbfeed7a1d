#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <ostream>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "copdyn/copula.hpp"
#include "copdyn/correlation.hpp"

namespace copdyn {

double std_normal_pdf(double x);

// Phi(x), absolute error below 1e-12.
double std_normal_cdf(double x);

// Phi^-1(u) for u in (0, 1); throws std::invalid_argument otherwise.
double std_normal_quantile(double u);

// P(X <= x, Y <= y) for a standard bivariate normal with correlation c.
// Throws std::invalid_argument for |c| > 1; c = +-1 use the comonotone and
// countermonotone limits.
double bivariate_normal_cdf(double x, double y, double c);

// Cop_c(u, v) = Phi2(Phi^-1(u), Phi^-1(v); c). u, v in [0, 1]; on the
// boundary Cop(0, v) = 0 and Cop(1, v) = v.
double gaussian_copula_cdf(double u, double v, double c);

// phi2(x, y; c) / (phi(x) phi(y)) at x = Phi^-1(u), y = Phi^-1(v). Requires
// |c| < 1.
double gaussian_copula_density(double u, double v, double c);

// Exact Gaussian copula on an m x m grid: nodes from gaussian_copula_cdf,
// cells by inclusion-exclusion over their corners.
CopulaGrid gaussian_grid(double c, std::size_t m);

// Gaussian grids keyed by (round(1000 c), m). Safe for concurrent use.
class GaussianGridCache {
 public:
  static constexpr double kStep = 1e-3;

  std::shared_ptr<const CopulaGrid> get(double c, std::size_t m);
  std::size_t size() const;

  static long key_of(double c);

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::pair<long, std::size_t>, std::shared_ptr<const CopulaGrid>> grids_;
};

// Signed cell masses, empirical minus Gaussian. Positive where the Gaussian
// copula is less dense.
struct DifferenceGrid {
  std::size_t resolution = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * resolution + j]; }
};

// (average empirical grid) - (average over i<j of gaussian_grid(C_ij)). By
// linearity this equals the pair-by-pair average of the differences.
// Gaussian grids use correlations rounded to GaussianGridCache::kStep.
// Throws when the grid's pair count does not match the matrix.
DifferenceGrid difference_map(const CopulaGrid& empirical, const CorrelationMatrix& corr,
                              GaussianGridCache* cache = nullptr, unsigned threads = 0);

// Same rows as write_grid_csv; values are reported in permille.
// Header `i,j,u_hi,v_hi,d_permille`.
void write_difference_csv(std::ostream& out, const DifferenceGrid& diff);

}  // namespace copdyn
