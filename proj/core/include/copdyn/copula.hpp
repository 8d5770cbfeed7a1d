#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "copdyn/empirical.hpp"
#include "copdyn/ingest.hpp"

namespace copdyn {

// Copula on an m x m quantile grid.
//
// Cell (i, j), 0-based, covers u in (i/m, (i+1)/m] and v in (j/m, (j+1)/m]
// and holds a probability mass. The cumulative grid has (m+1)^2 nodes with
// node (i, j) = Cop(i/m, j/m), so node row/column 0 is zero and node (m, m)
// is one.
//
// slack() bounds how far the marginals may deviate from uniform:
// j/m <= Cop(1, j/m) <= j/m + slack(). For empirical grids it is the largest
// tie group of either margin divided by the sample length (1/T with distinct
// values); analytic grids report 0.
class CopulaGrid {
 public:
  CopulaGrid(std::size_t resolution, std::vector<double> density, std::vector<double> cumulative,
             std::size_t sample_count, std::size_t pair_count, double slack);

  // Builds density and cumulative from integer cell counts summed over
  // `pair_count` pairs of length `sample_count`; every value is
  // count / (sample_count * pair_count).
  static CopulaGrid from_counts(std::size_t resolution, std::span<const std::uint64_t> counts,
                                std::size_t sample_count, std::size_t pair_count, double slack);

  std::size_t resolution() const noexcept { return m_; }
  // Observations per series backing the estimate (0 for analytic grids).
  std::size_t sample_count() const noexcept { return sample_count_; }
  std::size_t pair_count() const noexcept { return pair_count_; }
  double slack() const noexcept { return slack_; }
  // Fewer observations than grid rows; most cells are then empty.
  bool sparse() const noexcept { return sample_count_ != 0 && sample_count_ < m_; }

  double density(std::size_t i, std::size_t j) const { return density_[i * m_ + j]; }
  double cumulative(std::size_t i, std::size_t j) const { return cumulative_[i * (m_ + 1) + j]; }
  std::span<const double> densities() const noexcept { return density_; }
  std::span<const double> cumulatives() const noexcept { return cumulative_; }

  // Cop(u, v) by bilinear interpolation between cumulative nodes; u and v
  // are clamped to [0, 1].
  double cumulative_at(double u, double v) const;

  CopulaGrid transposed() const;

 private:
  std::size_t m_;
  std::vector<double> density_;
  std::vector<double> cumulative_;
  std::size_t sample_count_;
  std::size_t pair_count_;
  double slack_;
};

// Quantile-bin index (0-based) of every observation: observation x lands in
// the smallest bin b with x <= F^-1((b+1)/m). The lowest bin is closed below,
// so each observation lands in exactly one bin.
std::vector<std::uint16_t> quantile_bins(std::span<const double> series, std::size_t m);

// (1/T) sum_t 1[r1(t) <= F1^-1(u)] 1[r2(t) <= F2^-1(v)], with Cop(0, v) =
// Cop(u, 0) = 0.
double empirical_copula_cumulative(std::span<const double> r1, std::span<const double> r2, double u, double v);

CopulaGrid empirical_copula_density(std::span<const double> r1, std::span<const double> r2, std::size_t m);

// Mean of the K(K-1)/2 pair grids. Cell counts are accumulated as integers,
// so the result does not depend on the thread count or scheduling.
CopulaGrid average_pairwise_density(const ReturnMatrix& matrix, std::size_t m, unsigned threads = 0);

// Cop(F1(x), F2(y)) read off the grid.
double rebuild_joint_cdf(const CopulaGrid& grid, const EmpiricalDistribution& f1, const EmpiricalDistribution& f2,
                         double x, double y);

// Header `i,j,u_hi,v_hi,density,cumulative` with 1-based cell indices and
// the cell's upper-right node cumulative. With permille=true the density
// column becomes `density_permille` (mass x 1000).
void write_grid_csv(std::ostream& out, const CopulaGrid& grid, bool permille = false);

}  // namespace copdyn
