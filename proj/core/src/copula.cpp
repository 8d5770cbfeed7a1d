#include "copdyn/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "copdyn/format.hpp"
#include "copdyn/parallel.hpp"

namespace copdyn {

namespace {

void require_pair(std::span<const double> r1, std::span<const double> r2) {
  if (r1.size() != r2.size()) throw std::invalid_argument("copula: series lengths differ");
  if (r1.empty()) throw std::invalid_argument("copula: empty series");
}

void require_resolution(std::size_t m) {
  if (m < 2) throw std::invalid_argument("copula: grid resolution must be at least 2");
  if (m > std::numeric_limits<std::uint16_t>::max()) throw std::invalid_argument("copula: grid resolution too large");
}

double tie_slack(const EmpiricalDistribution& d) {
  return static_cast<double>(d.max_tie()) / static_cast<double>(d.size());
}

struct BinnedSeries {
  std::vector<std::uint16_t> bins;
  double slack;
};

BinnedSeries bin_series(std::span<const double> series, std::size_t m) {
  const EmpiricalDistribution dist(series);
  std::vector<double> edges(m);
  for (std::size_t b = 0; b < m; ++b) edges[b] = dist.quantile_fraction(b + 1, m);
  BinnedSeries out{std::vector<std::uint16_t>(series.size()), tie_slack(dist)};
  for (std::size_t t = 0; t < series.size(); ++t) {
    const auto it = std::lower_bound(edges.begin(), edges.end(), series[t]);
    out.bins[t] = static_cast<std::uint16_t>(it - edges.begin());
  }
  return out;
}

void accumulate_pair(std::span<const std::uint16_t> a, std::span<const std::uint16_t> b, std::size_t m,
                     std::span<std::uint64_t> counts) {
  for (std::size_t t = 0; t < a.size(); ++t) ++counts[a[t] * m + b[t]];
}

}  // namespace

CopulaGrid::CopulaGrid(std::size_t resolution, std::vector<double> density, std::vector<double> cumulative,
                       std::size_t sample_count, std::size_t pair_count, double slack)
    : m_(resolution),
      density_(std::move(density)),
      cumulative_(std::move(cumulative)),
      sample_count_(sample_count),
      pair_count_(pair_count),
      slack_(slack) {
  require_resolution(m_);
  if (density_.size() != m_ * m_ || cumulative_.size() != (m_ + 1) * (m_ + 1)) {
    throw std::invalid_argument("CopulaGrid: dimensions do not match resolution");
  }
}

CopulaGrid CopulaGrid::from_counts(std::size_t m, std::span<const std::uint64_t> counts, std::size_t sample_count,
                                   std::size_t pair_count, double slack) {
  require_resolution(m);
  if (counts.size() != m * m) throw std::invalid_argument("CopulaGrid::from_counts: wrong count size");
  if (sample_count == 0 || pair_count == 0) throw std::invalid_argument("CopulaGrid::from_counts: empty estimate");
  const double total = static_cast<double>(sample_count) * static_cast<double>(pair_count);

  std::vector<double> density(m * m);
  for (std::size_t c = 0; c < m * m; ++c) density[c] = static_cast<double>(counts[c]) / total;

  const std::size_t n = m + 1;
  std::vector<std::uint64_t> prefix(n * n, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      prefix[i * n + j] = counts[(i - 1) * m + (j - 1)] + prefix[(i - 1) * n + j] + prefix[i * n + j - 1] -
                          prefix[(i - 1) * n + j - 1];
    }
  }
  std::vector<double> cumulative(n * n);
  for (std::size_t c = 0; c < n * n; ++c) cumulative[c] = static_cast<double>(prefix[c]) / total;
  return CopulaGrid(m, std::move(density), std::move(cumulative), sample_count, pair_count, slack);
}

double CopulaGrid::cumulative_at(double u, double v) const {
  u = std::clamp(u, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  const double m = static_cast<double>(m_);
  const double x = u * m;
  const double y = v * m;
  const auto i = std::min(static_cast<std::size_t>(x), m_ - 1);
  const auto j = std::min(static_cast<std::size_t>(y), m_ - 1);
  const double fx = x - static_cast<double>(i);
  const double fy = y - static_cast<double>(j);
  if (fx == 0.0 && fy == 0.0) return cumulative(i, j);
  return (1 - fx) * (1 - fy) * cumulative(i, j) + fx * (1 - fy) * cumulative(i + 1, j) +
         (1 - fx) * fy * cumulative(i, j + 1) + fx * fy * cumulative(i + 1, j + 1);
}

CopulaGrid CopulaGrid::transposed() const {
  std::vector<double> density(m_ * m_);
  std::vector<double> cumulative((m_ + 1) * (m_ + 1));
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < m_; ++j) density[j * m_ + i] = density_[i * m_ + j];
  for (std::size_t i = 0; i <= m_; ++i)
    for (std::size_t j = 0; j <= m_; ++j) cumulative[j * (m_ + 1) + i] = cumulative_[i * (m_ + 1) + j];
  return CopulaGrid(m_, std::move(density), std::move(cumulative), sample_count_, pair_count_, slack_);
}

std::vector<std::uint16_t> quantile_bins(std::span<const double> series, std::size_t m) {
  require_resolution(m);
  return bin_series(series, m).bins;
}

double empirical_copula_cumulative(std::span<const double> r1, std::span<const double> r2, double u, double v) {
  require_pair(r1, r2);
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument("empirical_copula_cumulative: u, v must lie in [0, 1]");
  }
  if (u == 0.0 || v == 0.0) return 0.0;
  const double q1 = EmpiricalDistribution(r1).quantile(u);
  const double q2 = EmpiricalDistribution(r2).quantile(v);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < r1.size(); ++t) hits += (r1[t] <= q1 && r2[t] <= q2) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(r1.size());
}

CopulaGrid empirical_copula_density(std::span<const double> r1, std::span<const double> r2, std::size_t m) {
  require_pair(r1, r2);
  require_resolution(m);
  const BinnedSeries a = bin_series(r1, m);
  const BinnedSeries b = bin_series(r2, m);
  std::vector<std::uint64_t> counts(m * m, 0);
  accumulate_pair(a.bins, b.bins, m, counts);
  return CopulaGrid::from_counts(m, counts, r1.size(), 1, std::max(a.slack, b.slack));
}

CopulaGrid average_pairwise_density(const ReturnMatrix& matrix, std::size_t m, unsigned threads) {
  require_resolution(m);
  const std::size_t k = matrix.asset_count();
  if (k < 2) throw std::invalid_argument("average_pairwise_density: need at least two assets");
  const std::size_t t_len = matrix.length();

  std::vector<BinnedSeries> binned(k);
  parallel_for(k, threads, [&](unsigned, std::size_t a) { binned[a] = bin_series(matrix.row(a), m); });

  const unsigned workers = resolve_threads(threads);
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(m * m, 0));
  // one task per first asset; every worker owns its own count buffer
  parallel_for(k - 1, workers, [&](unsigned w, std::size_t a) {
    for (std::size_t b = a + 1; b < k; ++b) accumulate_pair(binned[a].bins, binned[b].bins, m, partial[w]);
  });

  std::vector<std::uint64_t> counts(m * m, 0);
  for (const auto& p : partial)
    for (std::size_t c = 0; c < m * m; ++c) counts[c] += p[c];

  double slack = 0.0;
  for (const auto& s : binned) slack = std::max(slack, s.slack);
  return CopulaGrid::from_counts(m, counts, t_len, k * (k - 1) / 2, slack);
}

double rebuild_joint_cdf(const CopulaGrid& grid, const EmpiricalDistribution& f1, const EmpiricalDistribution& f2,
                         double x, double y) {
  return grid.cumulative_at(f1.ecdf(x), f2.ecdf(y));
}

void write_grid_csv(std::ostream& out, const CopulaGrid& grid, bool permille) {
  const std::size_t m = grid.resolution();
  out << "i,j,u_hi,v_hi," << (permille ? "density_permille" : "density") << ",cumulative\n";
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double mass = grid.density(i, j);
      out << i + 1 << ',' << j + 1 << ',' << format_double(static_cast<double>(i + 1) / static_cast<double>(m)) << ','
          << format_double(static_cast<double>(j + 1) / static_cast<double>(m)) << ','
          << format_double(permille ? mass * 1000.0 : mass) << ',' << format_double(grid.cumulative(i + 1, j + 1))
          << '\n';
    }
  }
}

}  // namespace copdyn
