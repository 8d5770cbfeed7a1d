#include "copdyn/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "copdyn/format.hpp"
#include "copdyn/parallel.hpp"
#include "copdyn/quadrature.hpp"

namespace copdyn {

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

void require_correlation(double c) {
  if (!(std::abs(c) <= 1.0)) throw std::invalid_argument("correlation must lie in [-1, 1]");
}

// Rational approximation for the lower half (u <= 0.5), polished with Halley
// steps on erfc.
double lower_quantile(double u) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  double x;
  if (u < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  for (int step = 0; step < 2; ++step) {
    const double e = std_normal_cdf(x) - u;
    if (e == 0.0) break;
    const double w = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= w / (1.0 + 0.5 * x * w);
  }
  return x;
}

}  // namespace

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 * 0.5); }

double std_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("std_normal_quantile: u must lie in (0, 1)");
  if (u == 0.5) return 0.0;
  // 1 - u is exact for u >= 0.5
  return u < 0.5 ? lower_quantile(u) : -lower_quantile(1.0 - u);
}

double bivariate_normal_cdf(double x, double y, double c) {
  require_correlation(c);
  if (std::isnan(x) || std::isnan(y)) throw std::invalid_argument("bivariate_normal_cdf: NaN argument");
  if (x == -INFINITY || y == -INFINITY) return 0.0;
  if (x == INFINITY) return std_normal_cdf(y);
  if (y == INFINITY) return std_normal_cdf(x);
  const double px = std_normal_cdf(x);
  const double py = std_normal_cdf(y);
  if (c == 1.0) return std::min(px, py);
  if (c == -1.0) return std::max(px + py - 1.0, 0.0);
  if (c == 0.0) return px * py;

  // Phi2 = Phi(x)Phi(y) + (1/2pi) int_0^{asin c} exp(-(x^2 + y^2 - 2xy sin t) / (2 cos^2 t)) dt.
  // The integrand is bounded by 1 and smooth up to t = +-pi/2.
  const double s2 = x * x + y * y;
  const double xy = 2.0 * x * y;
  const auto integrand = [s2, xy](double t) {
    const double cs = std::cos(t);
    const double cos2 = cs * cs;
    if (cos2 == 0.0) return 0.0;
    return std::exp(-(s2 - xy * std::sin(t)) / (2.0 * cos2));
  };
  const double integral = detail::integrate_adaptive(integrand, 0.0, std::asin(c), 1e-14);
  return std::clamp(px * py + integral / (2.0 * std::numbers::pi), 0.0, std::min(px, py));
}

double gaussian_copula_cdf(double u, double v, double c) {
  require_correlation(c);
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument("gaussian_copula_cdf: u, v must lie in [0, 1]");
  }
  if (u == 0.0 || v == 0.0) return 0.0;
  if (u == 1.0) return v;
  if (v == 1.0) return u;
  if (c == 1.0) return std::min(u, v);
  if (c == -1.0) return std::max(u + v - 1.0, 0.0);
  if (c == 0.0) return u * v;
  return bivariate_normal_cdf(std_normal_quantile(u), std_normal_quantile(v), c);
}

double gaussian_copula_density(double u, double v, double c) {
  if (!(std::abs(c) < 1.0)) throw std::invalid_argument("gaussian_copula_density: requires |c| < 1");
  const double x = std_normal_quantile(u);
  const double y = std_normal_quantile(v);
  const double one_minus = 1.0 - c * c;
  return std::exp(-(c * c * (x * x + y * y) - 2.0 * c * x * y) / (2.0 * one_minus)) / std::sqrt(one_minus);
}

CopulaGrid gaussian_grid(double c, std::size_t m) {
  require_correlation(c);
  if (m < 2) throw std::invalid_argument("gaussian_grid: resolution must be at least 2");
  const std::size_t n = m + 1;
  const double md = static_cast<double>(m);
  std::vector<double> cumulative(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double value = gaussian_copula_cdf(static_cast<double>(i) / md, static_cast<double>(j) / md, c);
      cumulative[i * n + j] = value;
      cumulative[j * n + i] = value;
    }
  }
  std::vector<double> density(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double mass = cumulative[(i + 1) * n + j + 1] - cumulative[i * n + j + 1] - cumulative[(i + 1) * n + j] +
                          cumulative[i * n + j];
      density[i * m + j] = std::max(mass, 0.0);
    }
  }
  return CopulaGrid(m, std::move(density), std::move(cumulative), 0, 1, 0.0);
}

long GaussianGridCache::key_of(double c) {
  require_correlation(c);
  return std::lround(c / kStep);
}

std::shared_ptr<const CopulaGrid> GaussianGridCache::get(double c, std::size_t m) {
  const auto key = std::make_pair(key_of(c), m);
  {
    std::shared_lock lock(mutex_);
    if (auto it = grids_.find(key); it != grids_.end()) return it->second;
  }
  // built outside the lock; a concurrent duplicate build yields the same grid
  auto grid = std::make_shared<const CopulaGrid>(gaussian_grid(static_cast<double>(key.first) * kStep, m));
  std::unique_lock lock(mutex_);
  return grids_.emplace(key, std::move(grid)).first->second;
}

std::size_t GaussianGridCache::size() const {
  std::shared_lock lock(mutex_);
  return grids_.size();
}

DifferenceGrid difference_map(const CopulaGrid& empirical, const CorrelationMatrix& corr, GaussianGridCache* cache,
                              unsigned threads) {
  const std::size_t k = corr.size();
  if (k < 2) throw std::invalid_argument("difference_map: correlation matrix needs at least two assets");
  if (empirical.pair_count() != corr.pair_count()) {
    throw std::invalid_argument("difference_map: grid averages " + std::to_string(empirical.pair_count()) +
                                " pairs but the correlation matrix has " + std::to_string(corr.pair_count()));
  }
  const std::size_t m = empirical.resolution();

  // multiplicity of each rounded correlation, in increasing key order
  std::map<long, std::size_t> multiplicity;
  for (double c : corr.upper_triangle()) ++multiplicity[GaussianGridCache::key_of(c)];
  std::vector<std::pair<long, std::size_t>> keys(multiplicity.begin(), multiplicity.end());

  GaussianGridCache local;
  GaussianGridCache& grids = cache ? *cache : local;
  std::vector<std::shared_ptr<const CopulaGrid>> resolved(keys.size());
  parallel_for(keys.size(), threads, [&](unsigned, std::size_t idx) {
    resolved[idx] = grids.get(static_cast<double>(keys[idx].first) * GaussianGridCache::kStep, m);
  });

  const double pairs = static_cast<double>(corr.pair_count());
  std::vector<double> gaussian(m * m, 0.0);
  for (std::size_t idx = 0; idx < keys.size(); ++idx) {
    const double weight = static_cast<double>(keys[idx].second) / pairs;
    const auto cells = resolved[idx]->densities();
    for (std::size_t cell = 0; cell < m * m; ++cell) gaussian[cell] += weight * cells[cell];
  }

  DifferenceGrid diff{m, std::vector<double>(m * m)};
  const auto observed = empirical.densities();
  for (std::size_t cell = 0; cell < m * m; ++cell) diff.values[cell] = observed[cell] - gaussian[cell];
  return diff;
}

void write_difference_csv(std::ostream& out, const DifferenceGrid& diff) {
  const std::size_t m = diff.resolution;
  out << "i,j,u_hi,v_hi,d_permille\n";
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      out << i + 1 << ',' << j + 1 << ',' << format_double(static_cast<double>(i + 1) / static_cast<double>(m)) << ','
          << format_double(static_cast<double>(j + 1) / static_cast<double>(m)) << ','
          << format_double(diff.at(i, j) * 1000.0) << '\n';
    }
  }
}

}  // namespace copdyn
