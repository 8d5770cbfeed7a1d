#include "copdyn/taildep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "copdyn/errors.hpp"
#include "copdyn/format.hpp"
#include "copdyn/gaussian.hpp"
#include "copdyn/parallel.hpp"

namespace copdyn {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw std::invalid_argument("tail quantile alpha must lie in (0, 0.5]");
}

}  // namespace

double lower_tail(const CopulaGrid& grid, double alpha) {
  require_alpha(alpha);
  return grid.cumulative_at(alpha, alpha);
}

double upper_tail(const CopulaGrid& grid, double alpha, UpperTailConvention convention) {
  require_alpha(alpha);
  const double corner = grid.cumulative_at(1.0 - alpha, 1.0 - alpha);
  if (convention == UpperTailConvention::survival) return std::max(2.0 * alpha - 1.0 + corner, 0.0);
  return 1.0 - corner;
}

double upper_tail_survival(const CopulaGrid& grid, double alpha) {
  return upper_tail(grid, alpha, UpperTailConvention::survival);
}

TailCurve tail_curve(const CopulaGrid& grid, std::span<const double> alphas, UpperTailConvention convention) {
  TailCurve curve;
  for (double a : alphas) {
    curve.alphas.push_back(a);
    curve.lower.push_back(lower_tail(grid, a));
    curve.upper.push_back(upper_tail(grid, a, convention));
  }
  return curve;
}

CorrelationMatrix pearson_matrix(const ReturnMatrix& matrix, unsigned threads) {
  const std::size_t k = matrix.asset_count();
  const std::size_t n = matrix.length();
  if (n < 2) throw std::invalid_argument("pearson_matrix: need at least two observations");

  // centred rows scaled to unit norm, so each coefficient is a dot product
  std::vector<double> z(k * n);
  for (std::size_t a = 0; a < k; ++a) {
    const auto r = matrix.row(a);
    double mean = 0.0;
    for (double x : r) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : r) ss += (x - mean) * (x - mean);
    if (!(ss > 0.0)) {
      throw NumericalError("pearson_matrix: asset '" + matrix.asset_ids()[a] + "' has zero variance");
    }
    const double scale = 1.0 / std::sqrt(ss);
    for (std::size_t t = 0; t < n; ++t) z[a * n + t] = (r[t] - mean) * scale;
  }

  std::vector<double> values(k * k, 0.0);
  parallel_for(k, threads, [&](unsigned, std::size_t a) {
    values[a * k + a] = 1.0;
    for (std::size_t b = a + 1; b < k; ++b) {
      double dot = 0.0;
      for (std::size_t t = 0; t < n; ++t) dot += z[a * n + t] * z[b * n + t];
      values[a * k + b] = std::clamp(dot, -1.0, 1.0);
    }
  });
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) values[b * k + a] = values[a * k + b];
  return CorrelationMatrix(k, std::move(values));
}

double mean_correlation(const CorrelationMatrix& corr) {
  if (corr.size() < 2) throw std::invalid_argument("mean_correlation: need at least two assets");
  double sum = 0.0;
  for (double c : corr.upper_triangle()) sum += c;
  return sum / static_cast<double>(corr.pair_count());
}

double average_gaussian_copula(const CorrelationMatrix& corr, double u, double v, unsigned threads) {
  if (corr.size() < 2) throw std::invalid_argument("average_gaussian_copula: need at least two assets");
  std::vector<double> coeffs = corr.upper_triangle();
  std::sort(coeffs.begin(), coeffs.end());
  std::vector<std::pair<double, std::size_t>> groups;
  for (double c : coeffs) {
    if (!groups.empty() && groups.back().first == c) {
      ++groups.back().second;
    } else {
      groups.emplace_back(c, 1);
    }
  }
  std::vector<double> values(groups.size());
  parallel_for(groups.size(), threads,
               [&](unsigned, std::size_t g) { values[g] = gaussian_copula_cdf(u, v, groups[g].first); });

  const double pairs = static_cast<double>(coeffs.size());
  double mean = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    mean += (static_cast<double>(groups[g].second) / pairs) * values[g];
  }
  return mean;
}

double average_gaussian_tail(const CorrelationMatrix& corr, double alpha, unsigned threads) {
  require_alpha(alpha);
  return average_gaussian_copula(corr, alpha, alpha, threads);
}

TailCurve gaussian_tail_curve(const CorrelationMatrix& corr, std::span<const double> alphas,
                              UpperTailConvention convention, unsigned threads) {
  TailCurve curve;
  for (double a : alphas) {
    curve.alphas.push_back(a);
    curve.lower.push_back(average_gaussian_tail(corr, a, threads));
    const double corner = average_gaussian_copula(corr, 1.0 - a, 1.0 - a, threads);
    curve.upper.push_back(convention == UpperTailConvention::survival ? std::max(2.0 * a - 1.0 + corner, 0.0)
                                                                      : 1.0 - corner);
  }
  return curve;
}

std::vector<ReturnMatrix> partition_windows(const ReturnMatrix& matrix, std::size_t window_days) {
  if (window_days < 1) throw std::invalid_argument("partition_windows: window must span at least one day");
  const auto& sessions = matrix.sessions();

  // first column of every session
  std::vector<std::size_t> day_starts;
  for (std::size_t t = 0; t < sessions.size(); ++t) {
    if (t == 0 || sessions[t] != sessions[t - 1]) day_starts.push_back(t);
  }
  const std::size_t windows = day_starts.size() / window_days;
  if (windows == 0) {
    throw std::invalid_argument("partition_windows: " + std::to_string(day_starts.size()) +
                                " trading days is shorter than one window of " + std::to_string(window_days));
  }
  day_starts.push_back(sessions.size());

  std::vector<ReturnMatrix> out;
  out.reserve(windows);
  for (std::size_t w = 0; w < windows; ++w) {
    out.push_back(matrix.columns(day_starts[w * window_days], day_starts[(w + 1) * window_days]));
  }
  return out;
}

WindowReport window_report(const ReturnMatrix& window, const WindowOptions& options) {
  if (window.asset_count() < 2) throw std::invalid_argument("window_report: need at least two assets");
  CopulaGrid grid = average_pairwise_density(window, options.resolution, options.threads);
  const CorrelationMatrix corr = pearson_matrix(window, options.threads);
  WindowReport report{window.period_start(),
                      window.period_end(),
                      mean_correlation(corr),
                      tail_curve(grid, options.alphas, options.convention),
                      gaussian_tail_curve(corr, options.alphas, options.convention, options.threads),
                      window.length(),
                      std::move(grid)};
  return report;
}

std::vector<WindowReport> run_dynamics(const ReturnMatrix& matrix, std::size_t window_days,
                                       const WindowOptions& options) {
  std::vector<WindowReport> reports;
  for (const ReturnMatrix& window : partition_windows(matrix, window_days)) {
    reports.push_back(window_report(window, options));
  }
  return reports;
}

void write_relation_csv(std::ostream& out, std::span<const WindowReport> reports) {
  out << "window_start,window_end,mean_corr,alpha,lambda_lower,lambda_upper,lambda_gauss\n";
  for (const WindowReport& r : reports) {
    for (std::size_t a = 0; a < r.tail.alphas.size(); ++a) {
      out << format_date(r.window_start) << ',' << format_date(r.window_end) << ','
          << format_double(r.mean_correlation) << ',' << format_double(r.tail.alphas[a]) << ','
          << format_double(r.tail.lower[a]) << ',' << format_double(r.tail.upper[a]) << ','
          << format_double(r.gaussian_tail.lower[a]) << '\n';
    }
  }
}

void write_tail_curve_csv(std::ostream& out, const TailCurve& empirical, const TailCurve& gaussian) {
  out << "alpha,lambda_lower,lambda_upper,lambda_gauss_lower,lambda_gauss_upper\n";
  for (std::size_t a = 0; a < empirical.alphas.size(); ++a) {
    out << format_double(empirical.alphas[a]) << ',' << format_double(empirical.lower[a]) << ','
        << format_double(empirical.upper[a]) << ',' << format_double(gaussian.lower[a]) << ','
        << format_double(gaussian.upper[a]) << '\n';
  }
}

}  // namespace copdyn
