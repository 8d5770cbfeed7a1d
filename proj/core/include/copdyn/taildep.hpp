#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "copdyn/copula.hpp"
#include "copdyn/correlation.hpp"
#include "copdyn/ingest.hpp"

namespace copdyn {

// How upper_tail reads the copula.
//   literal:  1 - Cop(1-a, 1-a), the probability that at least one of the
//             two returns exceeds its (1-a)-quantile.
//   survival: 2a - 1 + Cop(1-a, 1-a), the probability that both do.
enum class UpperTailConvention { literal, survival };

// Cop(a, a) read from the cumulative grid (bilinear between nodes).
// a must lie in (0, 0.5].
double lower_tail(const CopulaGrid& grid, double alpha);
double upper_tail(const CopulaGrid& grid, double alpha,
                  UpperTailConvention convention = UpperTailConvention::literal);
double upper_tail_survival(const CopulaGrid& grid, double alpha);

struct TailCurve {
  std::vector<double> alphas;
  std::vector<double> lower;
  std::vector<double> upper;
};

TailCurve tail_curve(const CopulaGrid& grid, std::span<const double> alphas,
                     UpperTailConvention convention = UpperTailConvention::literal);

// Sample Pearson coefficients between rows. Throws NumericalError naming the
// first asset with zero variance.
CorrelationMatrix pearson_matrix(const ReturnMatrix& matrix, unsigned threads = 0);

double mean_correlation(const CorrelationMatrix& corr);

// Mean over i < j of gaussian_copula_cdf(u, v, C_ij). Identical
// coefficients are evaluated once and weighted by their multiplicity, so a
// constant matrix reproduces the single-pair value exactly.
double average_gaussian_copula(const CorrelationMatrix& corr, double u, double v, unsigned threads = 0);

// Mean over pairs of Cop_C_ij(a, a), the Gaussian-implied tail dependence
// (equal for the lower and the upper tail).
double average_gaussian_tail(const CorrelationMatrix& corr, double alpha, unsigned threads = 0);

// Gaussian counterpart of tail_curve: lower = average_gaussian_tail, upper
// read from the averaged Gaussian copula under the same convention.
TailCurve gaussian_tail_curve(const CorrelationMatrix& corr, std::span<const double> alphas,
                              UpperTailConvention convention = UpperTailConvention::literal, unsigned threads = 0);

// Consecutive non-overlapping windows of window_days trading sessions; a
// trailing partial window is dropped.
std::vector<ReturnMatrix> partition_windows(const ReturnMatrix& matrix, std::size_t window_days);

struct WindowReport {
  Date window_start;
  Date window_end;
  double mean_correlation = 0.0;
  TailCurve tail;
  TailCurve gaussian_tail;
  std::size_t sample_count = 0;
  CopulaGrid grid;
};

struct WindowOptions {
  std::size_t resolution = 50;
  std::vector<double> alphas = {0.02, 0.04, 0.1, 0.25};
  UpperTailConvention convention = UpperTailConvention::literal;
  unsigned threads = 0;
};

WindowReport window_report(const ReturnMatrix& window, const WindowOptions& options);

// window_report for every window of partition_windows, in chronological order.
std::vector<WindowReport> run_dynamics(const ReturnMatrix& matrix, std::size_t window_days,
                                       const WindowOptions& options);

// `window_start,window_end,mean_corr,alpha,lambda_lower,lambda_upper,lambda_gauss`,
// one row per (window, alpha).
void write_relation_csv(std::ostream& out, std::span<const WindowReport> reports);

// `alpha,lambda_lower,lambda_upper,lambda_gauss_lower,lambda_gauss_upper`.
void write_tail_curve_csv(std::ostream& out, const TailCurve& empirical, const TailCurve& gaussian);

}  // namespace copdyn
