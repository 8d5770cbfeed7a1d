// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "copdyn/copula.hpp"
#include "copdyn/gaussian.hpp"
#include "copdyn/synth.hpp"
#include "copdyn/taildep.hpp"
#include "oracle/oracle.hpp"

namespace fs = std::filesystem;
using namespace copdyn;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("copdyn_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Random series of length n: distinct normals, or heavy ties drawn from a
// handful of values.
std::vector<double> random_series(std::mt19937_64& rng, std::size_t n, bool ties) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> small(-2, 2);
  std::vector<double> out(n);
  for (double& x : out) x = ties ? small(rng) * 0.01 : normal(rng);
  return out;
}

// ---------------------------------------------------------------------------

Outcome brute_force_equivalence() {
  std::mt19937_64 rng(1);
  std::size_t mismatches = 0, nodes = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
    const bool ties = trial % 3 == 0;
    const auto x = random_series(rng, n, ties);
    const auto y = random_series(rng, n, trial % 4 == 0);
    const auto grid = empirical_copula_density(x, y, m);
    const auto cum = oracle::brute_cumulative(x, y, m);
    const auto den = oracle::brute_density(x, y, m);
    for (std::size_t i = 0; i <= m; ++i)
      for (std::size_t j = 0; j <= m; ++j, ++nodes) mismatches += grid.cumulative(i, j) != cum[i * (m + 1) + j];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j, ++nodes) mismatches += grid.density(i, j) != den[i * m + j];
    // the point evaluator agrees with the grid nodes as well
    for (std::size_t i = 1; i <= m; ++i) {
      const double u = static_cast<double>(i) / static_cast<double>(m);
      ++nodes;
      mismatches += empirical_copula_cumulative(x, y, u, u) != cum[i * (m + 1) + i];
    }
  }
  return {mismatches == 0, fmt("200 instances, %zu values compared, %zu mismatches", nodes, mismatches)};
}

Outcome gaussian_self_consistency() {
  SynthSpec spec;
  spec.assets = 10;
  spec.correlation = 0.5;
  spec.length = 100000;
  spec.seed = 2;
  const auto panel = sample_panel(spec);
  const std::size_t m = 50;
  const auto empirical = average_pairwise_density(panel, m);
  const auto corr = pearson_matrix(panel);
  GaussianGridCache cache;
  const auto diff = difference_map(empirical, corr, &cache);

  // Expected cell masses under the model; sigma is the binomial standard
  // error of a single pair's cell frequency.
  const double t = static_cast<double>(spec.length);
  const auto model = gaussian_grid(0.5, m);
  std::size_t beyond3 = 0, beyond5 = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double p = model.density(i, j);
      const double sigma = std::sqrt(p * (1.0 - p) / t);
      const double z = std::abs(diff.at(i, j)) / sigma;
      worst = std::max(worst, z);
      beyond3 += z > 3.0;
      beyond5 += z > 5.0;
    }
  }
  const double within = 1.0 - static_cast<double>(beyond3) / static_cast<double>(m * m);
  return {within >= 0.99 && beyond5 == 0,
          fmt("%zu cells, %.2f%% within 3 sigma (%zu outside), %zu beyond 5 sigma, max |z| %.2f", m * m,
              100.0 * within, beyond3, beyond5, worst)};
}

Outcome bivariate_normal_accuracy() {
  double worst_identity = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double c = -1.0 + 0.1 * k;
    const double expected = 0.25 + std::asin(c) / (2.0 * std::numbers::pi);
    worst_identity = std::max(worst_identity, std::abs(bivariate_normal_cdf(0.0, 0.0, c) - expected));
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-4.0, 4.0), corr(-0.99, 0.99);
  double worst_oracle = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double x = coord(rng), y = coord(rng), c = corr(rng);
    worst_oracle = std::max(worst_oracle, std::abs(bivariate_normal_cdf(x, y, c) - oracle::bvn_quadrature(x, y, c)));
  }
  return {worst_identity <= 1e-9 && worst_oracle <= 1e-6,
          fmt("arcsin identity max err %.2e (21 c), oracle max err %.2e (100 points)", worst_identity, worst_oracle)};
}

Outcome tail_dependence_oracles() {
  // m = 100 puts every alpha in the set on a grid node.
  const std::size_t m = 100;
  const double alphas[] = {0.02, 0.04, 0.1, 0.25};
  double worst = 0.0;
  for (double c : {0.0, 0.3, 0.5, 0.8}) {
    const auto grid = gaussian_grid(c, m);
    for (double a : alphas)
      worst = std::max(worst, std::abs(lower_tail(grid, a) - oracle::gaussian_copula_quadrature(a, a, c)));
  }

  // limits: comonotone sample and the independence copula
  std::mt19937_64 rng(4);
  const auto x = random_series(rng, 10000, false);
  const auto comonotone = empirical_copula_density(x, x, m);
  const auto independent = gaussian_grid(0.0, m);
  double worst_limit = 0.0;
  bool limits = true;
  for (double a : alphas) {
    const double lc = lower_tail(comonotone, a), uc = upper_tail(comonotone, a);
    limits &= std::abs(lc - a) <= comonotone.slack() && std::abs(uc - a) <= comonotone.slack();
    worst_limit = std::max({worst_limit, std::abs(lc - a), std::abs(uc - a)});
    const double li = lower_tail(independent, a);
    limits &= std::abs(li - a * a) <= 1e-15;
    worst_limit = std::max(worst_limit, std::abs(li - a * a));
  }
  return {worst <= 1e-6 && limits,
          fmt("16 (alpha, c) points max err %.2e at m=%zu; limits max err %.2e", worst, m, worst_limit)};
}

Outcome frechet_and_marginals() {
  std::mt19937_64 rng(5);
  std::size_t violations = 0, tie_pairs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(20, 2000)(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(2, 40)(rng);
    auto x = random_series(rng, n, false);
    auto y = random_series(rng, n, false);
    if (trial % 2 == 0) {
      // half of the observations are zero returns
      ++tie_pairs;
      std::bernoulli_distribution zero(0.5);
      for (double& v : x) v = zero(rng) ? 0.0 : v;
      for (double& v : y) v = zero(rng) ? 0.0 : v;
    }
    const auto g = empirical_copula_density(x, y, m);
    const double slack = std::max(1.0 / static_cast<double>(n), g.slack()) + 1e-12;
    const double md = static_cast<double>(m);
    double total = 0.0;
    for (double d : g.densities()) {
      total += d;
      violations += d < 0.0;
    }
    violations += std::abs(total - 1.0) > 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i <= m; ++i) {
      for (std::size_t j = 0; j <= m; ++j) {
        const double u = i / md, v = j / md, c = g.cumulative(i, j);
        violations += c < std::max(u + v - 1.0, 0.0) - slack;
        violations += c > std::min(u, v) + slack;
        if (i > 0) violations += c < g.cumulative(i - 1, j);
        if (j > 0) violations += c < g.cumulative(i, j - 1);
      }
      // marginal uniformity: j/m <= Cop(1, j/m) <= j/m + slack
      violations += g.cumulative(m, i) < i / md - 1e-12 || g.cumulative(m, i) > i / md + slack;
      violations += g.cumulative(i, m) < i / md - 1e-12 || g.cumulative(i, m) > i / md + slack;
    }
    violations += g.cumulative(0, m) != 0.0 || g.cumulative(m, 0) != 0.0 || g.cumulative(m, m) != 1.0;
  }
  return {violations == 0, fmt("1000 pairs (%zu with 50%% zero returns), %zu violations", tie_pairs, violations)};
}

Outcome rank_invariance() {
  std::mt19937_64 rng(6);
  std::size_t differing = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(50, 5000)(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(2, 50)(rng);
    const auto x = random_series(rng, n, trial % 5 == 0);
    const auto y = random_series(rng, n, trial % 7 == 0);
    const auto base = empirical_copula_density(x, y, m);
    auto transformed = [](std::vector<double> s, bool cubic) {
      for (double& v : s) v = cubic ? v * v * v + v : std::exp(v);
      return s;
    };
    const auto same = [&](const CopulaGrid& g) {
      return std::ranges::equal(g.densities(), base.densities()) &&
             std::ranges::equal(g.cumulatives(), base.cumulatives());
    };
    differing += !same(empirical_copula_density(transformed(x, false), y, m));
    differing += !same(empirical_copula_density(x, transformed(y, false), m));
    differing += !same(empirical_copula_density(transformed(x, true), y, m));
    differing += !same(empirical_copula_density(x, transformed(y, true), m));
    differing += !same(empirical_copula_density(transformed(x, true), transformed(y, false), m));
  }
  return {differing == 0, fmt("100 pairs x 5 transforms, %zu grids differ", differing)};
}

struct RelationRow {
  std::string start;
  double mean_corr, alpha, lower, upper, gauss;
};

std::vector<RelationRow> read_relation(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<RelationRow> rows;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string f[7];
    for (auto& s : f) std::getline(ss, s, ',');
    rows.push_back({f[0], std::stod(f[2]), std::stod(f[3]), std::stod(f[4]), std::stod(f[5]), std::stod(f[6])});
  }
  return rows;
}

Outcome dynamics_pipeline() {
  const fs::path dir = scratch("dynamics");
  std::ostringstream log;
  cli::RunConfig synth;
  synth.command = "synth";
  synth.calendar = COPDYN_TEST_DATA_DIR "/nyse_2007_2010.cal";
  synth.dt = 30;
  synth.assets = 30;
  synth.days = 1008;  // every trading day of 2007-2010
  synth.start = "2007-01-01";
  synth.corr = 0.2;
  synth.switch_day = 500;
  synth.corr_after = 0.7;
  synth.seed = 7;
  synth.out = (dir / "data").string();
  if (int rc = cli::run(synth, log); rc != cli::kOk) return {false, "synth failed: " + log.str()};

  cli::RunConfig dyn;
  dyn.command = "dynamics";
  dyn.input = (dir / "data" / "prices.csv").string();
  dyn.calendar = synth.calendar;
  dyn.dt = 30;
  dyn.window_days = 10;
  dyn.out = (dir / "dyn").string();
  if (int rc = cli::run(dyn, log); rc != cli::kOk) return {false, "dynamics failed: " + log.str()};

  const auto rows = read_relation(dir / "dyn" / "relation.csv");
  const std::size_t per_window = dyn.alphas.size();
  const std::size_t windows = rows.size() / per_window;
  if (windows != 100) return {false, fmt("expected 100 windows, got %zu", windows)};

  // windows 0..49 precede the switch, 50..99 follow it
  auto at = [&](std::size_t w, double alpha) {
    for (std::size_t r = w * per_window; r < (w + 1) * per_window; ++r)
      if (rows[r].alpha == alpha) return rows[r];
    return rows[w * per_window];
  };
  const auto before = at(49, 0.1), after = at(50, 0.1);
  const double d_corr = after.mean_corr - before.mean_corr;
  const double d_tail = after.lower - before.lower;
  double corr_lo = 0, corr_hi = 0, tail_lo = 0, tail_hi = 0;
  for (std::size_t w = 0; w < 50; ++w) {
    corr_lo += at(w, 0.1).mean_corr / 50;
    tail_lo += at(w, 0.1).lower / 50;
    corr_hi += at(w + 50, 0.1).mean_corr / 50;
    tail_hi += at(w + 50, 0.1).lower / 50;
  }
  const bool shift = d_corr > 0 && d_tail > 0 && corr_hi > corr_lo && tail_hi > tail_lo;

  // Band: binomial error of a single pair's frequency at the window length,
  // plus two samples of bin discreteness.
  const double t = 10.0 * 13.0;
  std::size_t outside = 0;
  double worst = 0.0;
  for (const auto& r : rows) {
    const double p = r.gauss;
    const double band = 3.0 * std::sqrt(p * (1.0 - p) / t) + 2.0 / t;
    const double dev = std::abs(r.lower - p);
    worst = std::max(worst, dev / band);
    outside += dev > band;
  }
  fs::remove_all(dir);
  return {shift && outside == 0,
          fmt("switch window: mean corr %+.3f, lambda_l(0.1) %+.4f; halves %.3f->%.3f / %.4f->%.4f; "
              "%zu/%zu points outside band (worst %.2f of band)",
              d_corr, d_tail, corr_lo, corr_hi, tail_lo, tail_hi, outside, rows.size(), worst)};
}

Outcome determinism_and_scaling() {
  const fs::path dir = scratch("determinism");
  std::ostringstream log;
  cli::RunConfig synth;
  synth.command = "synth";
  synth.dt = 30;
  synth.assets = 100;
  synth.days = 40;
  synth.corr = 0.3;
  synth.seed = 8;
  synth.out = (dir / "data").string();
  if (int rc = cli::run(synth, log); rc != cli::kOk) return {false, "synth failed: " + log.str()};

  std::vector<std::string> outputs;
  for (unsigned threads : {1u, 4u, 8u}) {
    cli::RunConfig dyn;
    dyn.command = "dynamics";
    dyn.input = (dir / "data" / "prices.csv").string();
    dyn.dt = 30;
    dyn.window_days = 20;
    dyn.threads = threads;
    dyn.out = (dir / ("t" + std::to_string(threads))).string();
    if (int rc = cli::run(dyn, log); rc != cli::kOk) return {false, "dynamics failed: " + log.str()};
    std::string all;
    for (const auto& f : {"relation.csv", "windows/window_000.csv", "windows/window_001.csv"})
      all += slurp(fs::path(dyn.out) / f);
    outputs.push_back(all);
  }
  const bool identical = outputs[0] == outputs[1] && outputs[0] == outputs[2];

  SynthSpec spec;
  spec.assets = 100;
  spec.length = 3000;
  spec.correlation = 0.3;
  spec.seed = 9;
  const auto panel = sample_panel(spec);
  const auto t0 = std::chrono::steady_clock::now();
  const auto g1 = average_pairwise_density(panel, 50, 4);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto g8 = average_pairwise_density(panel, 50, 8);
  const bool same_grid = std::ranges::equal(g1.densities(), g8.densities());
  fs::remove_all(dir);
  return {identical && same_grid && secs < 60.0,
          fmt("dynamics outputs %s for 1/4/8 threads; 4950-pair average in %.2f s on %u hardware threads",
              identical && same_grid ? "identical" : "DIFFER", secs, std::thread::hardware_concurrency())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"AC1 brute-force equivalence", 5.0, brute_force_equivalence},
      {"AC2 gaussian self-consistency", 120.0, gaussian_self_consistency},
      {"AC3 bivariate normal accuracy", 30.0, bivariate_normal_accuracy},
      {"AC4 tail-dependence oracles", 0.0, tail_dependence_oracles},
      {"AC5 frechet bounds and marginals", 0.0, frechet_and_marginals},
      {"AC6 rank invariance", 0.0, rank_invariance},
      {"AC7 dynamics pipeline", 300.0, dynamics_pipeline},
      {"AC8 determinism and scaling", 0.0, determinism_and_scaling},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      out.pass = false;
      out.detail += fmt(" [over %.0f s limit]", c.limit_seconds);
    }
    std::printf("%s %-34s %8.2f s  %s\n", out.pass ? "PASS" : "FAIL", c.name, secs, out.detail.c_str());
    std::fflush(stdout);
    failures += !out.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
