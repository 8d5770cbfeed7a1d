#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "copdyn/taildep.hpp"

namespace copdyn::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageError = 2,
  kInputError = 3,
  kNumericalError = 4,
  kOutputError = 5,
};

struct RunConfig {
  std::string command;  // copula | diff | taildep | dynamics | synth
  std::string input;
  std::string calendar;
  int dt = 60;
  std::size_t grid = 50;
  std::vector<double> alphas = {0.02, 0.04, 0.1, 0.25};
  std::size_t window_days = 10;
  std::string out = ".";
  std::uint64_t seed = 0;
  unsigned threads = 0;
  UpperTailConvention convention = UpperTailConvention::literal;
  bool permille = false;

  // synth
  std::string kind = "gaussian";
  double corr = 0.5;
  std::size_t assets = 10;
  std::size_t days = 40;
  std::string start = "2007-01-03";
  std::optional<std::size_t> switch_day;
  double corr_after = 0.5;
};

// Checks the ranges the tool accepts; returns an error message or nothing.
std::optional<std::string> validate(const RunConfig& config);

// Executes one command. Diagnostics go to `log`. On failure every file this
// run created is removed again.
int run(const RunConfig& config, std::ostream& log);

// Parses argv (CLI11) and runs. Usage errors return kUsageError before any
// file is touched.
int main(int argc, char** argv);

// Argument vector that reproduces `config`, as recorded in the manifest.
std::vector<std::string> reproduce_args(const RunConfig& config);

}  // namespace copdyn::cli
