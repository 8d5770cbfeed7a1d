#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "copdyn/calendar.hpp"
#include "copdyn/ingest.hpp"

namespace copdyn {

// Standard normal variates from std::mt19937_64 via the Marsaglia polar
// method. Both pieces are fully specified, so a seed pins the stream on every
// conforming platform (std::normal_distribution is implementation defined).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  double uniform();  // (-1, 1), 53 random bits

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class SynthKind { gaussian, independent, comonotone, countermonotone };

struct SynthSpec {
  SynthKind kind = SynthKind::gaussian;
  double correlation = 0.0;  // gaussian only
  std::size_t assets = 2;
  std::size_t length = 1;
  std::uint64_t seed = 0;
  // Returns are laid out on consecutive session slots of this calendar.
  int interval_minutes = 30;
  TradingCalendar calendar{};
  Date start = Date{std::chrono::year{2007} / 1 / 3};
};

// K x T panel of standard-normal returns with the dependence of spec.kind.
// gaussian(c): x_k = a e_k + b sum_j e_j, equicorrelated at exactly c;
// requires c >= -1/(K-1). comonotone: identical rows. countermonotone:
// K = 2, second row is the negated first.
ReturnMatrix sample_panel(const SynthSpec& spec);

// A gaussian panel whose equicorrelation changes between consecutive regimes;
// spec.length and spec.correlation are ignored.
struct Regime {
  std::size_t length;
  double correlation;
};
ReturnMatrix sample_regime_panel(const SynthSpec& spec, std::span<const Regime> regimes);

// n draws of a standard bivariate normal with correlation c,
// y = c x + sqrt(1 - c^2) z.
std::pair<std::vector<double>, std::vector<double>> sample_bivariate_gaussian(double c, std::size_t n,
                                                                              std::uint64_t seed);

// Session-slot layout used by the samplers: slot t sits in trading day
// t / steps at open + (t % steps) * interval, steps = floor(session / interval).
void layout_on_calendar(std::size_t length, int interval_minutes, const TradingCalendar& calendar, Date start,
                        std::vector<Timestamp>& timestamps, std::vector<Date>& sessions);

// Writes a price CSV (`timestamp,symbol,price`) whose interval returns are
// scale * returns. Each session opens at the previous close. Loading it and
// calling compute_returns with the same interval and calendar recovers the
// returns up to rounding, provided every session is complete.
void write_price_csv(std::ostream& out, const ReturnMatrix& returns, double scale = 0.002,
                     double initial_price = 100.0);

}  // namespace copdyn
