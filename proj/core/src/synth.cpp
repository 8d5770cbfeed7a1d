#include "copdyn/synth.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "copdyn/format.hpp"

namespace copdyn {

double NormalStream::uniform() {
  const double u01 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return 2.0 * u01 - 1.0;
}

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = uniform();
    v = uniform();
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

namespace {

std::vector<std::string> asset_names(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "S%03zu", i);
    names.emplace_back(buf);
  }
  return names;
}

void require_layout(const SynthSpec& spec) {
  if (spec.assets < 2) throw std::invalid_argument("synth: need at least two assets");
  if (spec.interval_minutes <= 0 || spec.interval_minutes > spec.calendar.session_minutes()) {
    throw std::invalid_argument("synth: interval must be positive and fit in a session");
  }
}

void require_equicorrelation(double c, std::size_t k) {
  if (!(std::abs(c) <= 1.0)) throw std::invalid_argument("synth: correlation must lie in [-1, 1]");
  if (1.0 + static_cast<double>(k - 1) * c < 0.0) {
    throw std::invalid_argument("synth: equicorrelation " + std::to_string(c) + " infeasible for " +
                                std::to_string(k) + " assets (needs c >= -1/(K-1))");
  }
}

// Fills columns [first, first + n) of a K x T row-major buffer.
void fill_equicorrelated(NormalStream& rng, double c, std::size_t k, std::size_t total, std::size_t first,
                         std::size_t n, std::vector<double>& out) {
  const double a = std::sqrt(1.0 - c);
  const double disc = std::max(0.0, 1.0 + static_cast<double>(k - 1) * c);
  const double b = (std::sqrt(disc) - a) / static_cast<double>(k);
  std::vector<double> e(k);
  for (std::size_t t = first; t < first + n; ++t) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      e[i] = rng.next();
      sum += e[i];
    }
    for (std::size_t i = 0; i < k; ++i) out[i * total + t] = a * e[i] + b * sum;
  }
}

}  // namespace

void layout_on_calendar(std::size_t length, int interval_minutes, const TradingCalendar& calendar, Date start,
                        std::vector<Timestamp>& timestamps, std::vector<Date>& sessions) {
  const auto steps = static_cast<std::size_t>(calendar.session_minutes() / interval_minutes);
  if (steps == 0) throw std::invalid_argument("layout_on_calendar: interval longer than the session");
  timestamps.clear();
  sessions.clear();
  Date day = calendar.first_trading_day_from(start);
  for (std::size_t t = 0; t < length; ++t) {
    if (t > 0 && t % steps == 0) day = calendar.next_trading_day(day);
    const auto slot = static_cast<long long>(t % steps);
    timestamps.push_back(calendar.session_open(day) + std::chrono::minutes{slot * interval_minutes});
    sessions.push_back(day);
  }
}

ReturnMatrix sample_panel(const SynthSpec& spec) {
  require_layout(spec);
  if (spec.length < 1) throw std::invalid_argument("synth: length must be at least 1");
  const std::size_t k = spec.assets;
  const std::size_t n = spec.length;
  NormalStream rng(spec.seed);
  std::vector<double> values(k * n);

  switch (spec.kind) {
    case SynthKind::gaussian:
      require_equicorrelation(spec.correlation, k);
      fill_equicorrelated(rng, spec.correlation, k, n, 0, n, values);
      break;
    case SynthKind::independent:
      for (std::size_t t = 0; t < n; ++t)
        for (std::size_t i = 0; i < k; ++i) values[i * n + t] = rng.next();
      break;
    case SynthKind::comonotone:
      for (std::size_t t = 0; t < n; ++t) {
        const double x = rng.next();
        for (std::size_t i = 0; i < k; ++i) values[i * n + t] = x;
      }
      break;
    case SynthKind::countermonotone:
      if (k != 2) throw std::invalid_argument("synth: countermonotone panels need exactly two assets");
      for (std::size_t t = 0; t < n; ++t) {
        const double x = rng.next();
        values[t] = x;
        values[n + t] = -x;
      }
      break;
  }

  std::vector<Timestamp> timestamps;
  std::vector<Date> sessions;
  layout_on_calendar(n, spec.interval_minutes, spec.calendar, spec.start, timestamps, sessions);
  return ReturnMatrix(asset_names(k), spec.interval_minutes, std::move(values), std::move(timestamps),
                      std::move(sessions));
}

ReturnMatrix sample_regime_panel(const SynthSpec& spec, std::span<const Regime> regimes) {
  require_layout(spec);
  if (regimes.empty()) throw std::invalid_argument("synth: no regimes given");
  const std::size_t k = spec.assets;
  std::size_t n = 0;
  for (const Regime& r : regimes) {
    require_equicorrelation(r.correlation, k);
    n += r.length;
  }
  if (n < 1) throw std::invalid_argument("synth: length must be at least 1");

  NormalStream rng(spec.seed);
  std::vector<double> values(k * n);
  std::size_t first = 0;
  for (const Regime& r : regimes) {
    fill_equicorrelated(rng, r.correlation, k, n, first, r.length, values);
    first += r.length;
  }
  std::vector<Timestamp> timestamps;
  std::vector<Date> sessions;
  layout_on_calendar(n, spec.interval_minutes, spec.calendar, spec.start, timestamps, sessions);
  return ReturnMatrix(asset_names(k), spec.interval_minutes, std::move(values), std::move(timestamps),
                      std::move(sessions));
}

std::pair<std::vector<double>, std::vector<double>> sample_bivariate_gaussian(double c, std::size_t n,
                                                                              std::uint64_t seed) {
  if (!(std::abs(c) <= 1.0)) throw std::invalid_argument("sample_bivariate_gaussian: correlation must lie in [-1, 1]");
  if (n < 1) throw std::invalid_argument("sample_bivariate_gaussian: need at least one draw");
  NormalStream rng(seed);
  const double s = std::sqrt(1.0 - c * c);
  std::vector<double> x(n), y(n);
  for (std::size_t t = 0; t < n; ++t) {
    x[t] = rng.next();
    const double z = rng.next();
    y[t] = c * x[t] + s * z;
  }
  return {std::move(x), std::move(y)};
}

void write_price_csv(std::ostream& out, const ReturnMatrix& returns, double scale, double initial_price) {
  if (!(scale > 0.0) || !(initial_price > 0.0)) {
    throw std::invalid_argument("write_price_csv: scale and initial price must be positive");
  }
  const std::size_t k = returns.asset_count();
  const std::size_t n = returns.length();
  const auto interval = std::chrono::minutes{returns.interval_minutes()};
  std::vector<double> price(k, initial_price);

  out << "timestamp,symbol,price\n";
  auto emit = [&](Timestamp ts) {
    const std::string stamp = format_timestamp(ts);
    for (std::size_t i = 0; i < k; ++i) out << stamp << ',' << returns.asset_ids()[i] << ',' << format_double(price[i]) << '\n';
  };
  for (std::size_t t = 0; t < n; ++t) {
    const bool new_session = t == 0 || returns.sessions()[t] != returns.sessions()[t - 1] ||
                             returns.timestamps()[t] != returns.timestamps()[t - 1] + interval;
    if (new_session) emit(returns.timestamps()[t]);
    for (std::size_t i = 0; i < k; ++i) {
      price[i] *= 1.0 + scale * returns.row(i)[t];
      if (!(price[i] > 0.0)) throw std::invalid_argument("write_price_csv: price path hit zero; lower the scale");
    }
    emit(returns.timestamps()[t] + interval);
  }
}

}  // namespace copdyn
