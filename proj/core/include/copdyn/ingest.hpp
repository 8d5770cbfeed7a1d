#pragma once

#include <cmath>
#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "copdyn/calendar.hpp"

namespace copdyn {

// Aligned price observations for K assets. prices is K x T row-major; a
// missing observation is stored as NaN (the gap marker).
struct PricePanel {
  std::vector<std::string> asset_ids;
  std::vector<Timestamp> timestamps;
  std::vector<double> prices;
  TradingCalendar calendar;
  // Rows dropped because they fell outside the calendar's sessions.
  std::size_t excluded_rows = 0;

  std::size_t asset_count() const noexcept { return asset_ids.size(); }
  std::size_t time_count() const noexcept { return timestamps.size(); }
  double price(std::size_t asset, std::size_t t) const { return prices[asset * time_count() + t]; }
};

inline bool is_gap(double price) { return std::isnan(price); }

// CSV with header `timestamp,symbol,price`, rows ordered by timestamp.
// Assets are ordered by symbol. Throws ParseError (with line number) on
// malformed rows, non-positive or non-finite prices, decreasing timestamps and
// duplicate (timestamp, symbol) rows.
PricePanel load_prices(std::istream& source, const TradingCalendar& calendar);

// Per-asset arithmetic returns on a common grid. Immutable once built; row(k)
// views are safe to read from any number of threads.
class ReturnMatrix {
 public:
  // returns is K x T row-major. timestamps hold the start of each return
  // interval and sessions the trading day it belongs to (nondecreasing).
  ReturnMatrix(std::vector<std::string> asset_ids, int interval_minutes, std::vector<double> returns,
               std::vector<Timestamp> timestamps, std::vector<Date> sessions);

  std::size_t asset_count() const noexcept { return asset_ids_.size(); }
  std::size_t length() const noexcept { return timestamps_.size(); }
  int interval_minutes() const noexcept { return interval_; }

  const std::vector<std::string>& asset_ids() const noexcept { return asset_ids_; }
  const std::vector<Timestamp>& timestamps() const noexcept { return timestamps_; }
  const std::vector<Date>& sessions() const noexcept { return sessions_; }
  std::span<const double> values() const noexcept { return returns_; }

  std::span<const double> row(std::size_t asset) const;

  Date period_start() const { return sessions_.front(); }
  Date period_end() const { return sessions_.back(); }

  // Columns [first, last).
  ReturnMatrix columns(std::size_t first, std::size_t last) const;

 private:
  std::vector<std::string> asset_ids_;
  int interval_;
  std::vector<double> returns_;
  std::vector<Timestamp> timestamps_;
  std::vector<Date> sessions_;
};

// Returns over consecutive interval_minutes steps from each session's open.
// Sessions yield floor(session_minutes / interval) returns when gap-free;
// overnight returns are never formed. An endpoint price is the last
// observation at or before the endpoint within the same session; if an asset
// has none, that return is dropped for every asset.
ReturnMatrix compute_returns(const PricePanel& panel, int interval_minutes);

struct PairView {
  std::span<const double> first;
  std::span<const double> second;
  std::span<const Timestamp> timestamps;
};

PairView pair_view(const ReturnMatrix& matrix, std::size_t i, std::size_t j);

}  // namespace copdyn
