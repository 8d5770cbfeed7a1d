#include "copdyn/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <stdexcept>
#include <string_view>

#include "copdyn/errors.hpp"

namespace copdyn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Row {
  Timestamp ts;
  std::string symbol;
  double price;
  std::size_t line;
};

}  // namespace

PricePanel load_prices(std::istream& source, const TradingCalendar& calendar) {
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!header_seen && std::getline(source, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.empty()) continue;
    if (line != "timestamp,symbol,price") {
      throw ParseError("expected header 'timestamp,symbol,price'", line_no);
    }
    header_seen = true;
  }
  if (!header_seen) throw ParseError("empty price file");

  PricePanel panel;
  panel.calendar = calendar;
  std::vector<Row> rows;
  Timestamp previous = Timestamp::min();
  while (std::getline(source, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw ParseError("expected 3 fields", line_no);
    }
    Row row;
    row.line = line_no;
    try {
      row.ts = parse_timestamp(trim(line.substr(0, c1)));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    row.symbol = std::string(trim(line.substr(c1 + 1, c2 - c1 - 1)));
    if (row.symbol.empty()) throw ParseError("empty symbol", line_no);

    const std::string_view price_text = trim(line.substr(c2 + 1));
    const auto [ptr, ec] = std::from_chars(price_text.data(), price_text.data() + price_text.size(), row.price);
    if (ec != std::errc{} || ptr != price_text.data() + price_text.size()) {
      throw ParseError("invalid price '" + std::string(price_text) + "'", line_no);
    }
    if (!std::isfinite(row.price) || row.price <= 0.0) {
      throw ParseError("price must be positive and finite, got '" + std::string(price_text) + "'", line_no);
    }
    if (row.ts < previous) throw ParseError("timestamps out of order", line_no);
    previous = row.ts;

    if (!calendar.in_session(row.ts)) {
      ++panel.excluded_rows;
      continue;
    }
    rows.push_back(std::move(row));
  }

  std::map<std::string, std::size_t> symbol_index;
  for (const Row& r : rows) symbol_index.emplace(r.symbol, 0);
  for (auto& [symbol, index] : symbol_index) {
    index = panel.asset_ids.size();
    panel.asset_ids.push_back(symbol);
  }
  for (const Row& r : rows) {
    if (panel.timestamps.empty() || panel.timestamps.back() != r.ts) panel.timestamps.push_back(r.ts);
  }

  const std::size_t k = panel.asset_ids.size();
  const std::size_t t_count = panel.timestamps.size();
  panel.prices.assign(k * t_count, std::numeric_limits<double>::quiet_NaN());
  std::size_t t = 0;
  for (const Row& r : rows) {
    while (panel.timestamps[t] != r.ts) ++t;
    double& slot = panel.prices[symbol_index.at(r.symbol) * t_count + t];
    if (!is_gap(slot)) {
      throw ParseError("duplicate row for " + r.symbol + " at " + format_timestamp(r.ts), r.line);
    }
    slot = r.price;
  }
  return panel;
}

ReturnMatrix::ReturnMatrix(std::vector<std::string> asset_ids, int interval_minutes, std::vector<double> returns,
                           std::vector<Timestamp> timestamps, std::vector<Date> sessions)
    : asset_ids_(std::move(asset_ids)),
      interval_(interval_minutes),
      returns_(std::move(returns)),
      timestamps_(std::move(timestamps)),
      sessions_(std::move(sessions)) {
  if (asset_ids_.empty()) throw std::invalid_argument("ReturnMatrix: no assets");
  if (timestamps_.empty()) throw std::invalid_argument("ReturnMatrix: length must be at least 1");
  if (interval_ <= 0) throw std::invalid_argument("ReturnMatrix: interval must be positive");
  if (sessions_.size() != timestamps_.size() || returns_.size() != asset_ids_.size() * timestamps_.size()) {
    throw std::invalid_argument("ReturnMatrix: inconsistent dimensions");
  }
  if (!std::is_sorted(sessions_.begin(), sessions_.end())) {
    throw std::invalid_argument("ReturnMatrix: sessions must be nondecreasing");
  }
}

std::span<const double> ReturnMatrix::row(std::size_t asset) const {
  if (asset >= asset_count()) throw std::out_of_range("ReturnMatrix::row: asset index out of range");
  return std::span<const double>(returns_).subspan(asset * length(), length());
}

ReturnMatrix ReturnMatrix::columns(std::size_t first, std::size_t last) const {
  if (first >= last || last > length()) throw std::out_of_range("ReturnMatrix::columns: bad column range");
  const std::size_t n = last - first;
  std::vector<double> values;
  values.reserve(asset_count() * n);
  for (std::size_t k = 0; k < asset_count(); ++k) {
    const auto r = row(k).subspan(first, n);
    values.insert(values.end(), r.begin(), r.end());
  }
  return ReturnMatrix(asset_ids_, interval_, std::move(values),
                      {timestamps_.begin() + first, timestamps_.begin() + last},
                      {sessions_.begin() + first, sessions_.begin() + last});
}

ReturnMatrix compute_returns(const PricePanel& panel, int interval_minutes) {
  using std::chrono::minutes;
  if (panel.asset_count() == 0 || panel.time_count() == 0) {
    throw std::invalid_argument("compute_returns: empty price panel");
  }
  if (interval_minutes <= 0) throw std::invalid_argument("compute_returns: interval must be positive");
  const int session = panel.calendar.session_minutes();
  if (interval_minutes > session) {
    throw std::invalid_argument("compute_returns: interval of " + std::to_string(interval_minutes) +
                                " min exceeds the " + std::to_string(session) + " min session");
  }
  const std::size_t steps = static_cast<std::size_t>(session / interval_minutes);
  const std::size_t k_assets = panel.asset_count();
  const std::size_t t_count = panel.time_count();

  std::vector<std::vector<double>> rows(k_assets);
  std::vector<Timestamp> starts;
  std::vector<Date> sessions;
  std::vector<double> endpoint(k_assets * (steps + 1));

  std::size_t begin = 0;
  while (begin < t_count) {
    const Date day = day_of(panel.timestamps[begin]);
    std::size_t end = begin;
    while (end < t_count && day_of(panel.timestamps[end]) == day) ++end;

    const Timestamp open = panel.calendar.session_open(day);
    for (std::size_t k = 0; k < k_assets; ++k) {
      // previous-tick price at each grid endpoint, restricted to this session
      std::size_t t = begin;
      double last = std::numeric_limits<double>::quiet_NaN();
      for (std::size_t s = 0; s <= steps; ++s) {
        const Timestamp edge = open + minutes{static_cast<long long>(s) * interval_minutes};
        while (t < end && panel.timestamps[t] <= edge) {
          const double p = panel.price(k, t);
          if (!is_gap(p)) last = p;
          ++t;
        }
        endpoint[k * (steps + 1) + s] = last;
      }
    }

    for (std::size_t s = 1; s <= steps; ++s) {
      bool complete = true;
      for (std::size_t k = 0; k < k_assets && complete; ++k) {
        complete = !is_gap(endpoint[k * (steps + 1) + s - 1]) && !is_gap(endpoint[k * (steps + 1) + s]);
      }
      if (!complete) continue;
      for (std::size_t k = 0; k < k_assets; ++k) {
        const double p0 = endpoint[k * (steps + 1) + s - 1];
        const double p1 = endpoint[k * (steps + 1) + s];
        rows[k].push_back((p1 - p0) / p0);
      }
      starts.push_back(open + minutes{static_cast<long long>(s - 1) * interval_minutes});
      sessions.push_back(day);
    }
    begin = end;
  }

  if (starts.empty()) throw NumericalError("compute_returns: no complete return interval in the panel");

  std::vector<double> values;
  values.reserve(k_assets * starts.size());
  for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
  return ReturnMatrix(panel.asset_ids, interval_minutes, std::move(values), std::move(starts), std::move(sessions));
}

PairView pair_view(const ReturnMatrix& matrix, std::size_t i, std::size_t j) {
  if (i >= matrix.asset_count() || j >= matrix.asset_count()) {
    throw std::out_of_range("pair_view: asset index out of range");
  }
  if (i == j) throw std::invalid_argument("pair_view: a pair needs two distinct assets");
  return PairView{matrix.row(i), matrix.row(j), matrix.timestamps()};
}

}  // namespace copdyn
