#pragma once

#include <chrono>
#include <cstdint>
#include <istream>
#include <set>
#include <string>
#include <string_view>

namespace copdyn {

using Date = std::chrono::sys_days;
using Timestamp = std::chrono::sys_seconds;

// "YYYY-MM-DD". Throws ParseError on anything else.
Date parse_date(std::string_view text);
std::string format_date(Date date);

// "YYYY-MM-DDTHH:MM:SS" (a space is accepted in place of 'T'). Timestamps are
// exchange-local wall-clock time; no time zone is attached.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

// Trading sessions: one contiguous session per trading day, [open, close]
// inclusive, on weekdays that are not listed holidays.
class TradingCalendar {
 public:
  // 09:30-16:00, no holidays.
  TradingCalendar() = default;
  TradingCalendar(int open_minute, int close_minute, std::set<Date> holidays = {});

  // Config text: `open=HH:MM`, `close=HH:MM`, and holiday dates one per line.
  // Blank lines and lines starting with '#' are ignored.
  static TradingCalendar parse(std::istream& in);
  static TradingCalendar load(const std::string& path);

  int open_minute() const noexcept { return open_; }
  int close_minute() const noexcept { return close_; }
  int session_minutes() const noexcept { return close_ - open_; }
  const std::set<Date>& holidays() const noexcept { return holidays_; }

  bool is_trading_day(Date day) const;
  bool in_session(Timestamp ts) const;

  // First trading day on or after `day`.
  Date first_trading_day_from(Date day) const;
  Date next_trading_day(Date day) const;

  Timestamp session_open(Date day) const;

 private:
  int open_ = 9 * 60 + 30;
  int close_ = 16 * 60;
  std::set<Date> holidays_;
};

inline Date day_of(Timestamp ts) { return std::chrono::floor<std::chrono::days>(ts); }

}  // namespace copdyn
