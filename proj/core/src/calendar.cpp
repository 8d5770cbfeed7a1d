#include "copdyn/calendar.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "copdyn/errors.hpp"

namespace copdyn {

namespace {

using namespace std::chrono;

int parse_fixed(std::string_view text, std::size_t pos, std::size_t len, std::string_view what) {
  if (pos + len > text.size()) throw ParseError("truncated " + std::string(what));
  int value = 0;
  const char* first = text.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc{} || ptr != first + len) {
    throw ParseError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

int parse_clock(std::string_view text) {
  if (text.size() != 5 || text[2] != ':') throw ParseError("invalid time of day '" + std::string(text) + "'");
  const int h = parse_fixed(text, 0, 2, "hour");
  const int m = parse_fixed(text, 3, 2, "minute");
  if (h > 23 || m > 59) throw ParseError("invalid time of day '" + std::string(text) + "'");
  return h * 60 + m;
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw ParseError("invalid date '" + std::string(text) + "'");
  }
  const year_month_day ymd{year{parse_fixed(text, 0, 4, "year")},
                           month{static_cast<unsigned>(parse_fixed(text, 5, 2, "month"))},
                           day{static_cast<unsigned>(parse_fixed(text, 8, 2, "day"))}};
  if (!ymd.ok()) throw ParseError("invalid date '" + std::string(text) + "'");
  return sys_days{ymd};
}

std::string format_date(Date date) {
  const year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

Timestamp parse_timestamp(std::string_view text) {
  if (text.size() != 19 || (text[10] != 'T' && text[10] != ' ') || text[13] != ':' || text[16] != ':') {
    throw ParseError("invalid timestamp '" + std::string(text) + "'");
  }
  const Date d = parse_date(text.substr(0, 10));
  const int h = parse_fixed(text, 11, 2, "hour");
  const int m = parse_fixed(text, 14, 2, "minute");
  const int s = parse_fixed(text, 17, 2, "second");
  if (h > 23 || m > 59 || s > 59) throw ParseError("invalid timestamp '" + std::string(text) + "'");
  return d + hours{h} + minutes{m} + seconds{s};
}

std::string format_timestamp(Timestamp ts) {
  const Date d = day_of(ts);
  const auto secs = (ts - d).count();
  char buf[48];
  std::snprintf(buf, sizeof buf, "T%02lld:%02lld:%02lld", static_cast<long long>(secs / 3600),
                static_cast<long long>(secs / 60 % 60), static_cast<long long>(secs % 60));
  return format_date(d) + buf;
}

TradingCalendar::TradingCalendar(int open_minute, int close_minute, std::set<Date> holidays)
    : open_(open_minute), close_(close_minute), holidays_(std::move(holidays)) {
  if (open_ < 0 || close_ > 24 * 60 || close_ <= open_) {
    throw std::invalid_argument("trading session must satisfy 0 <= open < close <= 24:00");
  }
}

TradingCalendar TradingCalendar::parse(std::istream& in) {
  int open = 9 * 60 + 30;
  int close = 16 * 60;
  std::set<Date> holidays;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    try {
      if (line.starts_with("open=")) {
        open = parse_clock(trim(line.substr(5)));
      } else if (line.starts_with("close=")) {
        close = parse_clock(trim(line.substr(6)));
      } else {
        holidays.insert(parse_date(line));
      }
    } catch (const ParseError& e) {
      throw ParseError(std::string("calendar: ") + e.what(), line_no);
    }
  }
  if (close <= open) throw ParseError("calendar: close must be later than open");
  return TradingCalendar(open, close, std::move(holidays));
}

TradingCalendar TradingCalendar::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open calendar file '" + path + "'");
  return parse(in);
}

bool TradingCalendar::is_trading_day(Date day) const {
  const weekday wd{day};
  if (wd == Saturday || wd == Sunday) return false;
  return !holidays_.contains(day);
}

bool TradingCalendar::in_session(Timestamp ts) const {
  const Date d = day_of(ts);
  if (!is_trading_day(d)) return false;
  const auto secs = (ts - d).count();
  return secs >= open_ * 60LL && secs <= close_ * 60LL;
}

Date TradingCalendar::first_trading_day_from(Date day) const {
  while (!is_trading_day(day)) day += days{1};
  return day;
}

Date TradingCalendar::next_trading_day(Date day) const { return first_trading_day_from(day + days{1}); }

Timestamp TradingCalendar::session_open(Date day) const { return Timestamp{day} + minutes{open_}; }

}  // namespace copdyn
