#include "sitewatch/util/date.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace sitewatch {

namespace {

int parse_digits(std::string_view text, std::size_t pos, std::size_t len) {
  int value = 0;
  const char* first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc() || ptr != first + len) {
    throw std::invalid_argument("invalid date: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
  std::chrono::year_month_day ymd{std::chrono::year(year), std::chrono::month(month),
                                  std::chrono::day(day)};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date");
  days_ = std::chrono::sys_days(ymd);
}

Date Date::parse(std::string_view text) {
  if (text.size() < 10 || text[4] != '-' || text[7] != '-' ||
      (text.size() > 10 && text[10] != 'T' && text[10] != 't' && text[10] != ' ')) {
    throw std::invalid_argument("invalid date: '" + std::string(text) + "'");
  }
  const int y = parse_digits(text, 0, 4);
  const int m = parse_digits(text, 5, 2);
  const int d = parse_digits(text, 8, 2);
  std::chrono::year_month_day ymd{std::chrono::year(y), std::chrono::month(m),
                                  std::chrono::day(d)};
  if (!ymd.ok()) throw std::invalid_argument("invalid date: '" + std::string(text) + "'");
  return Date(std::chrono::sys_days(ymd));
}

std::string Date::str() const {
  const std::chrono::year_month_day ymd(days_);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace sitewatch
