#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace sitewatch {

// Calendar date (UTC), serialized as "YYYY-MM-DD".
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::sys_days days) : days_(days) {}
  Date(int year, unsigned month, unsigned day);

  // Accepts "YYYY-MM-DD" optionally followed by a 'T' time part (RFC 3339
  // timestamps from news APIs). Throws std::invalid_argument otherwise.
  static Date parse(std::string_view text);

  std::string str() const;
  Date plus_days(int n) const { return Date(days_ + std::chrono::days(n)); }
  long days_since_epoch() const { return days_.time_since_epoch().count(); }

  friend auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace sitewatch
