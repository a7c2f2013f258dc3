#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace lola {

/// Timestamps and durations are integer microseconds. Floating-point time is
/// only produced where the specification language asks for it (`now`).
using TimeUs = std::int64_t;

inline constexpr TimeUs kMicrosPerSecond = 1'000'000;

inline double to_seconds(TimeUs t) { return static_cast<double>(t) / static_cast<double>(kMicrosPerSecond); }

/// Parses a decimal number of seconds ("1.5", "-0.25", "60") exactly. At most
/// six fractional digits are accepted.
TimeUs parse_seconds(std::string_view text);

/// Parses a duration with unit suffix: "3s", "250ms", "2.5s", "100us".
TimeUs parse_duration(std::string_view text);

/// Shortest decimal rendering of a microsecond value in seconds.
std::string format_seconds(TimeUs t);

/// Rational event frequency in events per second.
struct Frequency {
  std::int64_t num = 1;
  std::int64_t den = 1;

  double hz() const { return static_cast<double>(num) / static_cast<double>(den); }
  /// Timestamp of the k-th periodic event, starting at zero.
  TimeUs event_time(std::size_t k) const;
  /// Length of one period, rounded down to whole microseconds.
  TimeUs period() const { return event_time(1); }

  friend bool operator==(const Frequency&, const Frequency&) = default;
};

/// Parses "2Hz", "0.5 Hz", "2".
Frequency parse_frequency(std::string_view text);

std::string format_frequency(const Frequency& f);

}  // namespace lola
