#include "lolasched/time.hpp"

#include <cctype>
#include <numeric>

#include "lolasched/error.hpp"

namespace lola {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Parses a non-negative decimal into (mantissa, 10^scale) with scale <= max_scale.
void parse_decimal(std::string_view text, std::int64_t& mantissa, int& scale, int max_scale) {
  mantissa = 0;
  scale = 0;
  bool seen_digit = false;
  bool in_fraction = false;
  for (char c : text) {
    if (c == '.') {
      if (in_fraction) throw Error(ErrorKind::Syntax, "malformed number '" + std::string(text) + "'");
      in_fraction = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error(ErrorKind::Syntax, "malformed number '" + std::string(text) + "'");
    }
    seen_digit = true;
    if (in_fraction) {
      if (scale == max_scale) {
        if (c != '0') throw Error(ErrorKind::Syntax, "too many fractional digits in '" + std::string(text) + "'");
        continue;
      }
      ++scale;
    }
    if (mantissa > (INT64_MAX - 9) / 10) throw Error(ErrorKind::Syntax, "number out of range '" + std::string(text) + "'");
    mantissa = mantissa * 10 + (c - '0');
  }
  if (!seen_digit) throw Error(ErrorKind::Syntax, "malformed number '" + std::string(text) + "'");
}

std::int64_t pow10(int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= 10;
  return r;
}

}  // namespace

TimeUs parse_seconds(std::string_view text) {
  text = trim(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::int64_t mantissa = 0;
  int scale = 0;
  parse_decimal(text, mantissa, scale, 6);
  TimeUs us = mantissa * pow10(6 - scale);
  return negative ? -us : us;
}

TimeUs parse_duration(std::string_view text) {
  text = trim(text);
  auto strip = [&](std::string_view suffix) {
    if (text.size() >= suffix.size() && text.substr(text.size() - suffix.size()) == suffix) {
      text.remove_suffix(suffix.size());
      return true;
    }
    return false;
  };
  if (strip("us")) return parse_seconds(text) / kMicrosPerSecond;
  if (strip("ms")) {
    std::int64_t mantissa = 0;
    int scale = 0;
    parse_decimal(trim(text), mantissa, scale, 3);
    return mantissa * pow10(3 - scale);
  }
  strip("s");
  return parse_seconds(text);
}

std::string format_seconds(TimeUs t) {
  std::string out;
  if (t < 0) {
    out.push_back('-');
    t = -t;
  }
  out += std::to_string(t / kMicrosPerSecond);
  TimeUs frac = t % kMicrosPerSecond;
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 6 - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

TimeUs Frequency::event_time(std::size_t k) const {
  // k * 1e6 * den / num, floor; __int128 avoids overflow on long runs.
  __int128 numerator = static_cast<__int128>(k) * kMicrosPerSecond * den;
  return static_cast<TimeUs>(numerator / num);
}

Frequency parse_frequency(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && (text.substr(text.size() - 2) == "Hz" || text.substr(text.size() - 2) == "hz")) {
    text.remove_suffix(2);
    text = trim(text);
  }
  std::int64_t mantissa = 0;
  int scale = 0;
  parse_decimal(text, mantissa, scale, 6);
  if (mantissa <= 0) throw Error(ErrorKind::Syntax, "frequency must be positive");
  std::int64_t den = pow10(scale);
  std::int64_t g = std::gcd(mantissa, den);
  return Frequency{mantissa / g, den / g};
}

std::string format_frequency(const Frequency& f) {
  // Exact for frequencies with a power-of-ten denominator, which is all parse_frequency produces.
  TimeUs as_micro = f.num * (kMicrosPerSecond / f.den);
  return format_seconds(as_micro) + "Hz";
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::DuplicateStream: return "DuplicateStream";
    case ErrorKind::UnknownStream: return "UnknownStream";
    case ErrorKind::Type: return "TypeError";
    case ErrorKind::PacingConflict: return "PacingConflict";
    case ErrorKind::EmptyPacing: return "EmptyPacing";
    case ErrorKind::CyclicDependency: return "CyclicDependency";
    case ErrorKind::MixedAnnotationKinds: return "MixedAnnotationKinds";
    case ErrorKind::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorKind::EmptyEvent: return "EmptyEvent";
    case ErrorKind::Evaluation: return "EvaluationError";
    case ErrorKind::UniverseTooLarge: return "UniverseTooLarge";
    case ErrorKind::Precondition: return "PreconditionViolation";
    case ErrorKind::SensorUnavailable: return "SensorUnavailable";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::MismatchedTraces: return "MismatchedTraces";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

}  // namespace lola
