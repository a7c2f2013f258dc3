#pragma once

#include <functional>
#include <random>
#include <string>

#include "lolasched/scheduler.hpp"
#include "support/random_spec.hpp"

namespace lola::test {

/// Deterministic pseudo-random sensor readings keyed by (input, time).
inline SensorSource hashed_source(const Specification& spec, std::uint64_t seed) {
  return [spec, seed](const std::string& input, TimeUs t) {
    for (const auto& in : spec.inputs) {
      if (in.name != input) continue;
      std::mt19937_64 rng(seed ^ (std::hash<std::string>{}(input) * 0x9e3779b97f4a7c15ULL) ^
                          static_cast<std::uint64_t>(t));
      return random_value(rng, in.type);
    }
    throw Error(ErrorKind::SensorUnavailable, "no sensor " + input);
  };
}

}  // namespace lola::test
