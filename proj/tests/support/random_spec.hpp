#pragma once

#include <random>
#include <vector>

#include "lolasched/ast.hpp"
#include "lolasched/monitor.hpp"

namespace lola::test {

enum class AnnotationStyle { None, Priority, Deadline, DeadlinePriority };

struct GenOptions {
  AnnotationStyle style = AnnotationStyle::None;
  int max_inputs = 4;
  int max_outputs = 6;
  int max_triggers = 2;
  int max_depth = 3;
};

/// A random well-typed, well-defined specification. Inputs are named i0,
/// i1, ... and outputs o0, o1, ...
Specification random_spec(std::mt19937_64& rng, const GenOptions& opts);

/// Random strictly increasing events; each carries at least one input.
std::vector<EventInput> random_trace(std::mt19937_64& rng, const Specification& spec, std::size_t events,
                                     double presence = 0.5);

/// A random value of the given (non-tuple) type.
Value random_value(std::mt19937_64& rng, const Type& type);

}  // namespace lola::test
