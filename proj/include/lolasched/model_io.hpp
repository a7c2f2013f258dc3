#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lolasched/monitor.hpp"

namespace lola {

// CSV layout shared by traces and models: header `time,<stream>,...`, times
// in decimal seconds, one row per step, empty cell = absent, tuples `(a;b)`.

/// Reads an input trace. Columns may appear in any order; inputs without a
/// column are absent throughout.
std::vector<EventInput> read_trace_csv(std::istream& in, const Specification& spec);
void write_trace_csv(std::ostream& out, const Specification& spec, const std::vector<EventInput>& events);

void write_model_csv(std::ostream& out, const EvaluationModel& model);
/// Reads a model whose columns are exactly the specification's streams.
EvaluationModel read_model_csv(std::istream& in, const Specification& spec);

std::string trigger_json_line(const TriggerReport& report);

}  // namespace lola
