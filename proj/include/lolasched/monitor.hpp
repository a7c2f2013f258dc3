#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "lolasched/analysis.hpp"
#include "lolasched/ast.hpp"

namespace lola {

/// One monitor event: a timestamp and a value-or-absent per input, indexed
/// like `Specification::inputs`.
struct EventInput {
  TimeUs time = 0;
  std::vector<Cell> values;
};

/// Evaluation model: per-stream cell sequences over shared steps plus the
/// time of each step. Streams are the inputs followed by the outputs, in
/// declaration order.
struct EvaluationModel {
  std::vector<std::string> streams;
  std::size_t input_count = 0;  // leading entries of `streams` that are inputs
  std::vector<TimeUs> times;
  std::vector<std::vector<Cell>> cells;  // [stream][step]

  std::size_t steps() const { return times.size(); }
  int index_of(std::string_view stream) const;
  const std::vector<Cell>& column(std::string_view stream) const;
};

struct TriggerReport {
  std::string trigger;
  std::size_t step = 0;
  TimeUs time = 0;
  std::string message;
};

/// A specification after the front-end passes, ready for evaluation.
struct CompiledSpec {
  Specification spec;  // pacing resolved
  std::map<std::string, Type> types;
  std::vector<std::size_t> order;  // output indices, dependencies first
  std::vector<InputSet> output_pacing;
  std::vector<bool> output_any;
  std::vector<InputSet> trigger_pacing;
  std::vector<bool> trigger_any;
  /// Values of history kept per stream (max offset; at least 1 if held).
  std::vector<std::uint32_t> history_depth;  // indexed like EvaluationModel::streams

  explicit CompiledSpec(const Specification& spec);

  std::size_t stream_count() const { return spec.inputs.size() + spec.outputs.size(); }
  std::string stream_name(std::size_t i) const;
};

/// Online monitor holding only bounded per-stream history.
class Monitor {
 public:
  explicit Monitor(const Specification& spec);

  struct StepResult {
    std::vector<Cell> cells;  // one per stream, like EvaluationModel::streams
    std::vector<TriggerReport> triggers;
  };

  /// Evaluates one event. Throws NonMonotonicTime if the event is not later
  /// than the previous one and EmptyEvent if it carries no input value.
  StepResult eval_event(const EventInput& event);

  const CompiledSpec& compiled() const { return compiled_; }
  const Specification& spec() const { return compiled_.spec; }
  std::size_t step() const { return step_; }
  /// Most recent non-absent value of a stream, if any.
  Cell latest(std::string_view stream) const;

 private:
  class StepEnv;

  Cell past(std::size_t stream, std::uint32_t k) const;

  CompiledSpec compiled_;
  std::unordered_map<std::string, std::size_t> index_;
  // Ring buffer of recent non-absent values per stream, newest last.
  std::vector<std::vector<Value>> history_;
  std::vector<std::size_t> history_head_;
  std::vector<std::size_t> history_size_;
  std::size_t step_ = 0;
  bool started_ = false;
  TimeUs last_time_ = 0;
};

EvaluationModel run_monitor(const Specification& spec, const std::vector<EventInput>& events,
                            std::vector<TriggerReport>* reports = nullptr);

struct ModelViolation {
  std::string stream;  // empty for time-map violations
  std::size_t step = 0;
  TimeUs time = 0;
  std::string detail;
};

/// Recomputes every output cell from the model's inputs and time map and
/// reports each mismatching cell, malformed shape and non-increasing time.
std::vector<ModelViolation> verify_model(const Specification& spec, const EvaluationModel& model);

}  // namespace lola
