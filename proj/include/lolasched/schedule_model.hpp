#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lolasched/analysis.hpp"
#include "lolasched/monitor.hpp"

namespace lola {

enum class ScheduleMode { Deadline, Priority, DeadlinePriority };

std::string to_string(ScheduleMode mode);
/// Accepts "deadline", "priority" and "dp" (or "deadline-priority").
ScheduleMode parse_mode(std::string_view text);

/// Canonical task order: by size, then by bit pattern.
bool task_order(InputSet a, InputSet b);

/// Tasks are sets of inputs. The universe is closed under union.
struct TaskUniverse {
  std::vector<InputSet> tasks;       // in task_order
  std::vector<InputSet> generators;  // pacing types and annotated input singletons

  bool contains(InputSet t) const;
  std::size_t max_size() const;
  InputSet all_inputs() const;
  bool empty() const { return tasks.empty(); }
};

TaskUniverse build_task_universe(const Specification& spec);

/// Fallback universe for a bound below the largest task: the generator
/// tasks of at most b inputs, without unions. A partially fitting union would
/// end an event early under the first-miss rule of take_event.
TaskUniverse restrict_universe(const TaskUniverse& u, std::uint64_t b);

/// A guarded schedule value: a priority, or a relative deadline in microseconds.
struct ScheduleEntry {
  Condition condition;
  std::int64_t value = 0;
};

/// True if `a` is strictly more restrictive than `b` under `mode`
/// (higher priority, shorter deadline).
bool more_restrictive(ScheduleMode mode, std::int64_t a, std::int64_t b);

struct StaticSchedule {
  ScheduleMode mode = ScheduleMode::Priority;
  TaskUniverse universe;
  std::map<InputSet, std::vector<ScheduleEntry>> entries;  // tasks with a nonempty schedule only
  std::map<InputSet, TimeUs> overdue_bounds;                // DeadlinePriority only

  const std::vector<ScheduleEntry>& at(InputSet task) const;
  std::optional<TimeUs> overdue_bound(InputSet task) const;
};

/// Builds the static schedule of every universe task from the annotation
/// map. Each annotation of a stream paced within the task yields one entry,
/// guarded against all strictly more restrictive annotations of the other
/// contributing streams, so the entries of a task are mutually exclusive and
/// the active one carries the most restrictive value.
StaticSchedule build_static_schedule(const Specification& spec, const AnnotationMap& map, const TaskUniverse& universe,
                                     ScheduleMode mode, std::optional<TimeUs> default_deadline);

/// Evaluates the schedule's conditions over a complete model once and
/// answers the per-step constraint questions.
class ScheduleOracle {
 public:
  ScheduleOracle(const StaticSchedule& xi, const EvaluationModel& model);

  enum class Verdict { Y, M, N };

  /// Decision at step t, constraining step t+1; covers every universe task.
  std::map<InputSet, Verdict> decide(std::size_t t) const;

  bool satisfied(InputSet task, std::size_t t) const;
  bool condition_holds(InputSet task, std::size_t entry, std::size_t t) const;
  /// Most recent active value of a task at or before t.
  std::optional<std::int64_t> priority(InputSet task, std::size_t t) const;
  /// Whether the task is overdue at step t (no subset task satisfied within its bound before t).
  bool overdue(InputSet task, std::size_t t) const;

 private:
  Verdict deadline_verdict(InputSet task, std::size_t t) const;

  const StaticSchedule& xi_;
  const EvaluationModel& model_;
  std::vector<InputSet> present_;                         // per step
  std::map<InputSet, std::vector<std::vector<bool>>> holds_;  // [task][entry][step]
};

using Verdict = ScheduleOracle::Verdict;

std::map<InputSet, Verdict> dynamic_decision(const StaticSchedule& xi, const EvaluationModel& model, std::size_t t);

/// At most b inputs carry a value at step t.
bool check_bandwidth(std::uint64_t b, const EvaluationModel& model, std::size_t t);

/// Selected tasks are satisfied, unselected ones are not, and the selection
/// is closed under satisfied supersets and under union.
bool valid_tasks(const TaskUniverse& universe, const EvaluationModel& model, std::size_t t,
                 const std::set<InputSet>& selected);

struct ScheduleViolation {
  std::string kind;     // semantic, schedule or bandwidth
  std::string subject;  // stream or task
  std::size_t step = 0;
  TimeUs time = 0;
  std::string detail;
};

/// Full oracle: model semantics against `model_spec`, schedule conformance at
/// every step and the bandwidth bound.
std::vector<ScheduleViolation> check_scheduled_model(const Specification& model_spec, const StaticSchedule& xi,
                                                     std::uint64_t b, const EvaluationModel& model);

std::string task_label(const Specification& spec, InputSet task);
std::string to_json_line(const ScheduleViolation& v);

}  // namespace lola
