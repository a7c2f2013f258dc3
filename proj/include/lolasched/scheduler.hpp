#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lolasched/monitor.hpp"
#include "lolasched/schedule_model.hpp"
#include "lolasched/translator.hpp"

namespace lola {

/// Cached view of one task as seen by the scheduler before an event.
struct TaskState {
  InputSet task;
  std::vector<std::string> names;    // sorted input names, for the final tie-break
  std::optional<std::int64_t> value;  // current schedule value, if any
  std::optional<TimeUs> last;         // last evaluation of the task or any subset
  std::optional<TimeUs> key;          // active absolute deadline (Deadline mode)
  bool overdue = false;               // at the upcoming event (DeadlinePriority mode)
  bool bootstrap = false;             // constrained but never satisfied yet
};

/// Three-way comparison under the mode's total order; negative if `a` goes first.
int compare(ScheduleMode mode, const TaskState& a, const TaskState& b);

struct EventPlan {
  TimeUs time = 0;
  InputSet inputs;
  std::vector<InputSet> selected;  // every universe task contained in `inputs`
};

/// Greedy fill: admit tasks in order while the union stays within b inputs,
/// stopping at the first task that does not fit.
EventPlan take_event(const std::vector<InputSet>& sorted, const TaskUniverse& universe, std::uint64_t b,
                     TimeUs time = 0);

struct SplitBound {
  std::size_t max = 0;  // worst case over task orders
  std::size_t min = 0;
};

/// Number of events needed to serve every task once, over all task orders.
/// Throws Precondition if some task exceeds b and UniverseTooLarge beyond 8
/// tasks (unless all tasks fit into a single event).
SplitBound compute_split_bound(const TaskUniverse& universe, std::uint64_t b);

struct SchedulerConfig {
  ScheduleMode mode = ScheduleMode::DeadlinePriority;
  std::optional<std::uint64_t> bound;   // defaults to the specification's `bound`
  std::optional<Frequency> frequency;   // defaults to the specification's `frequency`
  /// Run even if some task exceeds the bound, scheduling only the tasks that fit.
  bool force = false;
};

/// Active scheduling component. Owns the translated specification, the
/// static schedule and the per-task caches refreshed from the monitor.
class Scheduler {
 public:
  Scheduler(const Specification& spec, const SchedulerConfig& config);

  const TranslationOutput& translation() const { return translation_; }
  /// Static schedule over the tasks that are actually scheduled.
  const StaticSchedule& schedule() const { return schedule_; }
  const TaskUniverse& universe() const { return schedule_.universe; }
  ScheduleMode mode() const { return mode_; }
  std::uint64_t bound() const { return bound_; }
  Frequency frequency() const { return frequency_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Task states as they would be ranked for an event at `time`.
  std::vector<TaskState> states(TimeUs time) const;
  EventPlan plan(TimeUs time) const;
  /// Refreshes the caches after the monitor evaluated `plan`.
  void observe(const Monitor& monitor, const Monitor::StepResult& step, const EventPlan& plan);

 private:
  ScheduleMode mode_;
  std::uint64_t bound_ = 0;
  Frequency frequency_;
  TranslationOutput translation_;
  StaticSchedule schedule_;
  std::vector<std::string> warnings_;

  std::map<InputSet, TimeUs> satisfied_;              // last satisfaction per task
  std::map<InputSet, TimeUs> last_stream_;            // last_ stream values per table task
  std::map<InputSet, std::int64_t> value_;            // schedule_ stream values per table task
  std::map<InputSet, std::optional<TimeUs>> active_;  // active absolute deadline per table task
};

/// Answers a sensor query; throws SensorUnavailable if it cannot.
using SensorSource = std::function<Value(const std::string& input, TimeUs time)>;

struct ScheduledRun {
  EvaluationModel model;  // over the translated specification
  std::vector<TriggerReport> triggers;
  std::vector<EventPlan> plans;
  std::vector<std::string> warnings;
};

/// Closed loop: plan, query, evaluate, observe, at every periodic event
/// time strictly before `horizon`.
ScheduledRun run_scheduled(Scheduler& scheduler, const SensorSource& source, TimeUs horizon);
ScheduledRun run_scheduled(const Specification& spec, const SchedulerConfig& config, const SensorSource& source,
                           TimeUs horizon);

std::string plan_json_line(const EventPlan& plan, const Specification& spec, ScheduleMode mode);

}  // namespace lola
