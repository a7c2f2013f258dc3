#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lolasched/schedule_model.hpp"

namespace lola {

/// Helper streams generated for one task.
struct TaskStreams {
  InputSet task;
  std::optional<std::string> schedule;
  std::optional<std::string> last;
  std::optional<std::string> overdue;
  std::optional<TimeUs> deadline;  // overdue bound, if any
};

struct TranslationOutput {
  Specification plain_spec;  // annotations stripped, helper outputs appended
  ScheduleMode mode = ScheduleMode::Priority;
  std::vector<TaskStreams> task_table;

  const TaskStreams* find(InputSet task) const;
  std::string text() const;
  /// Sidecar JSON: mode plus one entry per task with its inputs and stream names.
  std::string task_table_json() const;
};

/// Lowers an annotated specification. Helper streams are generated for the
/// generator tasks of the schedule's universe (pacing types and annotated
/// input singletons); unions are left to the scheduler.
TranslationOutput translate(const Specification& spec, const StaticSchedule& xi);

/// Builds the universe and static schedule itself.
TranslationOutput translate(const Specification& spec, ScheduleMode mode);

/// Convenience for callers that need the schedule alongside the translation.
StaticSchedule static_schedule_for(const Specification& spec, ScheduleMode mode);

}  // namespace lola
