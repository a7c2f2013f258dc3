#include "lolasched/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "lolasched/error.hpp"

namespace lola {

int compare(ScheduleMode mode, const TaskState& a, const TaskState& b) {
  auto first = [](bool x, bool y) { return x == y ? 0 : (x ? -1 : 1); };
  auto urgent = [&](const TaskState& s) { return s.bootstrap || (mode == ScheduleMode::DeadlinePriority && s.overdue); };
  if (int c = first(urgent(a), urgent(b))) return c;
  if (mode == ScheduleMode::Deadline) {
    if (int c = first(a.key.has_value(), b.key.has_value())) return c;
    if (a.key && *a.key != *b.key) return *a.key < *b.key ? -1 : 1;
  } else {
    if (int c = first(a.value.has_value(), b.value.has_value())) return c;
    if (a.value && *a.value != *b.value) return *a.value > *b.value ? -1 : 1;
  }
  if (int c = first(!a.last.has_value(), !b.last.has_value())) return c;
  if (a.last && *a.last != *b.last) return *a.last < *b.last ? -1 : 1;
  if (a.names != b.names) return a.names < b.names ? -1 : 1;
  return 0;
}

EventPlan take_event(const std::vector<InputSet>& sorted, const TaskUniverse& universe, std::uint64_t b,
                     TimeUs time) {
  EventPlan plan;
  plan.time = time;
  for (auto t : sorted) {
    InputSet next = plan.inputs | t;
    if (static_cast<std::uint64_t>(next.size()) > b) break;
    plan.inputs = next;
  }
  for (auto t : universe.tasks) {
    if (t.subset_of(plan.inputs)) plan.selected.push_back(t);
  }
  return plan;
}

SplitBound compute_split_bound(const TaskUniverse& universe, std::uint64_t b) {
  if (universe.empty()) return {0, 0};
  if (universe.max_size() > b) {
    throw Error(ErrorKind::Precondition, "a task has more inputs than the bound " + std::to_string(b));
  }
  if (static_cast<std::uint64_t>(universe.all_inputs().size()) <= b) return {1, 1};
  if (universe.tasks.size() > 8) {
    throw Error(ErrorKind::UniverseTooLarge,
                "split bound needs at most 8 tasks, universe has " + std::to_string(universe.tasks.size()));
  }
  std::vector<std::size_t> perm(universe.tasks.size());
  std::iota(perm.begin(), perm.end(), 0);
  SplitBound out{0, std::numeric_limits<std::size_t>::max()};
  do {
    std::size_t events = 1;
    InputSet cur;
    for (auto i : perm) {
      InputSet t = universe.tasks[i];
      if (static_cast<std::uint64_t>((cur | t).size()) > b) {
        ++events;
        cur = t;
      } else {
        cur |= t;
      }
    }
    out.max = std::max(out.max, events);
    out.min = std::min(out.min, events);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Scheduler::Scheduler(const Specification& spec, const SchedulerConfig& config) : mode_(config.mode) {
  Specification analyzed = analyze(spec);
  if (config.bound) {
    bound_ = *config.bound;
  } else if (analyzed.config.bandwidth) {
    bound_ = *analyzed.config.bandwidth;
  } else {
    throw Error(ErrorKind::Precondition, "no bandwidth bound given");
  }
  if (bound_ == 0) throw Error(ErrorKind::Precondition, "bandwidth bound must be positive");
  if (config.frequency) {
    frequency_ = *config.frequency;
  } else if (analyzed.config.event_frequency) {
    frequency_ = *analyzed.config.event_frequency;
  } else {
    throw Error(ErrorKind::Precondition, "no event frequency given");
  }

  StaticSchedule full = static_schedule_for(analyzed, mode_);
  translation_ = translate(spec, full);
  if (full.universe.max_size() > bound_) {
    std::string msg = "bound " + std::to_string(bound_) + " is below the largest task (" +
                      std::to_string(full.universe.max_size()) + " inputs)";
    if (!config.force) throw Error(ErrorKind::Precondition, msg);
    warnings_.push_back(msg + "; scheduling only tasks of at most " + std::to_string(bound_) + " inputs");
    schedule_ = build_static_schedule(analyzed, derive_annotation_map(analyzed), restrict_universe(full.universe, bound_),
                                      mode_, analyzed.config.default_deadline);
  } else {
    schedule_ = std::move(full);
  }

  if (mode_ == ScheduleMode::Deadline && !schedule_.entries.empty()) {
    try {
      SplitBound n = compute_split_bound(schedule_.universe, bound_);
      for (const auto& [task, entries] : schedule_.entries) {
        for (const auto& e : entries) {
          // dl <= n / f_e, compared exactly in integers.
          if (static_cast<__int128>(e.value) * frequency_.num <=
              static_cast<__int128>(n.max) * kMicrosPerSecond * frequency_.den) {
            warnings_.push_back("deadline " + format_seconds(e.value) + "s of task " + task_label(analyzed, task) +
                                " does not exceed n/f_e with n=" + std::to_string(n.max) + " (best order needs " +
                                std::to_string(n.min) + ")");
          }
        }
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UniverseTooLarge) throw;
      warnings_.push_back(std::string("deadline feasibility not checked: ") + e.message());
    }
  }
}

std::vector<TaskState> Scheduler::states(TimeUs time) const {
  const Specification& spec = translation_.plain_spec;
  std::vector<TaskState> out;
  for (auto task : schedule_.universe.tasks) {
    TaskState s;
    s.task = task;
    for (auto i : task.indices()) s.names.push_back(spec.inputs[i].name);
    std::sort(s.names.begin(), s.names.end());

    auto later = [&](std::optional<TimeUs> t) {
      if (t && (!s.last || *t > *s.last)) s.last = t;
    };
    for (const auto& [sub, t] : satisfied_) {
      if (sub.subset_of(task)) later(t);
    }
    for (const auto& [sub, t] : last_stream_) {
      if (sub.subset_of(task)) later(t);
    }

    const TaskStreams* own = translation_.find(task);
    if (auto it = value_.find(task); it != value_.end()) {
      s.value = it->second;
    } else if (!own || !own->schedule) {
      for (const auto& [sub, v] : value_) {
        if (sub.subset_of(task) && (!s.value || more_restrictive(mode_, v, *s.value))) s.value = v;
      }
    }
    s.bootstrap = own && own->schedule && !value_.count(task);

    if (mode_ == ScheduleMode::Deadline) {
      if (auto it = active_.find(task); it != active_.end()) {
        s.key = it->second;
      } else {
        for (const auto& [sub, k] : active_) {
          if (sub.subset_of(task) && k && (!s.key || *k < *s.key)) s.key = k;
        }
      }
    }
    if (auto dl = schedule_.overdue_bound(task)) s.overdue = !s.last || time - *s.last > *dl;
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(),
                   [&](const TaskState& a, const TaskState& b) { return compare(mode_, a, b) < 0; });
  return out;
}

EventPlan Scheduler::plan(TimeUs time) const {
  std::vector<InputSet> order;
  for (const auto& s : states(time)) order.push_back(s.task);
  return take_event(order, schedule_.universe, bound_, time);
}

void Scheduler::observe(const Monitor& monitor, const Monitor::StepResult& step, const EventPlan& plan) {
  const CompiledSpec& c = monitor.compiled();
  InputSet present;
  for (std::size_t i = 0; i < c.spec.inputs.size(); ++i) {
    if (step.cells[i]) present |= InputSet::single(i);
  }
  for (auto task : schedule_.universe.tasks) {
    if (task.subset_of(present)) satisfied_[task] = plan.time;
  }
  auto cell_of = [&](const std::string& name) -> const Cell& {
    for (std::size_t s = 0; s < c.stream_count(); ++s) {
      if (c.stream_name(s) == name) return step.cells[s];
    }
    throw Error(ErrorKind::UnknownStream, "monitor has no stream '" + name + "'");
  };
  for (const auto& ts : translation_.task_table) {
    if (ts.last) {
      if (const Cell& v = cell_of(*ts.last)) last_stream_[ts.task] = std::llround(v->as_double() * 1e6);
    }
    if (!ts.schedule) continue;
    if (ts.task.subset_of(present)) active_[ts.task].reset();
    if (const Cell& v = cell_of(*ts.schedule)) {
      std::int64_t value = mode_ == ScheduleMode::Deadline ? std::llround(v->as_double() * 1e6)
                                                           : std::llround(v->as_double());
      value_[ts.task] = value;
      if (mode_ == ScheduleMode::Deadline) {
        auto& k = active_[ts.task];
        TimeUs due = plan.time + value;
        if (!k || due < *k) k = due;
      }
    }
  }
}

ScheduledRun run_scheduled(Scheduler& scheduler, const SensorSource& source, TimeUs horizon) {
  const Specification& spec = scheduler.translation().plain_spec;
  Monitor monitor(spec);
  ScheduledRun run;
  run.warnings = scheduler.warnings();
  const CompiledSpec& c = monitor.compiled();
  for (std::size_t s = 0; s < c.stream_count(); ++s) run.model.streams.push_back(c.stream_name(s));
  run.model.input_count = spec.inputs.size();
  run.model.cells.resize(c.stream_count());

  for (std::size_t k = 0;; ++k) {
    TimeUs t = scheduler.frequency().event_time(k);
    if (t >= horizon) break;
    EventPlan plan = scheduler.plan(t);
    if (plan.inputs.empty()) continue;
    EventInput ev{t, std::vector<Cell>(spec.inputs.size())};
    for (auto i : plan.inputs.indices()) ev.values[i] = source(spec.inputs[i].name, t);
    auto step = monitor.eval_event(ev);
    run.model.times.push_back(t);
    for (std::size_t s = 0; s < step.cells.size(); ++s) run.model.cells[s].push_back(step.cells[s]);
    run.triggers.insert(run.triggers.end(), step.triggers.begin(), step.triggers.end());
    scheduler.observe(monitor, step, plan);
    run.plans.push_back(std::move(plan));
  }
  return run;
}

ScheduledRun run_scheduled(const Specification& spec, const SchedulerConfig& config, const SensorSource& source,
                           TimeUs horizon) {
  Scheduler scheduler(spec, config);
  return run_scheduled(scheduler, source, horizon);
}

std::string plan_json_line(const EventPlan& plan, const Specification& spec, ScheduleMode mode) {
  nlohmann::json j;
  j["time"] = to_seconds(plan.time);
  std::vector<std::string> names;
  for (auto i : plan.inputs.indices()) names.push_back(spec.inputs[i].name);
  j["queried"] = names;
  j["mode"] = to_string(mode);
  return j.dump();
}

}  // namespace lola
