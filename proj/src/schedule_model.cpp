#include "lolasched/schedule_model.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "json.hpp"

#include "lolasched/error.hpp"
#include "lolasched/interpreter.hpp"
#include "lolasched/parser.hpp"

namespace lola {

std::string to_string(ScheduleMode mode) {
  switch (mode) {
    case ScheduleMode::Deadline: return "deadline";
    case ScheduleMode::Priority: return "priority";
    case ScheduleMode::DeadlinePriority: return "dp";
  }
  return "?";
}

ScheduleMode parse_mode(std::string_view text) {
  if (text == "deadline") return ScheduleMode::Deadline;
  if (text == "priority") return ScheduleMode::Priority;
  if (text == "dp" || text == "deadline-priority") return ScheduleMode::DeadlinePriority;
  throw Error(ErrorKind::Syntax, "unknown schedule mode '" + std::string(text) + "'");
}

bool TaskUniverse::contains(InputSet t) const { return std::binary_search(tasks.begin(), tasks.end(), t, task_order); }

std::size_t TaskUniverse::max_size() const {
  std::size_t m = 0;
  for (auto t : tasks) m = std::max(m, static_cast<std::size_t>(t.size()));
  return m;
}

InputSet TaskUniverse::all_inputs() const {
  InputSet all;
  for (auto t : tasks) all |= t;
  return all;
}

bool task_order(InputSet a, InputSet b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.bits() < b.bits();
}

namespace {

std::vector<InputSet> close_under_union(const std::vector<InputSet>& gens) {
  std::set<InputSet> closed(gens.begin(), gens.end());
  std::vector<InputSet> work(closed.begin(), closed.end());
  while (!work.empty()) {
    InputSet t = work.back();
    work.pop_back();
    std::vector<InputSet> fresh;
    for (auto u : closed) {
      InputSet v = t | u;
      if (!closed.count(v)) fresh.push_back(v);
    }
    for (auto v : fresh) {
      if (closed.insert(v).second) work.push_back(v);
    }
  }
  std::vector<InputSet> out(closed.begin(), closed.end());
  std::sort(out.begin(), out.end(), task_order);
  return out;
}

}  // namespace

TaskUniverse build_task_universe(const Specification& input) {
  Specification spec = infer_pacing(input);
  std::set<InputSet> gens;
  for (const auto& out : spec.outputs) {
    for (const auto& c : out.clauses) {
      if (c.pacing && !c.pacing->any) gens.insert(pacing_set(spec, *c.pacing));
    }
  }
  for (const auto& t : spec.triggers) {
    if (t.pacing && !t.pacing->any) gens.insert(pacing_set(spec, *t.pacing));
  }
  for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
    if (spec.inputs[i].annotation) gens.insert(InputSet::single(i));
  }
  gens.erase(InputSet{});
  TaskUniverse u;
  u.generators.assign(gens.begin(), gens.end());
  std::sort(u.generators.begin(), u.generators.end(), task_order);
  u.tasks = close_under_union(u.generators);
  return u;
}

TaskUniverse restrict_universe(const TaskUniverse& u, std::uint64_t b) {
  TaskUniverse r;
  for (auto g : u.generators) {
    if (static_cast<std::uint64_t>(g.size()) <= b) r.generators.push_back(g);
  }
  r.tasks = r.generators;
  return r;
}

bool more_restrictive(ScheduleMode mode, std::int64_t a, std::int64_t b) {
  return mode == ScheduleMode::Deadline ? a < b : a > b;
}

const std::vector<ScheduleEntry>& StaticSchedule::at(InputSet task) const {
  static const std::vector<ScheduleEntry> none;
  auto it = entries.find(task);
  return it == entries.end() ? none : it->second;
}

std::optional<TimeUs> StaticSchedule::overdue_bound(InputSet task) const {
  auto it = overdue_bounds.find(task);
  if (it == overdue_bounds.end()) return std::nullopt;
  return it->second;
}

namespace {

struct Atom {
  std::size_t stream;  // index into the annotation map
  InputSet pacing;
  ExprPtr expr;
  std::int64_t value;
};

std::int64_t to_priority(std::uint64_t p) {
  if (p > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw Error(ErrorKind::Type, "priority " + std::to_string(p) + " out of range");
  }
  return static_cast<std::int64_t>(p);
}

}  // namespace

StaticSchedule build_static_schedule(const Specification& spec, const AnnotationMap& map,
                                     const TaskUniverse& universe, ScheduleMode mode,
                                     std::optional<TimeUs> default_deadline) {
  std::set<std::string> input_names;
  for (const auto& in : spec.inputs) input_names.insert(in.name);

  StaticSchedule xi;
  xi.mode = mode;
  xi.universe = universe;

  std::vector<Atom> atoms;
  std::vector<std::pair<InputSet, TimeUs>> input_deadlines;
  for (std::size_t s = 0; s < map.streams.size(); ++s) {
    const auto& sa = map.streams[s];
    bool is_input = input_names.count(sa.stream) > 0;
    for (const auto& e : sa.entries) {
      const Annotation& a = e.annotation;
      std::optional<std::int64_t> value;
      switch (mode) {
        case ScheduleMode::Deadline:
          if (a.priority) {
            throw Error(ErrorKind::MixedAnnotationKinds, "priority annotation on '" + sa.stream + "' in deadline mode",
                        a.loc);
          }
          value = a.deadline;
          break;
        case ScheduleMode::Priority:
        case ScheduleMode::DeadlinePriority:
          if (a.deadline && !is_input) {
            throw Error(ErrorKind::MixedAnnotationKinds,
                        "deadline annotation on output '" + sa.stream + "' in " + to_string(mode) + " mode", a.loc);
          }
          if (a.priority) value = to_priority(*a.priority);
          if (mode == ScheduleMode::DeadlinePriority && a.deadline) input_deadlines.push_back({sa.pacing, *a.deadline});
          break;
      }
      if (value) atoms.push_back({s, sa.pacing, e.condition.expr, *value});
    }
  }

  for (auto task : universe.tasks) {
    std::vector<const Atom*> contributing;
    InputSet pacing;
    for (const auto& a : atoms) {
      if (a.pacing.subset_of(task)) {
        contributing.push_back(&a);
        pacing |= a.pacing;
      }
    }
    std::vector<ScheduleEntry> entries;
    for (std::size_t i = 0; i < contributing.size(); ++i) {
      const Atom& a = *contributing[i];
      ExprPtr cond = a.expr;
      bool feasible = true;
      for (std::size_t j = 0; j < contributing.size() && feasible; ++j) {
        const Atom& o = *contributing[j];
        if (o.stream == a.stream) continue;  // same-stream entries are exclusive already
        bool outranks = more_restrictive(mode, o.value, a.value) || (o.value == a.value && j < i);
        if (!outranks) continue;
        if (is_true_literal(o.expr)) {
          feasible = false;
        } else {
          cond = make_and(cond, make_not(o.expr));
        }
      }
      if (feasible) entries.push_back({{pacing, cond}, a.value});
    }
    if (!entries.empty()) xi.entries.emplace(task, std::move(entries));

    if (mode == ScheduleMode::DeadlinePriority) {
      std::optional<TimeUs> bound;
      for (const auto& [p, dl] : input_deadlines) {
        if (p.subset_of(task) && (!bound || dl < *bound)) bound = dl;
      }
      if (!bound) bound = default_deadline;
      if (bound) xi.overdue_bounds.emplace(task, *bound);
    }
  }
  return xi;
}

namespace {

/// Reads stream values of a finished model at a chosen step.
class ModelEnv : public EvalEnv {
 public:
  explicit ModelEnv(const EvaluationModel& model) : model_(model), present_(model.streams.size()) {
    for (std::size_t s = 0; s < model.streams.size(); ++s) {
      index_.emplace(model.streams[s], s);
      for (std::size_t t = 0; t < model.steps(); ++t) {
        if (model.cells[s][t]) present_[s].push_back(t);
      }
    }
  }

  void at(std::size_t step) { step_ = step; }

  Cell sync(const std::string& stream) const override { return model_.cells[find(stream)][step_]; }
  Cell offset(const std::string& stream, std::uint32_t k) const override { return back(find(stream), k, false); }
  Cell hold(const std::string& stream) const override { return back(find(stream), 1, true); }
  TimeUs now() const override { return model_.times[step_]; }

 private:
  std::size_t find(const std::string& stream) const {
    auto it = index_.find(stream);
    if (it == index_.end()) throw Error(ErrorKind::UnknownStream, "model has no stream '" + stream + "'");
    return it->second;
  }

  Cell back(std::size_t s, std::uint32_t k, bool inclusive) const {
    const auto& steps = present_[s];
    auto it = inclusive ? std::upper_bound(steps.begin(), steps.end(), step_)
                        : std::lower_bound(steps.begin(), steps.end(), step_);
    auto before = static_cast<std::size_t>(it - steps.begin());
    if (before < k) return std::nullopt;
    return model_.cells[s][steps[before - k]];
  }

  const EvaluationModel& model_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> present_;
  std::size_t step_ = 0;
};

InputSet present_inputs(const EvaluationModel& model, std::size_t t) {
  InputSet p;
  for (std::size_t i = 0; i < model.input_count; ++i) {
    if (model.cells[i][t]) p |= InputSet::single(i);
  }
  return p;
}

}  // namespace

ScheduleOracle::ScheduleOracle(const StaticSchedule& xi, const EvaluationModel& model) : xi_(xi), model_(model) {
  const std::size_t steps = model.steps();
  for (std::size_t t = 0; t < steps; ++t) present_.push_back(present_inputs(model, t));
  ModelEnv env(model);
  for (const auto& [task, entries] : xi.entries) {
    auto& rows = holds_[task];
    rows.assign(entries.size(), std::vector<bool>(steps, false));
    for (std::size_t t = 0; t < steps; ++t) {
      env.at(t);
      for (std::size_t e = 0; e < entries.size(); ++e) {
        const Condition& c = entries[e].condition;
        if (!c.pacing.subset_of(present_[t])) continue;
        Cell v = evaluate(c.expr, env);
        rows[e][t] = v && std::holds_alternative<bool>(v->data) && std::get<bool>(v->data);
      }
    }
  }
}

bool ScheduleOracle::satisfied(InputSet task, std::size_t t) const { return task.subset_of(present_[t]); }

bool ScheduleOracle::condition_holds(InputSet task, std::size_t entry, std::size_t t) const {
  auto it = holds_.find(task);
  return it != holds_.end() && it->second[entry][t];
}

std::optional<std::int64_t> ScheduleOracle::priority(InputSet task, std::size_t t) const {
  auto it = holds_.find(task);
  if (it == holds_.end()) return std::nullopt;
  const auto& entries = xi_.at(task);
  for (std::size_t s = t + 1; s-- > 0;) {
    std::optional<std::int64_t> best;
    for (std::size_t e = 0; e < entries.size(); ++e) {
      if (it->second[e][s] && (!best || more_restrictive(xi_.mode, entries[e].value, *best))) best = entries[e].value;
    }
    if (best) return best;
  }
  return std::nullopt;
}

bool ScheduleOracle::overdue(InputSet task, std::size_t t) const {
  auto bound = xi_.overdue_bound(task);
  if (!bound) return false;
  // Most recent step before t at which any universe subset of the task was satisfied.
  for (std::size_t s = t; s-- > 0;) {
    for (auto sub : xi_.universe.tasks) {
      if (sub.subset_of(task) && sub.subset_of(present_[s])) return model_.times[t] - model_.times[s] > *bound;
    }
  }
  return true;
}

Verdict ScheduleOracle::deadline_verdict(InputSet task, std::size_t t) const {
  auto it = holds_.find(task);
  if (it == holds_.end() || t + 2 >= model_.steps()) return Verdict::M;
  const auto& entries = xi_.at(task);
  const TimeUs horizon = model_.times[t + 2];
  // Candidate t' runs back from t through the last satisfaction of the task (inclusive).
  for (std::size_t s = t + 1; s-- > 0;) {
    for (std::size_t e = 0; e < entries.size(); ++e) {
      if (it->second[e][s] && horizon > model_.times[s] + entries[e].value) return Verdict::Y;
    }
    if (satisfied(task, s)) break;
  }
  return Verdict::M;
}

std::map<InputSet, Verdict> ScheduleOracle::decide(std::size_t t) const {
  std::map<InputSet, Verdict> out;
  for (auto task : xi_.universe.tasks) out[task] = Verdict::M;
  if (t + 1 >= model_.steps()) return out;
  const std::size_t next = t + 1;

  if (xi_.mode == ScheduleMode::Deadline) {
    for (auto task : xi_.universe.tasks) out[task] = deadline_verdict(task, t);
    return out;
  }

  const bool dp = xi_.mode == ScheduleMode::DeadlinePriority;
  std::map<InputSet, bool> od;
  std::map<InputSet, std::optional<std::int64_t>> prio;
  for (auto task : xi_.universe.tasks) {
    od[task] = dp && overdue(task, next);
    prio[task] = priority(task, t);
  }
  for (auto task : xi_.universe.tasks) {
    if (dp && od[task]) {
      for (auto other : xi_.universe.tasks) {
        if (!od[other] && satisfied(other, next)) {
          out[task] = Verdict::Y;
          break;
        }
      }
      if (out[task] == Verdict::Y) continue;
    }
    if (!prio[task] || satisfied(task, next)) continue;
    for (auto other : xi_.universe.tasks) {
      if (!satisfied(other, next) || !prio[other] || (dp && od[other])) continue;
      if (*prio[task] > *prio[other]) {
        out[task] = Verdict::Y;
        break;
      }
    }
  }
  return out;
}

std::map<InputSet, Verdict> dynamic_decision(const StaticSchedule& xi, const EvaluationModel& model, std::size_t t) {
  return ScheduleOracle(xi, model).decide(t);
}

bool check_bandwidth(std::uint64_t b, const EvaluationModel& model, std::size_t t) {
  return static_cast<std::uint64_t>(present_inputs(model, t).size()) <= b;
}

bool valid_tasks(const TaskUniverse& universe, const EvaluationModel& model, std::size_t t,
                 const std::set<InputSet>& selected) {
  InputSet present = present_inputs(model, t);
  for (auto task : universe.tasks) {
    bool sat = task.subset_of(present);
    if (sat != (selected.count(task) > 0)) return false;
  }
  for (auto s : selected) {
    if (!s.subset_of(present)) return false;
    for (auto u : universe.tasks) {
      if (s.subset_of(u) && u.subset_of(present) && !selected.count(u)) return false;
    }
    for (auto o : selected) {
      if (universe.contains(s | o) && !selected.count(s | o)) return false;
    }
  }
  return true;
}

std::string task_label(const Specification& spec, InputSet task) { return "{" + join_inputs(spec, task, ",") + "}"; }

std::vector<ScheduleViolation> check_scheduled_model(const Specification& model_spec, const StaticSchedule& xi,
                                                     std::uint64_t b, const EvaluationModel& model) {
  std::vector<ScheduleViolation> out;
  for (const auto& v : verify_model(model_spec, model)) {
    out.push_back({"semantic", v.stream, v.step, v.time, v.detail});
  }
  if (!out.empty() && out.front().subject.empty()) return out;  // malformed model

  ScheduleOracle oracle(xi, model);
  for (std::size_t t = 0; t < model.steps(); ++t) {
    if (!check_bandwidth(b, model, t)) {
      out.push_back({"bandwidth", "", t, model.times[t],
                     std::to_string(present_inputs(model, t).size()) + " inputs present, bound " + std::to_string(b)});
    }
    if (t + 1 >= model.steps()) continue;
    for (const auto& [task, verdict] : oracle.decide(t)) {
      bool sat = oracle.satisfied(task, t + 1);
      if ((verdict == Verdict::Y && !sat) || (verdict == Verdict::N && sat)) {
        out.push_back({"schedule", task_label(model_spec, task), t + 1, model.times[t + 1],
                       verdict == Verdict::Y ? "required task not evaluated" : "forbidden task evaluated"});
      }
    }
  }
  return out;
}

std::string to_json_line(const ScheduleViolation& v) {
  nlohmann::json j;
  j["kind"] = v.kind;
  j[v.kind == "schedule" ? "task" : "stream"] = v.subject;
  j["step"] = v.step;
  j["time"] = to_seconds(v.time);
  j["detail"] = v.detail;
  return j.dump();
}

}  // namespace lola
