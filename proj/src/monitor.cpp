#include "lolasched/monitor.hpp"

#include <algorithm>

#include "lolasched/interpreter.hpp"
#include "lolasched/parser.hpp"

namespace lola {

int EvaluationModel::index_of(std::string_view stream) const {
  for (std::size_t i = 0; i < streams.size(); ++i) {
    if (streams[i] == stream) return static_cast<int>(i);
  }
  return -1;
}

const std::vector<Cell>& EvaluationModel::column(std::string_view stream) const {
  int i = index_of(stream);
  if (i < 0) throw Error(ErrorKind::UnknownStream, "model has no stream '" + std::string(stream) + "'");
  return cells[static_cast<std::size_t>(i)];
}

namespace {

void note_depths(const Specification& spec, const ExprPtr& e, std::vector<std::uint32_t>& depth) {
  std::vector<Access> acc;
  collect_accesses(e, acc);
  for (const auto& a : acc) {
    int idx = spec.input_index(a.name);
    std::size_t i = idx >= 0 ? static_cast<std::size_t>(idx) : 0;
    if (idx < 0) {
      for (std::size_t k = 0; k < spec.outputs.size(); ++k) {
        if (spec.outputs[k].name == a.name) i = spec.inputs.size() + k;
      }
    }
    if (a.kind == AccessKind::Offset) depth[i] = std::max(depth[i], a.distance);
  }
}

bool paced(bool any, InputSet pacing, InputSet present) { return any || pacing.subset_of(present); }

}  // namespace

CompiledSpec::CompiledSpec(const Specification& input) : spec(analyze(input)) {
  types = infer_types(spec);
  std::map<std::string, std::size_t> out_index;
  for (std::size_t k = 0; k < spec.outputs.size(); ++k) out_index[spec.outputs[k].name] = k;
  for (const auto& name : evaluation_order(spec)) order.push_back(out_index.at(name));
  for (const auto& out : spec.outputs) {
    const PacingType& p = *out.clauses.front().pacing;
    output_any.push_back(p.any);
    output_pacing.push_back(p.any ? InputSet{} : pacing_set(spec, p));
  }
  for (const auto& t : spec.triggers) {
    trigger_any.push_back(t.pacing->any);
    trigger_pacing.push_back(t.pacing->any ? InputSet{} : pacing_set(spec, *t.pacing));
  }
  // One value is always kept so holds and the scheduler can read the latest value.
  history_depth.assign(stream_count(), 1);
  for (const auto& out : spec.outputs) {
    for (const auto& c : out.clauses) {
      note_depths(spec, c.when, history_depth);
      note_depths(spec, c.with, history_depth);
    }
  }
  for (const auto& t : spec.triggers) note_depths(spec, t.expr, history_depth);
}

std::string CompiledSpec::stream_name(std::size_t i) const {
  return i < spec.inputs.size() ? spec.inputs[i].name : spec.outputs.at(i - spec.inputs.size()).name;
}

class Monitor::StepEnv : public EvalEnv {
 public:
  StepEnv(const Monitor& m, const std::vector<Cell>& cells, TimeUs now) : m_(m), cells_(cells), now_(now) {}

  Cell sync(const std::string& stream) const override { return cells_[m_.index_.at(stream)]; }
  Cell offset(const std::string& stream, std::uint32_t k) const override { return m_.past(m_.index_.at(stream), k); }
  Cell hold(const std::string& stream) const override {
    std::size_t i = m_.index_.at(stream);
    return cells_[i] ? cells_[i] : m_.past(i, 1);
  }
  TimeUs now() const override { return now_; }

 private:
  const Monitor& m_;
  const std::vector<Cell>& cells_;
  TimeUs now_;
};

Monitor::Monitor(const Specification& spec) : compiled_(spec) {
  std::size_t n = compiled_.stream_count();
  for (std::size_t i = 0; i < n; ++i) index_[compiled_.stream_name(i)] = i;
  history_.resize(n);
  for (std::size_t i = 0; i < n; ++i) history_[i].resize(compiled_.history_depth[i]);
  history_head_.assign(n, 0);
  history_size_.assign(n, 0);
}

Cell Monitor::past(std::size_t stream, std::uint32_t k) const {
  const auto& ring = history_[stream];
  if (k == 0 || k > history_size_[stream]) return std::nullopt;
  return ring[(history_head_[stream] + ring.size() - k) % ring.size()];
}

Cell Monitor::latest(std::string_view stream) const {
  auto it = index_.find(std::string(stream));
  if (it == index_.end()) throw Error(ErrorKind::UnknownStream, "unknown stream '" + std::string(stream) + "'");
  return past(it->second, 1);
}

Monitor::StepResult Monitor::eval_event(const EventInput& event) {
  const Specification& spec = compiled_.spec;
  if (event.values.size() != spec.inputs.size()) {
    throw Error(ErrorKind::EmptyEvent, "event has " + std::to_string(event.values.size()) + " input slots, expected " +
                                           std::to_string(spec.inputs.size()));
  }
  if (started_ && event.time <= last_time_) {
    throw Error(ErrorKind::NonMonotonicTime, "event at " + format_seconds(event.time) + "s is not after " +
                                                 format_seconds(last_time_) + "s");
  }
  StepResult result;
  result.cells.resize(compiled_.stream_count());
  InputSet present;
  for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
    if (!event.values[i]) continue;
    result.cells[i] = coerce(*event.values[i], spec.inputs[i].type);
    present |= InputSet::single(i);
  }
  if (present.empty()) {
    throw Error(ErrorKind::EmptyEvent, "event at " + format_seconds(event.time) + "s carries no input value");
  }

  StepEnv env(*this, result.cells, event.time);
  for (std::size_t k : compiled_.order) {
    if (!paced(compiled_.output_any[k], compiled_.output_pacing[k], present)) continue;
    const OutputDecl& out = spec.outputs[k];
    for (const auto& clause : out.clauses) {
      if (clause.when) {
        Cell w = evaluate(clause.when, env);
        if (!w || !w->as_bool()) continue;
      }
      Cell v = evaluate(clause.with, env);
      if (v) result.cells[spec.inputs.size() + k] = coerce(*v, compiled_.types.at(out.name));
      break;
    }
  }
  for (std::size_t k = 0; k < spec.triggers.size(); ++k) {
    if (!paced(compiled_.trigger_any[k], compiled_.trigger_pacing[k], present)) continue;
    Cell v = evaluate(spec.triggers[k].expr, env);
    if (v && v->as_bool()) {
      result.triggers.push_back({trigger_name(k), step_, event.time, spec.triggers[k].message.value_or("")});
    }
  }

  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    if (!result.cells[i]) continue;
    auto& ring = history_[i];
    ring[history_head_[i]] = *result.cells[i];
    history_head_[i] = (history_head_[i] + 1) % ring.size();
    history_size_[i] = std::min(history_size_[i] + 1, ring.size());
  }
  started_ = true;
  last_time_ = event.time;
  ++step_;
  return result;
}

EvaluationModel run_monitor(const Specification& spec, const std::vector<EventInput>& events,
                            std::vector<TriggerReport>* reports) {
  Monitor monitor(spec);
  EvaluationModel model;
  const CompiledSpec& c = monitor.compiled();
  for (std::size_t i = 0; i < c.stream_count(); ++i) model.streams.push_back(c.stream_name(i));
  model.input_count = c.spec.inputs.size();
  model.cells.resize(c.stream_count());
  for (const auto& ev : events) {
    auto step = monitor.eval_event(ev);
    model.times.push_back(ev.time);
    for (std::size_t i = 0; i < step.cells.size(); ++i) model.cells[i].push_back(std::move(step.cells[i]));
    if (reports) reports->insert(reports->end(), step.triggers.begin(), step.triggers.end());
  }
  return model;
}

// ---- model checking ----

namespace {

// Answers stream accesses by scanning the recorded steps of each stream.
class ScanEnv : public EvalEnv {
 public:
  ScanEnv(const std::map<std::string, std::size_t>& index, const std::vector<std::vector<Cell>>& columns,
          const std::vector<std::vector<std::size_t>>& present_steps)
      : index_(index), columns_(columns), present_(present_steps) {}

  void at(std::size_t step, TimeUs now) {
    step_ = step;
    now_ = now;
  }

  Cell sync(const std::string& stream) const override { return columns_[index_.at(stream)][step_]; }
  Cell offset(const std::string& stream, std::uint32_t k) const override { return back(index_.at(stream), k, false); }
  Cell hold(const std::string& stream) const override { return back(index_.at(stream), 1, true); }
  TimeUs now() const override { return now_; }

 private:
  Cell back(std::size_t s, std::uint32_t k, bool inclusive) const {
    const auto& steps = present_[s];
    std::uint32_t seen = 0;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      if (*it > step_ || (*it == step_ && !inclusive)) continue;
      if (++seen == k) return columns_[s][*it];
    }
    return std::nullopt;
  }

  const std::map<std::string, std::size_t>& index_;
  const std::vector<std::vector<Cell>>& columns_;
  const std::vector<std::vector<std::size_t>>& present_;
  std::size_t step_ = 0;
  TimeUs now_ = 0;
};

}  // namespace

std::vector<ModelViolation> verify_model(const Specification& input, const EvaluationModel& model) {
  std::vector<ModelViolation> violations;
  CompiledSpec c(input);
  const Specification& spec = c.spec;
  const std::size_t n = c.stream_count();
  const std::size_t steps = model.steps();

  std::vector<std::string> expected;
  for (std::size_t i = 0; i < n; ++i) expected.push_back(c.stream_name(i));
  if (model.streams != expected || model.cells.size() != n || model.input_count != spec.inputs.size()) {
    violations.push_back({"", 0, 0, "model streams do not match the specification"});
    return violations;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (model.cells[i].size() != steps) {
      violations.push_back({model.streams[i], 0, 0, "stream has a different number of steps than the time map"});
      return violations;
    }
  }
  for (std::size_t t = 1; t < steps; ++t) {
    if (model.times[t] <= model.times[t - 1]) {
      violations.push_back({"", t, model.times[t], "time map not strictly increasing"});
    }
  }

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[expected[i]] = i;
  // Inputs are copied from the model; outputs are recomputed from scratch.
  std::vector<std::vector<Cell>> columns(n, std::vector<Cell>(steps));
  std::vector<std::vector<std::size_t>> present_steps(n);
  ScanEnv env(index, columns, present_steps);

  for (std::size_t t = 0; t < steps; ++t) {
    InputSet present;
    for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
      columns[i][t] = model.cells[i][t];
      if (columns[i][t]) {
        present |= InputSet::single(i);
        present_steps[i].push_back(t);
      }
    }
    if (present.empty()) violations.push_back({"", t, model.times[t], "step carries no input value"});
    env.at(t, model.times[t]);
    for (std::size_t k : c.order) {
      const OutputDecl& out = spec.outputs[k];
      std::size_t s = spec.inputs.size() + k;
      if (!c.output_any[k] && !c.output_pacing[k].subset_of(present)) continue;
      try {
        for (const auto& clause : out.clauses) {
          if (clause.when) {
            Cell w = evaluate(clause.when, env);
            if (!w || !w->as_bool()) continue;
          }
          Cell v = evaluate(clause.with, env);
          if (v) columns[s][t] = coerce(*v, c.types.at(out.name));
          break;
        }
      } catch (const Error& e) {
        violations.push_back({out.name, t, model.times[t], std::string("evaluation failed: ") + e.what()});
      }
      if (columns[s][t]) present_steps[s].push_back(t);
    }
    for (std::size_t k = 0; k < spec.outputs.size(); ++k) {
      std::size_t s = spec.inputs.size() + k;
      if (identical(columns[s][t], model.cells[s][t])) continue;
      auto show = [](const Cell& cell) { return cell ? format_value(*cell) : std::string("absent"); };
      violations.push_back({spec.outputs[k].name, t, model.times[t],
                            "expected " + show(columns[s][t]) + ", model has " + show(model.cells[s][t])});
    }
  }
  return violations;
}

}  // namespace lola
