#include "lolasched/translator.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "lolasched/error.hpp"
#include "lolasched/parser.hpp"

namespace lola {

const TaskStreams* TranslationOutput::find(InputSet task) const {
  for (const auto& t : task_table) {
    if (t.task == task) return &t;
  }
  return nullptr;
}

std::string TranslationOutput::text() const { return print_spec(plain_spec); }

std::string TranslationOutput::task_table_json() const {
  nlohmann::json j;
  j["mode"] = to_string(mode);
  j["tasks"] = nlohmann::json::array();
  for (const auto& t : task_table) {
    nlohmann::json e;
    std::vector<std::string> inputs;
    for (auto i : t.task.indices()) inputs.push_back(plain_spec.inputs[i].name);
    e["inputs"] = inputs;
    e["schedule"] = t.schedule ? nlohmann::json(*t.schedule) : nlohmann::json();
    e["last"] = t.last ? nlohmann::json(*t.last) : nlohmann::json();
    e["overdue"] = t.overdue ? nlohmann::json(*t.overdue) : nlohmann::json();
    e["deadline"] = t.deadline ? nlohmann::json(to_seconds(*t.deadline)) : nlohmann::json();
    j["tasks"].push_back(e);
  }
  return j.dump(2) + "\n";
}

namespace {

void flatten_and(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (auto b = std::get_if<Expr::Binary>(&e->node); b && b->op == BinaryOp::And) {
    flatten_and(b->lhs, out);
    flatten_and(b->rhs, out);
    return;
  }
  out.push_back(e);
}

/// Drops conjuncts `!w` where `w` is the full condition of an earlier clause
/// (clauses are tried in order, so `w` is already known to be false) and
/// duplicate conjuncts.
ExprPtr simplify_guard(const ExprPtr& cond, const std::vector<ExprPtr>& earlier) {
  std::vector<ExprPtr> parts, kept;
  flatten_and(cond, parts);
  for (const auto& p : parts) {
    if (is_true_literal(p)) continue;
    if (auto u = std::get_if<Expr::Unary>(&p->node); u && u->op == UnaryOp::Not) {
      bool known = std::any_of(earlier.begin(), earlier.end(), [&](const ExprPtr& w) { return same_expr(w, u->arg); });
      if (known) continue;
    }
    if (std::any_of(kept.begin(), kept.end(), [&](const ExprPtr& k) { return same_expr(k, p); })) continue;
    kept.push_back(p);
  }
  ExprPtr out = make_bool(true);
  for (const auto& k : kept) out = make_and(out, k);
  return out;
}

bool declaration_order(InputSet a, InputSet b) { return a.indices() < b.indices(); }

}  // namespace

TranslationOutput translate(const Specification& spec, const StaticSchedule& xi) {
  TranslationOutput out;
  out.mode = xi.mode;
  Specification& plain = out.plain_spec;
  plain = spec;
  for (auto& in : plain.inputs) in.annotation.reset();
  for (auto& o : plain.outputs) {
    for (auto& c : o.clauses) c.annotation.reset();
  }

  std::set<std::string> taken;
  for (const auto& in : plain.inputs) taken.insert(in.name);
  for (const auto& o : plain.outputs) taken.insert(o.name);
  auto fresh = [&](const std::string& base) {
    std::string name = base;
    for (int k = 1; taken.count(name); ++k) name = base + "_" + std::to_string(k);
    taken.insert(name);
    return name;
  };

  std::vector<InputSet> gens = xi.universe.generators;
  std::sort(gens.begin(), gens.end(), declaration_order);
  const bool track_all = !xi.overdue_bounds.empty();

  // Names first, so overdue streams can refer to the last_ streams of every subset.
  for (auto g : gens) {
    TaskStreams ts;
    ts.task = g;
    const std::string suffix = join_inputs(plain, g, "_");
    bool scheduled = !xi.at(g).empty();
    if (scheduled) ts.schedule = fresh("schedule_" + suffix);
    if (scheduled || track_all) ts.last = fresh("last_" + suffix);
    ts.deadline = xi.overdue_bound(g);
    if (ts.deadline) ts.overdue = fresh("overdue_" + suffix);
    if (ts.schedule || ts.last) out.task_table.push_back(ts);
  }

  for (const auto& ts : out.task_table) {
    if (ts.schedule) {
      auto entries = xi.at(ts.task);
      std::stable_sort(entries.begin(), entries.end(), [&](const ScheduleEntry& a, const ScheduleEntry& b) {
        return more_restrictive(xi.mode, a.value, b.value);
      });
      OutputDecl o;
      o.name = *ts.schedule;
      std::vector<ExprPtr> earlier;
      for (const auto& e : entries) {
        EvalClause c;
        c.pacing = pacing_of(plain, e.condition.pacing);
        ExprPtr guard = simplify_guard(e.condition.expr, earlier);
        if (!is_true_literal(guard)) c.when = guard;
        c.with = xi.mode == ScheduleMode::Deadline ? make_constant(Value(to_seconds(e.value)))
                                                   : make_constant(Value(e.value), true);
        o.clauses.push_back(c);
        earlier.push_back(e.condition.expr);
        if (!c.when) break;  // later clauses are unreachable
      }
      plain.outputs.push_back(o);
    }
    if (ts.last) {
      OutputDecl o;
      o.name = *ts.last;
      EvalClause c;
      c.pacing = pacing_of(plain, ts.task);
      c.with = make_now();
      o.clauses.push_back(c);
      plain.outputs.push_back(o);
    }
  }

  for (const auto& ts : out.task_table) {
    if (!ts.overdue) continue;
    std::vector<ExprPtr> lasts;
    for (const auto& other : out.task_table) {
      if (other.last && other.task.subset_of(ts.task)) {
        lasts.push_back(make_hold(*other.last, make_constant(Value(-1e300))));
      }
    }
    ExprPtr latest = lasts.size() == 1 ? lasts[0] : make_nary(NaryOp::Max, lasts);
    OutputDecl o;
    o.name = *ts.overdue;
    EvalClause c;
    c.pacing = PacingType{true, {}};
    c.with = make_binary(BinaryOp::Gt, make_binary(BinaryOp::Sub, make_now(), latest),
                         make_constant(Value(to_seconds(*ts.deadline))));
    o.clauses.push_back(c);
    plain.outputs.push_back(o);
  }

  analyze(plain);
  return out;
}

StaticSchedule static_schedule_for(const Specification& spec, ScheduleMode mode) {
  Specification a = analyze(spec);
  return build_static_schedule(a, derive_annotation_map(a), build_task_universe(a), mode,
                               a.config.default_deadline);
}

TranslationOutput translate(const Specification& spec, ScheduleMode mode) {
  return translate(spec, static_schedule_for(spec, mode));
}

}  // namespace lola
