#include "lolasched/analysis.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace lola {

void collect_accesses(const ExprPtr& e, std::vector<Access>& out) {
  if (!e) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::StreamRef>) {
          out.push_back({AccessKind::Sync, x.name, 0});
        } else if constexpr (std::is_same_v<T, Expr::Offset>) {
          out.push_back({AccessKind::Offset, x.name, x.distance});
          collect_accesses(x.fallback, out);
        } else if constexpr (std::is_same_v<T, Expr::Hold>) {
          out.push_back({AccessKind::Hold, x.name, 0});
          collect_accesses(x.fallback, out);
        } else if constexpr (std::is_same_v<T, Expr::Project>) {
          collect_accesses(x.tuple, out);
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          collect_accesses(x.arg, out);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          collect_accesses(x.lhs, out);
          collect_accesses(x.rhs, out);
        } else if constexpr (std::is_same_v<T, Expr::Nary>) {
          for (const auto& a : x.args) collect_accesses(a, out);
        }
      },
      e->node);
}

InputSet pacing_set(const Specification& spec, const PacingType& pacing) {
  InputSet set;
  for (const auto& name : pacing.inputs) {
    int idx = spec.input_index(name);
    if (idx < 0) throw Error(ErrorKind::UnknownStream, "unknown input '" + name + "' in pacing");
    set |= InputSet::single(static_cast<std::size_t>(idx));
  }
  return set;
}

PacingType pacing_of(const Specification& spec, InputSet set) {
  PacingType p;
  for (auto i : set.indices()) p.inputs.push_back(spec.inputs.at(i).name);
  return p;
}

std::string join_inputs(const Specification& spec, InputSet set, const std::string& sep) {
  std::string out;
  for (auto i : set.indices()) {
    if (!out.empty()) out += sep;
    out += spec.inputs.at(i).name;
  }
  return out;
}

namespace {

// Output dependencies that force evaluation order: synchronous and hold accesses.
std::vector<std::string> ordering_deps(const Specification& spec, const OutputDecl& out) {
  std::vector<Access> acc;
  for (const auto& c : out.clauses) {
    collect_accesses(c.when, acc);
    collect_accesses(c.with, acc);
  }
  std::vector<std::string> deps;
  for (const auto& a : acc) {
    if (a.kind == AccessKind::Offset || !spec.find_output(a.name)) continue;
    if (std::find(deps.begin(), deps.end(), a.name) == deps.end()) deps.push_back(a.name);
  }
  return deps;
}

// Depth-first topological sort; throws on the first cycle found.
std::vector<std::string> topo_order(const Specification& spec) {
  enum class Mark { None, Active, Done };
  std::map<std::string, Mark> mark;
  std::vector<std::string> stack;
  std::vector<std::string> order;

  std::function<void(const OutputDecl&)> visit = [&](const OutputDecl& out) {
    Mark& m = mark[out.name];
    if (m == Mark::Done) return;
    if (m == Mark::Active) {
      auto it = std::find(stack.begin(), stack.end(), out.name);
      std::string cycle;
      for (; it != stack.end(); ++it) cycle += *it + " -> ";
      throw Error(ErrorKind::CyclicDependency, "cyclic dependency: " + cycle + out.name, out.loc);
    }
    m = Mark::Active;
    stack.push_back(out.name);
    for (const auto& dep : ordering_deps(spec, out)) visit(*spec.find_output(dep));
    stack.pop_back();
    mark[out.name] = Mark::Done;
    order.push_back(out.name);
  };
  for (const auto& out : spec.outputs) visit(out);
  return order;
}

// Pacing requirement of an expression set: union of the inputs reached
// through synchronous accesses. `any_only` is set when only `any`-paced
// streams were accessed.
struct Requirement {
  InputSet inputs;
  bool any_only = false;
};

}  // namespace

std::vector<std::string> evaluation_order(const Specification& spec) { return topo_order(spec); }

void check_well_defined(const Specification& spec) { topo_order(spec); }

Specification infer_pacing(const Specification& input) {
  Specification spec = input;
  if (spec.inputs.size() > kMaxInputs) {
    throw Error(ErrorKind::PacingConflict, "at most 64 input streams are supported");
  }
  std::map<std::string, PacingType> resolved;

  auto requirement = [&](const std::vector<const ExprPtr*>& exprs) {
    Requirement req;
    bool saw_any = false;
    for (const ExprPtr* e : exprs) {
      std::vector<Access> acc;
      collect_accesses(*e, acc);
      for (const auto& a : acc) {
        if (a.kind != AccessKind::Sync) continue;
        int idx = spec.input_index(a.name);
        if (idx >= 0) {
          req.inputs |= InputSet::single(static_cast<std::size_t>(idx));
          continue;
        }
        const PacingType& p = resolved.at(a.name);
        if (p.any) {
          saw_any = true;
        } else {
          req.inputs |= pacing_set(spec, p);
        }
      }
    }
    req.any_only = req.inputs.empty() && saw_any;
    return req;
  };

  auto resolve = [&](const std::optional<PacingType>& explicit_pacing, const Requirement& req,
                     const std::string& what, SourceLoc loc) -> PacingType {
    if (explicit_pacing) {
      if (explicit_pacing->any) {
        if (!req.inputs.empty()) {
          throw Error(ErrorKind::PacingConflict,
                      what + ": |@any| cannot access streams paced by specific inputs synchronously", loc);
        }
        return *explicit_pacing;
      }
      InputSet given = pacing_set(spec, *explicit_pacing);
      if (!req.inputs.subset_of(given)) {
        throw Error(ErrorKind::PacingConflict,
                    what + ": pacing {" + join_inputs(spec, given, ", ") + "} does not cover accessed inputs " +
                        "{" + join_inputs(spec, req.inputs, ", ") + "}",
                    loc);
      }
      return pacing_of(spec, given);
    }
    if (!req.inputs.empty()) return pacing_of(spec, req.inputs);
    if (req.any_only) return PacingType{true, {}};
    throw Error(ErrorKind::EmptyPacing, what + " accesses no input stream; give an explicit pacing", loc);
  };

  for (const auto& name : topo_order(spec)) {
    auto it = std::find_if(spec.outputs.begin(), spec.outputs.end(), [&](const auto& o) { return o.name == name; });
    OutputDecl& out = *it;
    std::optional<PacingType> explicit_pacing;
    for (const auto& c : out.clauses) {
      if (!c.pacing) continue;
      PacingType p = c.pacing->any ? *c.pacing : pacing_of(spec, pacing_set(spec, *c.pacing));
      if (explicit_pacing && !(*explicit_pacing == p)) {
        throw Error(ErrorKind::PacingConflict, "output '" + out.name + "': clauses have different pacings", c.loc);
      }
      explicit_pacing = p;
    }
    std::vector<const ExprPtr*> exprs;
    for (const auto& c : out.clauses) {
      exprs.push_back(&c.when);
      exprs.push_back(&c.with);
    }
    PacingType p = resolve(explicit_pacing, requirement(exprs), "output '" + out.name + "'", out.loc);
    for (auto& c : out.clauses) c.pacing = p;
    resolved[out.name] = p;
  }
  for (std::size_t i = 0; i < spec.triggers.size(); ++i) {
    auto& t = spec.triggers[i];
    t.pacing = resolve(t.pacing, requirement({&t.expr}), trigger_name(i), t.loc);
  }
  return spec;
}

// ---- types ----

namespace {

class TypeChecker {
 public:
  explicit TypeChecker(std::map<std::string, Type>& env) : env_(env) {}

  // Returns nullopt when the expression depends on a stream whose type is not known yet.
  std::optional<Type> infer(const ExprPtr& e) {
    return std::visit(
        [&](const auto& x) -> std::optional<Type> {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::Constant>) {
            if (x.int_literal) return Type::int_literal();
            if (x.value.is_bool()) return Type::boolean();
            if (std::holds_alternative<double>(x.value.data)) return Type::float64();
            if (std::holds_alternative<std::uint64_t>(x.value.data)) return Type::uint64();
            if (std::holds_alternative<std::int64_t>(x.value.data)) return Type::int64();
            fail(e, "tuple constants are not supported");
          } else if constexpr (std::is_same_v<T, Expr::StreamRef>) {
            return lookup(x.name);
          } else if constexpr (std::is_same_v<T, Expr::Offset> || std::is_same_v<T, Expr::Hold>) {
            auto fb = infer(x.fallback);
            auto st = lookup(x.name);
            if (!st) return fb;
            if (!fb) return st;
            auto u = unify(*st, *fb);
            if (!u) fail(e, "default of type " + to_string(*fb) + " does not match stream '" + x.name + "' of type " +
                                to_string(*st));
            return u;
          } else if constexpr (std::is_same_v<T, Expr::Project>) {
            auto t = infer(x.tuple);
            if (!t) return std::nullopt;
            if (t->kind != Type::Kind::Tuple) fail(e, "projection on non-tuple type " + to_string(*t));
            if (x.index >= t->elements.size()) fail(e, "tuple index " + std::to_string(x.index) + " out of range");
            return t->elements[x.index];
          } else if constexpr (std::is_same_v<T, Expr::Now>) {
            return Type::float64();
          } else if constexpr (std::is_same_v<T, Expr::Unary>) {
            auto t = infer(x.arg);
            if (!t) return std::nullopt;
            switch (x.op) {
              case UnaryOp::Not:
                expect_bool(x.arg, *t);
                return Type::boolean();
              case UnaryOp::Neg:
              case UnaryOp::Abs:
                expect_numeric(x.arg, *t);
                if (t->kind == Type::Kind::UInt64) fail(e, "cannot negate an unsigned value");
                return t;
              case UnaryOp::Sqrt:
                expect_numeric(x.arg, *t);
                if (!unify(*t, Type::float64())) fail(e, "sqrt expects Float64");
                return Type::float64();
            }
            return std::nullopt;
          } else if constexpr (std::is_same_v<T, Expr::Binary>) {
            auto l = infer(x.lhs);
            auto r = infer(x.rhs);
            if (!l || !r) return std::nullopt;
            switch (x.op) {
              case BinaryOp::And:
              case BinaryOp::Or:
                expect_bool(x.lhs, *l);
                expect_bool(x.rhs, *r);
                return Type::boolean();
              case BinaryOp::Eq:
              case BinaryOp::Ne:
                if (!unify(*l, *r) || l->kind == Type::Kind::Tuple) {
                  fail(e, "cannot compare " + to_string(*l) + " with " + to_string(*r));
                }
                return Type::boolean();
              case BinaryOp::Lt:
              case BinaryOp::Le:
              case BinaryOp::Gt:
              case BinaryOp::Ge:
                expect_numeric(x.lhs, *l);
                expect_numeric(x.rhs, *r);
                if (!unify(*l, *r)) fail(e, "cannot compare " + to_string(*l) + " with " + to_string(*r));
                return Type::boolean();
              default: {
                expect_numeric(x.lhs, *l);
                expect_numeric(x.rhs, *r);
                auto u = unify(*l, *r);
                if (!u) fail(e, "operands have types " + to_string(*l) + " and " + to_string(*r));
                return u;
              }
            }
          } else {
            std::optional<Type> acc;
            bool pending = false;
            for (const auto& a : x.args) {
              auto t = infer(a);
              if (!t) {
                pending = true;
                continue;
              }
              expect_numeric(a, *t);
              if (!acc) {
                acc = t;
              } else {
                acc = unify(*acc, *t);
                if (!acc) fail(e, "min/max arguments have different types");
              }
            }
            if (pending) return std::nullopt;
            return acc;
          }
        },
        e->node);
  }

  [[noreturn]] static void fail(const ExprPtr& e, const std::string& msg) { throw Error(ErrorKind::Type, msg, e->loc); }

 private:
  std::optional<Type> lookup(const std::string& name) {
    auto it = env_.find(name);
    if (it == env_.end()) return std::nullopt;
    return it->second;
  }
  static void expect_bool(const ExprPtr& e, const Type& t) {
    if (t.kind != Type::Kind::Bool) fail(e, "expected Bool, found " + to_string(t));
  }
  static void expect_numeric(const ExprPtr& e, const Type& t) {
    if (!t.is_numeric()) fail(e, "expected a numeric type, found " + to_string(t));
  }

  std::map<std::string, Type>& env_;
};

// Type of one output given the current environment, nullopt if still pending.
std::optional<Type> output_type(TypeChecker& tc, const OutputDecl& out) {
  std::optional<Type> acc = out.declared_type;
  bool pending = false;
  for (const auto& c : out.clauses) {
    if (c.when) {
      auto w = tc.infer(c.when);
      if (w && w->kind != Type::Kind::Bool) TypeChecker::fail(c.when, "when-condition must be Bool");
    }
    auto t = tc.infer(c.with);
    if (!t) {
      pending = true;
      continue;
    }
    if (!acc) {
      acc = t;
      continue;
    }
    auto u = unify(*acc, *t);
    if (!u) {
      throw Error(ErrorKind::Type,
                  "output '" + out.name + "' has type " + to_string(*acc) + " but a clause yields " + to_string(*t),
                  c.with->loc);
    }
    acc = u;
  }
  if (pending && !out.declared_type) return std::nullopt;
  return acc ? std::optional<Type>(concretize(*acc)) : std::nullopt;
}

}  // namespace

std::map<std::string, Type> infer_types(const Specification& spec) {
  std::map<std::string, Type> env;
  for (const auto& in : spec.inputs) env[in.name] = in.type;
  for (const auto& out : spec.outputs) {
    if (out.declared_type) env[out.name] = concretize(*out.declared_type);
  }
  TypeChecker tc(env);
  std::set<std::string> open;
  for (const auto& out : spec.outputs) {
    if (!out.declared_type) open.insert(out.name);
  }
  bool progress = true;
  while (!open.empty() && progress) {
    progress = false;
    for (const auto& out : spec.outputs) {
      if (!open.count(out.name)) continue;
      if (auto t = output_type(tc, out)) {
        env[out.name] = *t;
        open.erase(out.name);
        progress = true;
      }
    }
  }
  if (!open.empty()) {
    const auto* out = spec.find_output(*open.begin());
    throw Error(ErrorKind::Type, "cannot infer the type of '" + out->name + "'", out->loc);
  }
  // Final pass with every type known checks offsets against their streams.
  for (const auto& out : spec.outputs) {
    auto t = output_type(tc, out);
    if (!t || !unify(*t, env[out.name])) {
      throw Error(ErrorKind::Type, "inconsistent type for '" + out.name + "'", out.loc);
    }
  }
  for (const auto& trig : spec.triggers) {
    auto t = tc.infer(trig.expr);
    if (!t || t->kind != Type::Kind::Bool) TypeChecker::fail(trig.expr, "trigger expression must be Bool");
  }
  return env;
}

Specification analyze(const Specification& spec) {
  check_well_defined(spec);
  Specification out = infer_pacing(spec);
  infer_types(out);
  return out;
}

// ---- annotation map ----

const StreamAnnotations* AnnotationMap::find(std::string_view stream) const {
  for (const auto& s : streams) {
    if (s.stream == stream) return &s;
  }
  return nullptr;
}

AnnotationMap derive_annotation_map(const Specification& input) {
  const Specification spec = infer_pacing(input);
  AnnotationMap map;
  for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
    const auto& in = spec.inputs[i];
    if (!in.annotation) continue;
    StreamAnnotations sa;
    sa.stream = in.name;
    sa.pacing = InputSet::single(i);
    sa.entries.push_back({{sa.pacing, make_bool(true)}, *in.annotation});
    sa.exhaustive = true;
    map.streams.push_back(std::move(sa));
  }
  for (const auto& out : spec.outputs) {
    StreamAnnotations sa;
    sa.stream = out.name;
    const PacingType& p = *out.clauses.front().pacing;
    // Streams paced by every event have no task; their annotations cannot be scheduled.
    if (p.any) continue;
    sa.pacing = pacing_set(spec, p);
    ExprPtr negated_prefix = make_bool(true);
    bool all_annotated = true;
    bool covered = false;
    for (const auto& c : out.clauses) {
      if (c.annotation) {
        sa.entries.push_back({{sa.pacing, make_and(negated_prefix, c.when ? c.when : make_bool(true))}, *c.annotation});
      } else {
        all_annotated = false;
      }
      if (is_true_literal(c.when)) {
        covered = true;
        break;  // later clauses can never fire
      }
      negated_prefix = make_and(negated_prefix, make_not(c.when));
    }
    if (sa.entries.empty()) continue;
    sa.exhaustive = covered && all_annotated;
    map.streams.push_back(std::move(sa));
  }
  return map;
}

}  // namespace lola
