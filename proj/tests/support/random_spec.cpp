#include "support/random_spec.hpp"

#include <algorithm>

#include "lolasched/analysis.hpp"

namespace lola::test {

namespace {

using Rng = std::mt19937_64;

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }
int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

struct StreamInfo {
  std::string name;
  Type type;
  InputSet pacing;
};

class Generator {
 public:
  Generator(Rng& rng, const GenOptions& opts) : rng_(rng), opts_(opts) {}

  Specification run() {
    Specification spec;
    int n_inputs = uniform(rng_, 1, opts_.max_inputs);
    for (int i = 0; i < n_inputs; ++i) {
      InputDecl in;
      in.name = "i" + std::to_string(i);
      int t = uniform(rng_, 0, 9);
      in.type = t < 6 ? Type::float64() : t < 9 ? Type::int64() : Type::boolean();
      in.annotation = input_annotation();
      streams_.push_back({in.name, in.type, InputSet::single(static_cast<std::size_t>(i))});
      spec.inputs.push_back(std::move(in));
    }
    n_inputs_ = n_inputs;
    int n_outputs = uniform(rng_, 1, opts_.max_outputs);
    for (int k = 0; k < n_outputs; ++k) spec.outputs.push_back(output(k));
    int n_triggers = uniform(rng_, 0, opts_.max_triggers);
    for (int k = 0; k < n_triggers; ++k) {
      TriggerDecl t;
      scope_ = random_pacing();
      used_ = {};
      t.expr = gen(Type::boolean(), opts_.max_depth);
      if (used_.empty() || chance(rng_, 0.3)) t.pacing = pacing_type(used_ | scope_);
      if (chance(rng_, 0.5)) t.message = "violation " + std::to_string(k);
      spec.triggers.push_back(std::move(t));
    }
    return spec;
  }

 private:
  std::optional<Annotation> input_annotation() {
    Annotation a;
    switch (opts_.style) {
      case AnnotationStyle::None:
        return std::nullopt;
      case AnnotationStyle::Priority:
        if (!chance(rng_, 0.5)) return std::nullopt;
        a.priority = priority();
        return a;
      case AnnotationStyle::Deadline:
        if (!chance(rng_, 0.5)) return std::nullopt;
        a.deadline = deadline();
        return a;
      case AnnotationStyle::DeadlinePriority:
        if (chance(rng_, 0.6)) a.priority = priority();
        if (chance(rng_, 0.6)) a.deadline = deadline();
        if (!a.priority && !a.deadline) return std::nullopt;
        return a;
    }
    return std::nullopt;
  }

  std::optional<Annotation> clause_annotation() {
    if (opts_.style == AnnotationStyle::None || !chance(rng_, 0.6)) return std::nullopt;
    Annotation a;
    if (opts_.style == AnnotationStyle::Deadline) {
      a.deadline = deadline();
    } else {
      a.priority = priority();
    }
    return a;
  }

  std::uint64_t priority() {
    static const std::vector<std::uint64_t> levels{1, 5, 10, 0, 2, 7, 20};
    return pick(rng_, levels);
  }
  // Multiples of 0.25 s between 1.5 s and 6 s.
  TimeUs deadline() { return static_cast<TimeUs>(uniform(rng_, 6, 24)) * 250'000; }

  InputSet random_pacing() {
    InputSet s;
    while (s.empty()) {
      for (int i = 0; i < n_inputs_; ++i) {
        if (chance(rng_, 0.4)) s |= InputSet::single(static_cast<std::size_t>(i));
      }
    }
    return s;
  }

  PacingType pacing_type(InputSet set) const {
    PacingType p;
    for (auto i : set.indices()) p.inputs.push_back(streams_[i].name);
    return p;
  }

  OutputDecl output(int k) {
    OutputDecl out;
    out.name = "o" + std::to_string(k);
    int t = uniform(rng_, 0, 9);
    Type type = t < 5 ? Type::float64() : t < 7 ? Type::int64() : Type::boolean();
    scope_ = random_pacing();
    used_ = {};
    self_ = StreamInfo{out.name, type, {}};
    int n_clauses = uniform(rng_, 1, 3);
    bool counter = type == Type::int64() && chance(rng_, 0.4);
    for (int c = 0; c < n_clauses; ++c) {
      EvalClause clause;
      bool last = c + 1 == n_clauses;
      if (!last || chance(rng_, 0.5)) clause.when = gen(Type::boolean(), opts_.max_depth - 1);
      if (counter && c == 0) {
        clause.with = make_binary(BinaryOp::Add, make_offset(out.name, 1, make_constant(Value(std::int64_t{0}), true)),
                                  make_constant(Value(std::int64_t{1}), true));
      } else {
        clause.with = gen(type, opts_.max_depth);
      }
      clause.annotation = clause_annotation();
      out.clauses.push_back(std::move(clause));
    }
    InputSet pacing = used_;
    if (pacing.empty() || chance(rng_, 0.4)) {
      pacing = used_ | scope_;
      PacingType p = pacing_type(pacing);
      for (auto& c : out.clauses) c.pacing = p;
    } else if (out.clauses.size() > 1 && chance(rng_, 0.3)) {
      out.clauses.back().pacing = pacing_type(pacing);
    }
    out.shorthand = out.clauses.size() == 1 && !out.clauses[0].when && !out.clauses[0].annotation && chance(rng_, 0.5);
    streams_.push_back({out.name, type, pacing});
    self_.reset();
    return out;
  }

  // Streams of a type usable synchronously within the current scope.
  std::vector<const StreamInfo*> sync_candidates(const Type& type) const {
    std::vector<const StreamInfo*> out;
    for (const auto& s : streams_) {
      if (s.type == type && s.pacing.subset_of(scope_)) out.push_back(&s);
    }
    return out;
  }
  std::vector<const StreamInfo*> any_candidates(const Type& type) const {
    std::vector<const StreamInfo*> out;
    for (const auto& s : streams_) {
      if (s.type == type) out.push_back(&s);
    }
    if (self_ && self_->type == type) out.push_back(&*self_);
    return out;
  }

  ExprPtr constant(const Type& type) {
    if (type.kind == Type::Kind::Bool) return make_bool(chance(rng_, 0.5));
    if (type.kind == Type::Kind::Int64) return make_constant(Value(std::int64_t{uniform(rng_, -5, 20)}), true);
    static const std::vector<double> floats{0.0, 1.0, -1.0, 2.5, 10.0, -0.5, 0.125, 100.0, 1e-3};
    return make_constant(Value(pick(rng_, floats)));
  }

  ExprPtr leaf(const Type& type) {
    int r = uniform(rng_, 0, 9);
    if (r < 5) {
      auto c = sync_candidates(type);
      if (!c.empty()) {
        const StreamInfo* s = pick(rng_, c);
        used_ |= s->pacing;
        return make_stream(s->name);
      }
    } else if (r < 7) {
      auto c = any_candidates(type);
      if (!c.empty()) {
        const StreamInfo* s = pick(rng_, c);
        return make_offset(s->name, static_cast<std::uint32_t>(uniform(rng_, 1, 3)), constant(type));
      }
    } else if (r < 8) {
      // Holds may only read streams declared before this one.
      std::vector<const StreamInfo*> c;
      for (const auto& s : streams_) {
        if (s.type == type) c.push_back(&s);
      }
      if (!c.empty()) return make_hold(pick(rng_, c)->name, constant(type));
    } else if (r < 9 && type.kind == Type::Kind::Float64) {
      return make_now();
    }
    return constant(type);
  }

  ExprPtr gen(const Type& type, int depth) {
    if (depth <= 0 || chance(rng_, 0.3)) return leaf(type);
    switch (type.kind) {
      case Type::Kind::Bool: {
        int r = uniform(rng_, 0, 5);
        if (r < 3) {
          Type operand = chance(rng_, 0.7) ? Type::float64() : Type::int64();
          static const std::vector<BinaryOp> cmp{BinaryOp::Lt, BinaryOp::Le, BinaryOp::Gt,
                                                 BinaryOp::Ge, BinaryOp::Eq, BinaryOp::Ne};
          return make_binary(pick(rng_, cmp), gen(operand, depth - 1), gen(operand, depth - 1));
        }
        if (r == 3) return make_not(gen(type, depth - 1));
        return make_binary(chance(rng_, 0.5) ? BinaryOp::And : BinaryOp::Or, gen(type, depth - 1),
                           gen(type, depth - 1));
      }
      case Type::Kind::Int64:
      case Type::Kind::Float64: {
        bool is_float = type.kind == Type::Kind::Float64;
        int r = uniform(rng_, 0, is_float ? 8 : 6);
        switch (r) {
          case 0:
          case 1:
          case 2: {
            static const std::vector<BinaryOp> arith{BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul};
            return make_binary(pick(rng_, arith), gen(type, depth - 1), gen(type, depth - 1));
          }
          case 3: {
            auto arg = gen(type, depth - 1);
            // A minus sign directly before a literal would re-parse as a negative literal.
            if (std::holds_alternative<Expr::Constant>(arg->node)) return make_unary(UnaryOp::Abs, arg);
            return make_unary(UnaryOp::Neg, arg);
          }
          case 4:
            return make_unary(UnaryOp::Abs, gen(type, depth - 1));
          case 5:
          case 6: {
            std::vector<ExprPtr> args;
            int n = uniform(rng_, 1, 3);
            for (int i = 0; i < n; ++i) args.push_back(gen(type, depth - 1));
            return make_nary(chance(rng_, 0.5) ? NaryOp::Min : NaryOp::Max, std::move(args));
          }
          case 7:
            return make_binary(BinaryOp::Div, gen(type, depth - 1), gen(type, depth - 1));
          default:
            return make_unary(UnaryOp::Sqrt, make_unary(UnaryOp::Abs, gen(type, depth - 1)));
        }
      }
      default:
        return leaf(type);
    }
  }

  Rng& rng_;
  const GenOptions& opts_;
  int n_inputs_ = 0;
  std::vector<StreamInfo> streams_;
  std::optional<StreamInfo> self_;
  InputSet scope_;
  InputSet used_;
};

}  // namespace

Specification random_spec(std::mt19937_64& rng, const GenOptions& opts) { return Generator(rng, opts).run(); }

Value random_value(std::mt19937_64& rng, const Type& type) {
  switch (type.kind) {
    case Type::Kind::Bool:
      return Value(chance(rng, 0.5));
    case Type::Kind::Int64:
      return Value(std::int64_t{uniform(rng, -10, 30)});
    case Type::Kind::UInt64:
      return Value(static_cast<std::uint64_t>(uniform(rng, 0, 30)));
    case Type::Kind::Tuple: {
      Tuple t;
      for (const auto& e : type.elements) t.push_back(random_value(rng, e));
      return Value(std::move(t));
    }
    default: {
      // Mostly small grid values so equality comparisons fire now and then.
      if (chance(rng, 0.5)) return Value(static_cast<double>(uniform(rng, -8, 24)) * 0.5);
      return Value(std::uniform_real_distribution<double>(-20.0, 40.0)(rng));
    }
  }
}

std::vector<EventInput> random_trace(std::mt19937_64& rng, const Specification& spec, std::size_t events,
                                     double presence) {
  std::vector<EventInput> out;
  TimeUs t = 0;
  for (std::size_t k = 0; k < events; ++k) {
    t += static_cast<TimeUs>(uniform(rng, 1, 2000)) * 500;
    EventInput ev;
    ev.time = t;
    ev.values.resize(spec.inputs.size());
    bool any = false;
    for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
      if (chance(rng, presence)) {
        ev.values[i] = random_value(rng, spec.inputs[i].type);
        any = true;
      }
    }
    if (!any) {
      std::size_t i = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(spec.inputs.size()) - 1));
      ev.values[i] = random_value(rng, spec.inputs[i].type);
    }
    out.push_back(std::move(ev));
  }
  return out;
}

}  // namespace lola::test
