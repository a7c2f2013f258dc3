#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lolasched/error.hpp"
#include "lolasched/time.hpp"
#include "lolasched/value.hpp"

namespace lola {

enum class UnaryOp { Neg, Not, Abs, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class NaryOp { Min, Max };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Expression tree. Nodes are immutable and freely shared between
/// specifications (the translator reuses user conditions verbatim).
struct Expr {
  struct Constant {
    Value value;
    bool int_literal = false;  // written without a decimal point
  };
  /// Synchronous access to the current value of a stream.
  struct StreamRef {
    std::string name;
  };
  /// `s.offset(by: -k).defaults(to: d)`: k-th previous value of s.
  struct Offset {
    std::string name;
    std::uint32_t distance = 1;
    ExprPtr fallback;
  };
  /// `s.hold(or: d)`: latest value of s, current step included.
  struct Hold {
    std::string name;
    ExprPtr fallback;
  };
  struct Project {
    ExprPtr tuple;
    std::size_t index = 0;
  };
  struct Now {};
  struct Unary {
    UnaryOp op;
    ExprPtr arg;
  };
  struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  struct Nary {
    NaryOp op;
    std::vector<ExprPtr> args;
  };

  std::variant<Constant, StreamRef, Offset, Hold, Project, Now, Unary, Binary, Nary> node;
  SourceLoc loc;
};

ExprPtr make_constant(Value v, bool int_literal = false, SourceLoc loc = {});
ExprPtr make_bool(bool b);
ExprPtr make_stream(std::string name, SourceLoc loc = {});
ExprPtr make_offset(std::string name, std::uint32_t distance, ExprPtr fallback, SourceLoc loc = {});
ExprPtr make_hold(std::string name, ExprPtr fallback, SourceLoc loc = {});
ExprPtr make_project(ExprPtr tuple, std::size_t index, SourceLoc loc = {});
ExprPtr make_now(SourceLoc loc = {});
ExprPtr make_unary(UnaryOp op, ExprPtr arg, SourceLoc loc = {});
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc = {});
ExprPtr make_nary(NaryOp op, std::vector<ExprPtr> args, SourceLoc loc = {});

/// Logical connectives that fold the literal `true`.
ExprPtr make_and(ExprPtr lhs, ExprPtr rhs);
ExprPtr make_not(ExprPtr arg);
bool is_true_literal(const ExprPtr& e);

/// Structural equality, ignoring source locations.
bool same_expr(const ExprPtr& a, const ExprPtr& b);

/// Annotation attached with `#[...]`. Inputs may carry both keys.
struct Annotation {
  std::optional<std::uint64_t> priority;
  std::optional<TimeUs> deadline;
  SourceLoc loc;

  friend bool operator==(const Annotation& a, const Annotation& b) {
    return a.priority == b.priority && a.deadline == b.deadline;
  }
};

/// Conjunctive pacing over input streams, or `any` (every event).
struct PacingType {
  bool any = false;
  std::vector<std::string> inputs;  // declaration order after inference

  friend bool operator==(const PacingType&, const PacingType&) = default;
};

struct EvalClause {
  std::optional<PacingType> pacing;
  ExprPtr when;  // null when omitted
  ExprPtr with;
  std::optional<Annotation> annotation;
  SourceLoc loc;
};

struct InputDecl {
  std::string name;
  Type type;
  std::optional<Annotation> annotation;
  SourceLoc loc;
};

struct OutputDecl {
  std::string name;
  std::optional<Type> declared_type;
  std::vector<EvalClause> clauses;
  bool shorthand = false;  // written as `output x := e`
  SourceLoc loc;
};

struct TriggerDecl {
  ExprPtr expr;
  std::optional<std::string> message;
  std::optional<PacingType> pacing;
  SourceLoc loc;
};

struct GlobalConfig {
  std::optional<Frequency> event_frequency;
  std::optional<std::uint64_t> bandwidth;
  std::optional<TimeUs> default_deadline;
  std::vector<std::string> imports;
};

struct Specification {
  GlobalConfig config;
  std::vector<InputDecl> inputs;
  std::vector<OutputDecl> outputs;
  std::vector<TriggerDecl> triggers;

  const InputDecl* find_input(std::string_view name) const;
  const OutputDecl* find_output(std::string_view name) const;
  bool has_stream(std::string_view name) const { return find_input(name) || find_output(name); }
  /// Declaration index of an input, or -1.
  int input_index(std::string_view name) const;
};

/// Structural equality of whole specifications, ignoring source locations.
bool same_spec(const Specification& a, const Specification& b);

/// Name used for the i-th trigger in reports.
std::string trigger_name(std::size_t index);

}  // namespace lola
