#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lolasched/ast.hpp"
#include "lolasched/input_set.hpp"

namespace lola {

enum class AccessKind { Sync, Offset, Hold };

struct Access {
  AccessKind kind;
  std::string name;
  std::uint32_t distance = 0;  // Offset only
};

/// Every stream access in `e`, fallbacks included, in syntactic order.
void collect_accesses(const ExprPtr& e, std::vector<Access>& out);

/// Resolves every clause's pacing: the explicit `|@...|` if given, otherwise
/// the union of the pacings of all synchronously accessed streams. Triggers
/// are resolved the same way. Idempotent.
Specification infer_pacing(const Specification& spec);

/// Rejects cycles among synchronous (offset-free) accesses between outputs.
void check_well_defined(const Specification& spec);

/// Value types of all streams (inputs and outputs), inferred to a fixpoint so
/// that self-referencing offsets resolve through their defaults.
std::map<std::string, Type> infer_types(const Specification& spec);

/// Full front-end: pacing, well-definedness and type checks. Returns the
/// pacing-annotated specification.
Specification analyze(const Specification& spec);

/// Converts a resolved conjunctive pacing into an input set.
InputSet pacing_set(const Specification& spec, const PacingType& pacing);
PacingType pacing_of(const Specification& spec, InputSet set);

/// Names of the inputs in `set`, joined with `sep` in declaration order.
std::string join_inputs(const Specification& spec, InputSet set, const std::string& sep);

/// Output names in an order where every synchronous dependency comes first.
std::vector<std::string> evaluation_order(const Specification& spec);

/// A schedule condition: a pacing together with a boolean filter expression.
struct Condition {
  InputSet pacing;
  ExprPtr expr;  // never null; literal true when unconditional
};

struct AnnotationEntry {
  Condition condition;
  Annotation annotation;
};

/// Annotations of one stream, conditions mutually exclusive by construction.
struct StreamAnnotations {
  std::string stream;
  InputSet pacing;
  std::vector<AnnotationEntry> entries;
  /// True when the conditions cover every step at which the stream's pacing holds.
  bool exhaustive = false;
};

/// Maps each annotated stream to its guarded annotations (inputs first, then
/// outputs, in declaration order).
struct AnnotationMap {
  std::vector<StreamAnnotations> streams;

  const StreamAnnotations* find(std::string_view stream) const;
  bool empty() const { return streams.empty(); }
};

AnnotationMap derive_annotation_map(const Specification& spec);

}  // namespace lola
