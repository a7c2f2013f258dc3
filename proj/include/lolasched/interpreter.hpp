#pragma once

#include "lolasched/ast.hpp"

namespace lola {

/// Stream access during expression evaluation. The online monitor answers
/// from bounded history; the model checker answers by scanning a full model.
class EvalEnv {
 public:
  virtual ~EvalEnv() = default;
  /// Current value of `stream` at this step (absent if it has none).
  virtual Cell sync(const std::string& stream) const = 0;
  /// k-th most recent value of `stream` strictly before this step.
  virtual Cell offset(const std::string& stream, std::uint32_t k) const = 0;
  /// Latest value of `stream` at or before this step.
  virtual Cell hold(const std::string& stream) const = 0;
  virtual TimeUs now() const = 0;
};

/// Evaluates an expression. An absent synchronous access makes the whole
/// result absent. Integer division by zero raises an Evaluation error.
Cell evaluate(const ExprPtr& e, const EvalEnv& env);

/// Converts a numeric value to the representation of `type` (integer
/// literals are stored as Int64 until they meet their context).
Value coerce(const Value& v, const Type& type);

}  // namespace lola
