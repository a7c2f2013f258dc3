#include "lolasched/interpreter.hpp"

#include <cmath>
#include <limits>

namespace lola {

namespace {

// Numeric operand pair after promotion: double wins, then unsigned.
enum class NumKind { Int, UInt, Float };

NumKind kind_of(const Value& v) {
  if (std::holds_alternative<double>(v.data)) return NumKind::Float;
  if (std::holds_alternative<std::uint64_t>(v.data)) return NumKind::UInt;
  return NumKind::Int;
}

NumKind common(const Value& a, const Value& b) {
  NumKind ka = kind_of(a), kb = kind_of(b);
  if (ka == NumKind::Float || kb == NumKind::Float) return NumKind::Float;
  if (ka == NumKind::UInt || kb == NumKind::UInt) return NumKind::UInt;
  return NumKind::Int;
}

std::uint64_t as_bits(const Value& v) {
  if (auto u = std::get_if<std::uint64_t>(&v.data)) return *u;
  return static_cast<std::uint64_t>(std::get<std::int64_t>(v.data));
}

[[noreturn]] void eval_error(const ExprPtr& e, const std::string& msg) { throw Error(ErrorKind::Evaluation, msg, e->loc); }

// Integer arithmetic wraps (two's complement) instead of overflowing.
template <typename T>
T wrap_arith(BinaryOp op, T a, T b, const ExprPtr& e) {
  using U = std::make_unsigned_t<T>;
  U ua = static_cast<U>(a), ub = static_cast<U>(b);
  switch (op) {
    case BinaryOp::Add: return static_cast<T>(ua + ub);
    case BinaryOp::Sub: return static_cast<T>(ua - ub);
    case BinaryOp::Mul: return static_cast<T>(ua * ub);
    case BinaryOp::Div:
      if (b == 0) eval_error(e, "integer division by zero");
      if constexpr (std::is_signed_v<T>) {
        if (a == std::numeric_limits<T>::min() && b == -1) return a;
      }
      return a / b;
    default: break;
  }
  eval_error(e, "not an arithmetic operator");
}

template <typename T>
bool compare(BinaryOp op, T a, T b) {
  switch (op) {
    case BinaryOp::Lt: return a < b;
    case BinaryOp::Le: return a <= b;
    case BinaryOp::Gt: return a > b;
    case BinaryOp::Ge: return a >= b;
    case BinaryOp::Eq: return a == b;
    case BinaryOp::Ne: return a != b;
    default: return false;
  }
}

bool is_comparison(BinaryOp op) {
  return op == BinaryOp::Lt || op == BinaryOp::Le || op == BinaryOp::Gt || op == BinaryOp::Ge ||
         op == BinaryOp::Eq || op == BinaryOp::Ne;
}

Value binary(const ExprPtr& e, BinaryOp op, const Value& a, const Value& b) {
  if (op == BinaryOp::And) return Value(a.as_bool() && b.as_bool());
  if (op == BinaryOp::Or) return Value(a.as_bool() || b.as_bool());
  if (a.is_bool() || b.is_bool()) {
    if (!a.is_bool() || !b.is_bool()) eval_error(e, "mixed boolean and numeric operands");
    if (op == BinaryOp::Eq) return Value(a.as_bool() == b.as_bool());
    if (op == BinaryOp::Ne) return Value(a.as_bool() != b.as_bool());
    eval_error(e, "arithmetic on booleans");
  }
  if (a.is_tuple() || b.is_tuple()) eval_error(e, "operator applied to a tuple");
  switch (common(a, b)) {
    case NumKind::Float: {
      double x = a.as_double(), y = b.as_double();
      if (is_comparison(op)) return Value(compare(op, x, y));
      switch (op) {
        case BinaryOp::Add: return Value(x + y);
        case BinaryOp::Sub: return Value(x - y);
        case BinaryOp::Mul: return Value(x * y);
        case BinaryOp::Div: return Value(x / y);
        default: break;
      }
      break;
    }
    case NumKind::UInt: {
      std::uint64_t x = as_bits(a), y = as_bits(b);
      if (is_comparison(op)) return Value(compare(op, x, y));
      return Value(wrap_arith(op, x, y, e));
    }
    case NumKind::Int: {
      std::int64_t x = std::get<std::int64_t>(a.data), y = std::get<std::int64_t>(b.data);
      if (is_comparison(op)) return Value(compare(op, x, y));
      return Value(wrap_arith(op, x, y, e));
    }
  }
  eval_error(e, "unsupported operator");
}

Value unary(const ExprPtr& e, UnaryOp op, const Value& v) {
  if (op == UnaryOp::Not) return Value(!v.as_bool());
  if (op == UnaryOp::Sqrt) return Value(std::sqrt(v.as_double()));
  if (auto d = std::get_if<double>(&v.data)) return Value(op == UnaryOp::Neg ? -*d : std::fabs(*d));
  if (auto i = std::get_if<std::int64_t>(&v.data)) {
    auto u = static_cast<std::uint64_t>(*i);
    if (op == UnaryOp::Neg || *i < 0) return Value(static_cast<std::int64_t>(std::uint64_t{0} - u));
    return v;
  }
  if (op == UnaryOp::Abs) return v;
  eval_error(e, "cannot negate an unsigned value");
}

// -0.0 orders before +0.0, and a NaN argument wins so the result does not
// depend on argument order.
Value nary(NaryOp op, const std::vector<Value>& args) {
  Value best = args.front();
  for (std::size_t i = 1; i < args.size(); ++i) {
    const Value& v = args[i];
    bool replace = false;
    switch (common(best, v)) {
      case NumKind::Float: {
        double x = v.as_double(), y = best.as_double();
        if (std::isnan(y)) break;
        if (std::isnan(x)) {
          replace = true;
          break;
        }
        if (x == y) {
          replace = op == NaryOp::Min ? std::signbit(x) && !std::signbit(y) : !std::signbit(x) && std::signbit(y);
        } else {
          replace = op == NaryOp::Min ? x < y : x > y;
        }
        break;
      }
      case NumKind::UInt:
        replace = op == NaryOp::Min ? as_bits(v) < as_bits(best) : as_bits(v) > as_bits(best);
        break;
      case NumKind::Int: {
        auto x = std::get<std::int64_t>(v.data), y = std::get<std::int64_t>(best.data);
        replace = op == NaryOp::Min ? x < y : x > y;
        break;
      }
    }
    if (replace) best = v;
  }
  return best;
}

}  // namespace

Cell evaluate(const ExprPtr& e, const EvalEnv& env) {
  return std::visit(
      [&](const auto& x) -> Cell {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Constant>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, Expr::StreamRef>) {
          return env.sync(x.name);
        } else if constexpr (std::is_same_v<T, Expr::Offset>) {
          Cell c = env.offset(x.name, x.distance);
          return c ? c : evaluate(x.fallback, env);
        } else if constexpr (std::is_same_v<T, Expr::Hold>) {
          Cell c = env.hold(x.name);
          return c ? c : evaluate(x.fallback, env);
        } else if constexpr (std::is_same_v<T, Expr::Project>) {
          Cell t = evaluate(x.tuple, env);
          if (!t) return std::nullopt;
          if (!t->is_tuple() || x.index >= t->as_tuple().size()) eval_error(e, "bad tuple projection");
          return t->as_tuple()[x.index];
        } else if constexpr (std::is_same_v<T, Expr::Now>) {
          return Value(to_seconds(env.now()));
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          Cell a = evaluate(x.arg, env);
          if (!a) return std::nullopt;
          return unary(e, x.op, *a);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          Cell a = evaluate(x.lhs, env);
          Cell b = evaluate(x.rhs, env);
          if (!a || !b) return std::nullopt;
          return binary(e, x.op, *a, *b);
        } else {
          std::vector<Value> args;
          args.reserve(x.args.size());
          for (const auto& a : x.args) {
            Cell c = evaluate(a, env);
            if (!c) return std::nullopt;
            args.push_back(std::move(*c));
          }
          return nary(x.op, args);
        }
      },
      e->node);
}

Value coerce(const Value& v, const Type& type) {
  switch (type.kind) {
    case Type::Kind::Float64:
      if (auto i = std::get_if<std::int64_t>(&v.data)) return Value(static_cast<double>(*i));
      if (auto u = std::get_if<std::uint64_t>(&v.data)) return Value(static_cast<double>(*u));
      return v;
    case Type::Kind::UInt64:
      if (auto i = std::get_if<std::int64_t>(&v.data)) return Value(static_cast<std::uint64_t>(*i));
      return v;
    case Type::Kind::Int64:
      if (auto u = std::get_if<std::uint64_t>(&v.data)) return Value(static_cast<std::int64_t>(*u));
      return v;
    case Type::Kind::Tuple: {
      if (!v.is_tuple() || v.as_tuple().size() != type.elements.size()) return v;
      Tuple t;
      for (std::size_t i = 0; i < type.elements.size(); ++i) t.push_back(coerce(v.as_tuple()[i], type.elements[i]));
      return Value(std::move(t));
    }
    default:
      return v;
  }
}

}  // namespace lola
