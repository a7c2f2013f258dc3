#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lola {

/// Value types of the specification language. `IntLiteral` is the type of an
/// integer constant before it is unified with a concrete numeric type.
struct Type {
  enum class Kind { Bool, Int64, UInt64, Float64, Tuple, IntLiteral };

  Kind kind = Kind::Float64;
  std::vector<Type> elements;  // Tuple only

  static Type boolean() { return {Kind::Bool, {}}; }
  static Type int64() { return {Kind::Int64, {}}; }
  static Type uint64() { return {Kind::UInt64, {}}; }
  static Type float64() { return {Kind::Float64, {}}; }
  static Type int_literal() { return {Kind::IntLiteral, {}}; }
  static Type tuple(std::vector<Type> elems) { return {Kind::Tuple, std::move(elems)}; }

  bool is_numeric() const {
    return kind == Kind::Int64 || kind == Kind::UInt64 || kind == Kind::Float64 || kind == Kind::IntLiteral;
  }

  friend bool operator==(const Type&, const Type&) = default;
};

std::string to_string(const Type& type);

/// Unifies two types; IntLiteral adapts to any numeric type. Returns nullopt on mismatch.
std::optional<Type> unify(const Type& a, const Type& b);

/// IntLiteral defaults to Int64 once nothing else constrains it.
Type concretize(const Type& t);

struct Value;
using Tuple = std::vector<Value>;

struct Value {
  std::variant<bool, std::int64_t, std::uint64_t, double, Tuple> data;

  Value() : data(false) {}
  Value(bool b) : data(b) {}
  Value(std::int64_t i) : data(i) {}
  Value(std::uint64_t u) : data(u) {}
  Value(double d) : data(d) {}
  Value(Tuple t) : data(std::move(t)) {}

  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_tuple() const { return std::holds_alternative<Tuple>(data); }
  bool as_bool() const { return std::get<bool>(data); }
  double as_double() const;  // numeric widening
  const Tuple& as_tuple() const { return std::get<Tuple>(data); }
};

/// A stream cell: a value, or absent (no value at this step).
using Cell = std::optional<Value>;

/// Bitwise identity (NaN equals NaN with the same payload, 0.0 differs from -0.0).
bool identical(const Value& a, const Value& b);
bool identical(const Cell& a, const Cell& b);

/// Round-trippable text: shortest float form, `true`/`false`, tuples as `(a;b)`.
std::string format_value(const Value& v);

/// Parses the text form of a value of the given type.
Value parse_value(std::string_view text, const Type& type);

/// Prints a double so it re-lexes as a float literal (always has '.', 'e', "inf" or "nan").
std::string format_float_literal(double d);

}  // namespace lola
