#include "lolasched/value.hpp"

#include <charconv>
#include <cmath>
#include <cstring>

#include "lolasched/error.hpp"

namespace lola {

std::string to_string(const Type& type) {
  switch (type.kind) {
    case Type::Kind::Bool: return "Bool";
    case Type::Kind::Int64: return "Int64";
    case Type::Kind::UInt64: return "UInt64";
    case Type::Kind::Float64: return "Float64";
    case Type::Kind::IntLiteral: return "Int64";
    case Type::Kind::Tuple: {
      std::string out = "(";
      for (std::size_t i = 0; i < type.elements.size(); ++i) {
        if (i > 0) out += ", ";
        out += to_string(type.elements[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

std::optional<Type> unify(const Type& a, const Type& b) {
  if (a.kind == Type::Kind::IntLiteral && b.is_numeric()) return b;
  if (b.kind == Type::Kind::IntLiteral && a.is_numeric()) return a;
  if (a.kind != b.kind) return std::nullopt;
  if (a.kind != Type::Kind::Tuple) return a;
  if (a.elements.size() != b.elements.size()) return std::nullopt;
  Type out = Type::tuple({});
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    auto e = unify(a.elements[i], b.elements[i]);
    if (!e) return std::nullopt;
    out.elements.push_back(*e);
  }
  return out;
}

Type concretize(const Type& t) {
  if (t.kind == Type::Kind::IntLiteral) return Type::int64();
  if (t.kind != Type::Kind::Tuple) return t;
  Type out = Type::tuple({});
  for (const auto& e : t.elements) out.elements.push_back(concretize(e));
  return out;
}

double Value::as_double() const {
  if (auto d = std::get_if<double>(&data)) return *d;
  if (auto i = std::get_if<std::int64_t>(&data)) return static_cast<double>(*i);
  if (auto u = std::get_if<std::uint64_t>(&data)) return static_cast<double>(*u);
  throw Error(ErrorKind::Evaluation, "value is not numeric");
}

bool identical(const Value& a, const Value& b) {
  if (a.data.index() != b.data.index()) return false;
  if (auto da = std::get_if<double>(&a.data)) {
    double db = std::get<double>(b.data);
    return std::memcmp(da, &db, sizeof(double)) == 0;
  }
  if (a.is_tuple()) {
    const Tuple& ta = a.as_tuple();
    const Tuple& tb = b.as_tuple();
    if (ta.size() != tb.size()) return false;
    for (std::size_t i = 0; i < ta.size(); ++i) {
      if (!identical(ta[i], tb[i])) return false;
    }
    return true;
  }
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Tuple>) {
          return false;
        } else {
          return x == std::get<T>(b.data);
        }
      },
      a.data);
}

bool identical(const Cell& a, const Cell& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || identical(*a, *b);
}

namespace {

std::string shortest(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string format_float_literal(double d) {
  std::string s = shortest(d);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::string format_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          return shortest(x);
        } else if constexpr (std::is_same_v<T, Tuple>) {
          std::string out = "(";
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i > 0) out += ";";
            out += format_value(x[i]);
          }
          return out + ")";
        } else {
          return std::to_string(x);
        }
      },
      v.data);
}

Value parse_value(std::string_view text, const Type& type) {
  auto fail = [&]() -> Value {
    throw Error(ErrorKind::Syntax, "cannot parse '" + std::string(text) + "' as " + to_string(type));
  };
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const char* first = text.data();
  const char* last = text.data() + text.size();
  switch (type.kind) {
    case Type::Kind::Bool:
      if (text == "true") return Value(true);
      if (text == "false") return Value(false);
      return fail();
    case Type::Kind::Int64:
    case Type::Kind::IntLiteral: {
      std::int64_t i = 0;
      auto r = std::from_chars(first, last, i);
      if (r.ec != std::errc() || r.ptr != last) return fail();
      return Value(i);
    }
    case Type::Kind::UInt64: {
      std::uint64_t u = 0;
      auto r = std::from_chars(first, last, u);
      if (r.ec != std::errc() || r.ptr != last) return fail();
      return Value(u);
    }
    case Type::Kind::Float64: {
      double d = 0;
      auto r = std::from_chars(first, last, d);
      if (r.ec != std::errc() || r.ptr != last) return fail();
      return Value(d);
    }
    case Type::Kind::Tuple: {
      if (text.size() < 2 || text.front() != '(' || text.back() != ')') return fail();
      std::string_view inner = text.substr(1, text.size() - 2);
      Tuple out;
      for (const auto& elem : type.elements) {
        auto pos = inner.find(';');
        out.push_back(parse_value(inner.substr(0, pos), elem));
        inner = pos == std::string_view::npos ? std::string_view{} : inner.substr(pos + 1);
        if (pos == std::string_view::npos && out.size() != type.elements.size()) return fail();
      }
      if (!inner.empty()) return fail();
      return Value(std::move(out));
    }
  }
  return fail();
}

}  // namespace lola
