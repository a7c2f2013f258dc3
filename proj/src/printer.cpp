#include <cmath>
#include <sstream>

#include "lolasched/parser.hpp"

namespace lola {

namespace {

int precedence(const ExprPtr& e) {
  if (auto b = std::get_if<Expr::Binary>(&e->node)) {
    switch (b->op) {
      case BinaryOp::Or: return 1;
      case BinaryOp::And: return 2;
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
      case BinaryOp::Eq:
      case BinaryOp::Ne: return 3;
      case BinaryOp::Add:
      case BinaryOp::Sub: return 4;
      case BinaryOp::Mul:
      case BinaryOp::Div: return 5;
    }
  }
  if (auto u = std::get_if<Expr::Unary>(&e->node)) {
    return u->op == UnaryOp::Neg || u->op == UnaryOp::Not ? 6 : 7;
  }
  if (auto c = std::get_if<Expr::Constant>(&e->node)) {
    // A negative literal prints with a leading '-', so it binds like a unary minus.
    if (auto d = std::get_if<double>(&c->value.data); d && std::signbit(*d)) return 6;
    if (auto i = std::get_if<std::int64_t>(&c->value.data); i && *i < 0) return 6;
  }
  return 7;
}

const char* op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

std::string wrap(const ExprPtr& e, bool parens) {
  std::string s = print_expr(e);
  return parens ? "(" + s + ")" : s;
}

std::string priority_text(std::uint64_t p) {
  switch (p) {
    case 10: return "high";
    case 5: return "medium";
    case 1: return "low";
    default: return std::to_string(p);
  }
}

std::string annotation_text(const Annotation& a) {
  std::string out = "#[";
  if (a.priority) out += "priority=\"" + priority_text(*a.priority) + "\"";
  if (a.deadline) {
    if (a.priority) out += ",";
    out += "deadline=\"" + format_seconds(*a.deadline) + "s\"";
  }
  return out + "]";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Constant>) {
          if (auto d = std::get_if<double>(&x.value.data)) return format_float_literal(*d);
          return format_value(x.value);
        } else if constexpr (std::is_same_v<T, Expr::StreamRef>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, Expr::Offset>) {
          return x.name + ".offset(by: -" + std::to_string(x.distance) + ").defaults(to: " + print_expr(x.fallback) +
                 ")";
        } else if constexpr (std::is_same_v<T, Expr::Hold>) {
          return x.name + ".hold(or: " + print_expr(x.fallback) + ")";
        } else if constexpr (std::is_same_v<T, Expr::Project>) {
          return wrap(x.tuple, precedence(x.tuple) < 7) + "." + std::to_string(x.index);
        } else if constexpr (std::is_same_v<T, Expr::Now>) {
          return "now";
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          switch (x.op) {
            case UnaryOp::Neg: return "-" + wrap(x.arg, precedence(x.arg) < 7);
            case UnaryOp::Not: return "!" + wrap(x.arg, precedence(x.arg) < 6);
            case UnaryOp::Abs: return "abs(" + print_expr(x.arg) + ")";
            case UnaryOp::Sqrt: return "sqrt(" + print_expr(x.arg) + ")";
          }
          return "?";
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          int p = precedence(e);
          bool non_assoc = p == 3;
          std::string lhs = wrap(x.lhs, precedence(x.lhs) < p || (non_assoc && precedence(x.lhs) == p));
          std::string rhs = wrap(x.rhs, precedence(x.rhs) <= p);
          return lhs + " " + op_text(x.op) + " " + rhs;
        } else {
          std::string out = x.op == NaryOp::Min ? "min(" : "max(";
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (i > 0) out += ", ";
            out += print_expr(x.args[i]);
          }
          return out + ")";
        }
      },
      e->node);
}

std::string print_pacing(const PacingType& p) {
  if (p.any) return "|@any|";
  std::string out = "|@";
  for (std::size_t i = 0; i < p.inputs.size(); ++i) {
    if (i > 0) out += "&&";
    out += p.inputs[i];
  }
  return out + "|";
}

std::string print_output(const OutputDecl& out) {
  std::ostringstream os;
  os << "output " << out.name;
  if (out.declared_type) os << " : " << to_string(*out.declared_type);
  if (out.shorthand && out.clauses.size() == 1 && !out.clauses[0].when && !out.clauses[0].annotation) {
    const auto& c = out.clauses[0];
    if (c.pacing) os << " " << print_pacing(*c.pacing);
    os << " := " << print_expr(c.with) << "\n";
    return os.str();
  }
  os << "\n";
  for (const auto& c : out.clauses) {
    if (c.annotation) os << "    " << annotation_text(*c.annotation) << "\n";
    os << "    eval";
    if (c.pacing) os << " " << print_pacing(*c.pacing);
    if (c.when) os << " when " << print_expr(c.when);
    os << " with " << print_expr(c.with) << "\n";
  }
  return os.str();
}

std::string print_spec(const Specification& spec) {
  std::ostringstream os;
  const auto& cfg = spec.config;
  if (cfg.event_frequency || cfg.bandwidth || cfg.default_deadline) {
    std::vector<std::string> parts;
    if (cfg.event_frequency) parts.push_back("frequency=\"" + format_frequency(*cfg.event_frequency) + "\"");
    if (cfg.bandwidth) parts.push_back("bound=\"" + std::to_string(*cfg.bandwidth) + "\"");
    if (cfg.default_deadline) parts.push_back("deadline=\"" + format_seconds(*cfg.default_deadline) + "s\"");
    os << "#![";
    for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
    os << "]\n";
  }
  for (const auto& imp : cfg.imports) os << "import " << imp << "\n";
  for (const auto& in : spec.inputs) {
    if (in.annotation) os << annotation_text(*in.annotation) << "\n";
    os << "input " << in.name << " : " << to_string(in.type) << "\n";
  }
  for (const auto& out : spec.outputs) os << print_output(out);
  for (const auto& t : spec.triggers) {
    os << "trigger ";
    if (t.pacing) os << print_pacing(*t.pacing) << " ";
    os << print_expr(t.expr);
    if (t.message) os << " " << quote(*t.message);
    os << "\n";
  }
  return os.str();
}

}  // namespace lola
