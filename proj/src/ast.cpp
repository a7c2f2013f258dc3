#include "lolasched/ast.hpp"

namespace lola {

namespace {

template <typename Node>
ExprPtr make(Node node, SourceLoc loc) {
  return std::make_shared<const Expr>(Expr{std::move(node), loc});
}

}  // namespace

ExprPtr make_constant(Value v, bool int_literal, SourceLoc loc) {
  return make(Expr::Constant{std::move(v), int_literal}, loc);
}
ExprPtr make_bool(bool b) { return make_constant(Value(b)); }
ExprPtr make_stream(std::string name, SourceLoc loc) { return make(Expr::StreamRef{std::move(name)}, loc); }
ExprPtr make_offset(std::string name, std::uint32_t distance, ExprPtr fallback, SourceLoc loc) {
  return make(Expr::Offset{std::move(name), distance, std::move(fallback)}, loc);
}
ExprPtr make_hold(std::string name, ExprPtr fallback, SourceLoc loc) {
  return make(Expr::Hold{std::move(name), std::move(fallback)}, loc);
}
ExprPtr make_project(ExprPtr tuple, std::size_t index, SourceLoc loc) {
  return make(Expr::Project{std::move(tuple), index}, loc);
}
ExprPtr make_now(SourceLoc loc) { return make(Expr::Now{}, loc); }
ExprPtr make_unary(UnaryOp op, ExprPtr arg, SourceLoc loc) { return make(Expr::Unary{op, std::move(arg)}, loc); }
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
  return make(Expr::Binary{op, std::move(lhs), std::move(rhs)}, loc);
}
ExprPtr make_nary(NaryOp op, std::vector<ExprPtr> args, SourceLoc loc) {
  return make(Expr::Nary{op, std::move(args)}, loc);
}

bool is_true_literal(const ExprPtr& e) {
  if (!e) return true;
  auto c = std::get_if<Expr::Constant>(&e->node);
  return c && c->value.is_bool() && c->value.as_bool();
}

ExprPtr make_and(ExprPtr lhs, ExprPtr rhs) {
  if (is_true_literal(lhs)) return rhs ? rhs : make_bool(true);
  if (is_true_literal(rhs)) return lhs;
  return make_binary(BinaryOp::And, std::move(lhs), std::move(rhs));
}

ExprPtr make_not(ExprPtr arg) { return make_unary(UnaryOp::Not, std::move(arg)); }

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, Expr::Constant>) {
          return x.int_literal == y.int_literal && identical(x.value, y.value);
        } else if constexpr (std::is_same_v<T, Expr::StreamRef>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Expr::Offset>) {
          return x.name == y.name && x.distance == y.distance && same_expr(x.fallback, y.fallback);
        } else if constexpr (std::is_same_v<T, Expr::Hold>) {
          return x.name == y.name && same_expr(x.fallback, y.fallback);
        } else if constexpr (std::is_same_v<T, Expr::Project>) {
          return x.index == y.index && same_expr(x.tuple, y.tuple);
        } else if constexpr (std::is_same_v<T, Expr::Now>) {
          return true;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return x.op == y.op && same_expr(x.arg, y.arg);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return x.op == y.op && same_expr(x.lhs, y.lhs) && same_expr(x.rhs, y.rhs);
        } else {
          if (x.op != y.op || x.args.size() != y.args.size()) return false;
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (!same_expr(x.args[i], y.args[i])) return false;
          }
          return true;
        }
      },
      a->node);
}

const InputDecl* Specification::find_input(std::string_view name) const {
  for (const auto& in : inputs) {
    if (in.name == name) return &in;
  }
  return nullptr;
}

const OutputDecl* Specification::find_output(std::string_view name) const {
  for (const auto& out : outputs) {
    if (out.name == name) return &out;
  }
  return nullptr;
}

int Specification::input_index(std::string_view name) const {
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

bool same_spec(const Specification& a, const Specification& b) {
  if (!(a.config.event_frequency == b.config.event_frequency) || a.config.bandwidth != b.config.bandwidth ||
      a.config.default_deadline != b.config.default_deadline || a.config.imports != b.config.imports) {
    return false;
  }
  if (a.inputs.size() != b.inputs.size() || a.outputs.size() != b.outputs.size() ||
      a.triggers.size() != b.triggers.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.inputs.size(); ++i) {
    const auto& x = a.inputs[i];
    const auto& y = b.inputs[i];
    if (x.name != y.name || !(x.type == y.type) || !(x.annotation == y.annotation)) return false;
  }
  for (std::size_t i = 0; i < a.outputs.size(); ++i) {
    const auto& x = a.outputs[i];
    const auto& y = b.outputs[i];
    if (x.name != y.name || !(x.declared_type == y.declared_type) || x.clauses.size() != y.clauses.size()) {
      return false;
    }
    for (std::size_t k = 0; k < x.clauses.size(); ++k) {
      const auto& cx = x.clauses[k];
      const auto& cy = y.clauses[k];
      if (!(cx.pacing == cy.pacing) || !(cx.annotation == cy.annotation) || !same_expr(cx.when, cy.when) ||
          !same_expr(cx.with, cy.with)) {
        return false;
      }
    }
  }
  for (std::size_t i = 0; i < a.triggers.size(); ++i) {
    const auto& x = a.triggers[i];
    const auto& y = b.triggers[i];
    if (x.message != y.message || !(x.pacing == y.pacing) || !same_expr(x.expr, y.expr)) return false;
  }
  return true;
}

std::string trigger_name(std::size_t index) { return "trigger_" + std::to_string(index); }

}  // namespace lola
