#include "lolasched/parser.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace lola {

namespace {

enum class Tok {
  Ident,
  Int,
  Float,
  String,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Colon,
  Assign,  // :=
  Dot,
  Bar,  // |
  At,
  AndAnd,
  OrOr,
  Bang,
  Lt,
  Le,
  Gt,
  Ge,
  EqEq,
  Ne,
  Plus,
  Minus,
  Star,
  Slash,
  Hash,
  HashBang,  // #!
  Eq,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourceLoc loc{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", loc});
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          advance();
        }
        out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), loc});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(number(loc));
      } else if (c == '"') {
        out.push_back(string(loc));
      } else {
        out.push_back(punct(loc));
      }
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool peek_is(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void skip_space() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (peek_is("//")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (peek_is("/*")) {
        SourceLoc loc{line_, col_};
        advance();
        advance();
        while (pos_ < src_.size() && !peek_is("*/")) advance();
        if (pos_ >= src_.size()) throw Error(ErrorKind::Syntax, "unterminated comment", loc);
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  Token number(SourceLoc loc) {
    std::size_t start = pos_;
    bool is_float = false;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    };
    digits();
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      is_float = true;
      advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      int save_col = col_;
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        is_float = true;
        digits();
      } else {
        pos_ = save;
        col_ = save_col;
      }
    }
    return {is_float ? Tok::Float : Tok::Int, std::string(src_.substr(start, pos_ - start)), loc};
  }

  Token string(SourceLoc loc) {
    advance();
    std::string value;
    while (pos_ < src_.size() && src_[pos_] != '"') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
        advance();
        char e = src_[pos_];
        value.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
      } else if (src_[pos_] == '\n') {
        throw Error(ErrorKind::Syntax, "unterminated string", loc);
      } else {
        value.push_back(src_[pos_]);
      }
      advance();
    }
    if (pos_ >= src_.size()) throw Error(ErrorKind::Syntax, "unterminated string", loc);
    advance();
    return {Tok::String, value, loc};
  }

  Token punct(SourceLoc loc) {
    struct Entry {
      std::string_view text;
      Tok kind;
    };
    static constexpr Entry table[] = {
        {"#!", Tok::HashBang}, {":=", Tok::Assign}, {"&&", Tok::AndAnd}, {"||", Tok::OrOr}, {"<=", Tok::Le},
        {">=", Tok::Ge},       {"==", Tok::EqEq},   {"!=", Tok::Ne},     {"(", Tok::LParen}, {")", Tok::RParen},
        {"[", Tok::LBracket},  {"]", Tok::RBracket}, {",", Tok::Comma},  {":", Tok::Colon},  {".", Tok::Dot},
        {"|", Tok::Bar},       {"@", Tok::At},      {"!", Tok::Bang},    {"<", Tok::Lt},     {">", Tok::Gt},
        {"+", Tok::Plus},      {"-", Tok::Minus},   {"*", Tok::Star},    {"/", Tok::Slash},  {"#", Tok::Hash},
        {"=", Tok::Eq},
    };
    for (const auto& e : table) {
      if (peek_is(e.text)) {
        for (std::size_t i = 0; i < e.text.size(); ++i) advance();
        return {e.kind, std::string(e.text), loc};
      }
    }
    throw Error(ErrorKind::Syntax, std::string("unexpected character '") + src_[pos_] + "'", loc);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct KeyValue {
  std::string key;
  std::string value;
  SourceLoc loc;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Specification run() {
    Specification spec;
    if (at(Tok::End)) throw Error(ErrorKind::Syntax, "empty specification", cur().loc);
    while (!at(Tok::End)) {
      if (at(Tok::HashBang)) {
        global_config(spec.config);
        continue;
      }
      if (at_keyword("import")) {
        next();
        spec.config.imports.push_back(expect(Tok::Ident, "module name").text);
        continue;
      }
      std::optional<Annotation> annotation;
      if (at(Tok::Hash)) annotation = parse_annotation();
      if (at_keyword("input")) {
        parse_inputs(spec, annotation);
      } else if (at_keyword("output")) {
        spec.outputs.push_back(parse_output(annotation));
      } else if (at_keyword("trigger")) {
        if (annotation) throw Error(ErrorKind::Syntax, "triggers cannot be annotated", annotation->loc);
        spec.triggers.push_back(parse_trigger());
      } else {
        throw Error(ErrorKind::Syntax, "expected 'input', 'output' or 'trigger', found '" + cur().text + "'",
                    cur().loc);
      }
    }
    return spec;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t n = 1) const { return toks_[std::min(pos_ + n, toks_.size() - 1)]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_keyword(std::string_view kw) const { return at(Tok::Ident) && cur().text == kw; }
  Token next() { return toks_[pos_++]; }

  Token expect(Tok k, std::string_view what) {
    if (!at(k)) {
      throw Error(ErrorKind::Syntax,
                  "expected " + std::string(what) + ", found '" + (at(Tok::End) ? "end of input" : cur().text) + "'",
                  cur().loc);
    }
    return next();
  }

  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) {
      throw Error(ErrorKind::Syntax, "expected '" + std::string(kw) + "', found '" + cur().text + "'", cur().loc);
    }
    next();
  }

  std::vector<KeyValue> key_values() {
    expect(Tok::LBracket, "'['");
    std::vector<KeyValue> out;
    for (;;) {
      Token key = expect(Tok::Ident, "annotation key");
      expect(Tok::Eq, "'='");
      std::string value;
      if (at(Tok::String) || at(Tok::Int) || at(Tok::Float) || at(Tok::Ident)) {
        value = next().text;
      } else {
        throw Error(ErrorKind::Syntax, "expected annotation value", cur().loc);
      }
      out.push_back({key.text, value, key.loc});
      if (at(Tok::Comma)) {
        next();
        continue;
      }
      expect(Tok::RBracket, "']'");
      return out;
    }
  }

  void global_config(GlobalConfig& config) {
    next();
    for (const auto& kv : key_values()) {
      try {
        if (kv.key == "frequency") {
          config.event_frequency = parse_frequency(kv.value);
        } else if (kv.key == "bound" || kv.key == "bandwidth") {
          std::uint64_t b = 0;
          auto r = std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), b);
          if (r.ec != std::errc() || r.ptr != kv.value.data() + kv.value.size() || b == 0) {
            throw Error(ErrorKind::Syntax, "bound must be a positive integer");
          }
          config.bandwidth = b;
        } else if (kv.key == "deadline") {
          config.default_deadline = positive_duration(kv.value);
        } else {
          throw Error(ErrorKind::Syntax, "unknown configuration key '" + kv.key + "'");
        }
      } catch (const Error& e) {
        throw Error(ErrorKind::Syntax, e.message(), kv.loc);
      }
    }
  }

  static TimeUs positive_duration(const std::string& text) {
    TimeUs d = parse_duration(text);
    if (d <= 0) throw Error(ErrorKind::Syntax, "deadline must be positive");
    return d;
  }

  Annotation parse_annotation() {
    Annotation a;
    a.loc = next().loc;
    for (const auto& kv : key_values()) {
      try {
        if (kv.key == "priority") {
          if (a.priority) throw Error(ErrorKind::Syntax, "duplicate priority");
          if (kv.value == "high") {
            a.priority = 10;
          } else if (kv.value == "medium") {
            a.priority = 5;
          } else if (kv.value == "low") {
            a.priority = 1;
          } else {
            std::uint64_t p = 0;
            auto r = std::from_chars(kv.value.data(), kv.value.data() + kv.value.size(), p);
            if (r.ec != std::errc() || r.ptr != kv.value.data() + kv.value.size()) {
              throw Error(ErrorKind::Syntax, "priority must be high, medium, low or a natural number");
            }
            a.priority = p;
          }
        } else if (kv.key == "deadline") {
          if (a.deadline) throw Error(ErrorKind::Syntax, "duplicate deadline");
          a.deadline = positive_duration(kv.value);
        } else {
          throw Error(ErrorKind::Syntax, "unknown annotation key '" + kv.key + "'");
        }
      } catch (const Error& e) {
        throw Error(ErrorKind::Syntax, e.message(), kv.loc);
      }
    }
    return a;
  }

  Type parse_type() {
    if (at(Tok::LParen)) {
      next();
      Type t = Type::tuple({});
      t.elements.push_back(parse_scalar_type());
      while (at(Tok::Comma)) {
        next();
        t.elements.push_back(parse_scalar_type());
      }
      expect(Tok::RParen, "')'");
      return t;
    }
    return parse_scalar_type();
  }

  Type parse_scalar_type() {
    Token t = expect(Tok::Ident, "type");
    if (t.text == "Float64") return Type::float64();
    if (t.text == "Int64") return Type::int64();
    if (t.text == "UInt64") return Type::uint64();
    if (t.text == "Bool") return Type::boolean();
    throw Error(ErrorKind::Syntax, "unknown type '" + t.text + "'", t.loc);
  }

  void parse_inputs(Specification& spec, const std::optional<Annotation>& annotation) {
    next();
    std::vector<Token> names{expect(Tok::Ident, "input name")};
    while (at(Tok::Comma)) {
      next();
      names.push_back(expect(Tok::Ident, "input name"));
    }
    expect(Tok::Colon, "':'");
    Type type = parse_type();
    for (const auto& n : names) spec.inputs.push_back(InputDecl{n.text, type, annotation, n.loc});
  }

  bool at_pacing() const { return (at(Tok::Bar) && peek().kind == Tok::At) || at(Tok::At); }

  PacingType parse_pacing() {
    bool bars = at(Tok::Bar);
    if (bars) next();
    expect(Tok::At, "'@'");
    PacingType p;
    Token first = expect(Tok::Ident, "input name");
    if (first.text == "any") {
      p.any = true;
    } else {
      p.inputs.push_back(first.text);
      for (;;) {
        if (at(Tok::AndAnd)) {
          next();
          p.inputs.push_back(expect(Tok::Ident, "input name").text);
        } else if (at(Tok::OrOr)) {
          throw Error(ErrorKind::Syntax, "disjunctive pacing is not supported", cur().loc);
        } else {
          break;
        }
      }
    }
    if (bars) expect(Tok::Bar, "'|'");
    return p;
  }

  OutputDecl parse_output(const std::optional<Annotation>& annotation) {
    OutputDecl out;
    out.loc = next().loc;
    out.name = expect(Tok::Ident, "output name").text;
    if (at(Tok::Colon)) {
      next();
      out.declared_type = parse_type();
    }
    std::optional<PacingType> pacing;
    if (at_pacing()) pacing = parse_pacing();
    if (at(Tok::Assign)) {
      SourceLoc loc = next().loc;
      out.shorthand = true;
      out.clauses.push_back(EvalClause{pacing, nullptr, parse_expr(), annotation, loc});
      return out;
    }
    if (pacing) throw Error(ErrorKind::Syntax, "expected ':=' after pacing", cur().loc);
    bool first = true;
    for (;;) {
      std::optional<Annotation> clause_annotation;
      std::size_t save = pos_;
      if (at(Tok::Hash)) clause_annotation = parse_annotation();
      if (!at_keyword("eval")) {
        if (clause_annotation) {
          if (first) throw Error(ErrorKind::Syntax, "expected 'eval' after annotation", cur().loc);
          pos_ = save;  // annotation of the next declaration
        } else if (first) {
          throw Error(ErrorKind::Syntax, "expected ':=' or 'eval', found '" + cur().text + "'", cur().loc);
        }
        break;
      }
      first = false;
      EvalClause clause;
      clause.loc = next().loc;
      clause.annotation = clause_annotation;
      if (at_pacing()) clause.pacing = parse_pacing();
      if (at_keyword("when")) {
        next();
        clause.when = parse_expr();
      }
      expect_keyword("with");
      clause.with = parse_expr();
      out.clauses.push_back(std::move(clause));
    }
    if (annotation) {
      if (out.clauses.size() != 1 || out.clauses[0].annotation) {
        throw Error(ErrorKind::Syntax, "annotate each eval clause individually", annotation->loc);
      }
      out.clauses[0].annotation = annotation;
    }
    if (clause_annotation_is_double(out)) {
      throw Error(ErrorKind::Syntax, "annotation on a clause may set either priority or deadline", out.loc);
    }
    return out;
  }

  static bool clause_annotation_is_double(const OutputDecl& out) {
    for (const auto& c : out.clauses) {
      if (c.annotation && c.annotation->priority && c.annotation->deadline) return true;
    }
    return false;
  }

  TriggerDecl parse_trigger() {
    TriggerDecl t;
    t.loc = next().loc;
    if (at_pacing()) t.pacing = parse_pacing();
    t.expr = parse_expr();
    if (at(Tok::String)) t.message = next().text;
    return t;
  }

  // Expressions, lowest precedence first.
  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (at(Tok::OrOr)) {
      SourceLoc loc = next().loc;
      lhs = make_binary(BinaryOp::Or, lhs, parse_and(), loc);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_cmp();
    while (at(Tok::AndAnd)) {
      SourceLoc loc = next().loc;
      lhs = make_binary(BinaryOp::And, lhs, parse_cmp(), loc);
    }
    return lhs;
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_add();
    std::optional<BinaryOp> op;
    switch (cur().kind) {
      case Tok::Lt: op = BinaryOp::Lt; break;
      case Tok::Le: op = BinaryOp::Le; break;
      case Tok::Gt: op = BinaryOp::Gt; break;
      case Tok::Ge: op = BinaryOp::Ge; break;
      case Tok::EqEq: op = BinaryOp::Eq; break;
      case Tok::Ne: op = BinaryOp::Ne; break;
      default: break;
    }
    if (!op) return lhs;
    SourceLoc loc = next().loc;
    ExprPtr rhs = parse_add();
    switch (cur().kind) {
      case Tok::Lt:
      case Tok::Le:
      case Tok::Gt:
      case Tok::Ge:
      case Tok::EqEq:
      case Tok::Ne:
        throw Error(ErrorKind::Syntax, "comparisons do not chain; add parentheses", cur().loc);
      default: break;
    }
    return make_binary(*op, lhs, rhs, loc);
  }

  ExprPtr parse_add() {
    ExprPtr lhs = parse_mul();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinaryOp op = at(Tok::Plus) ? BinaryOp::Add : BinaryOp::Sub;
      SourceLoc loc = next().loc;
      lhs = make_binary(op, lhs, parse_mul(), loc);
    }
    return lhs;
  }

  ExprPtr parse_mul() {
    ExprPtr lhs = parse_unary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      BinaryOp op = at(Tok::Star) ? BinaryOp::Mul : BinaryOp::Div;
      SourceLoc loc = next().loc;
      lhs = make_binary(op, lhs, parse_unary(), loc);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (at(Tok::Minus)) {
      SourceLoc loc = next().loc;
      // Negative numeric literals fold into constants so printed constants re-parse identically.
      if ((at(Tok::Int) || at(Tok::Float)) && peek().kind != Tok::Dot) {
        return parse_number(true, loc);
      }
      return make_unary(UnaryOp::Neg, parse_unary(), loc);
    }
    if (at(Tok::Bang)) {
      SourceLoc loc = next().loc;
      return make_unary(UnaryOp::Not, parse_unary(), loc);
    }
    return parse_postfix();
  }

  ExprPtr parse_number(bool negative, SourceLoc loc) {
    Token t = next();
    std::string text = (negative ? "-" : "") + t.text;
    if (t.kind == Tok::Int) {
      std::int64_t v = 0;
      auto r = std::from_chars(text.data(), text.data() + text.size(), v);
      if (r.ec != std::errc()) throw Error(ErrorKind::Syntax, "integer literal out of range", t.loc);
      return make_constant(Value(v), true, loc);
    }
    double d = 0;
    std::from_chars(text.data(), text.data() + text.size(), d);
    return make_constant(Value(d), false, loc);
  }

  std::uint32_t parse_offset_distance() {
    bool negative = false;
    if (at(Tok::Minus)) {
      next();
      negative = true;
    }
    Token k = expect(Tok::Int, "offset distance");
    std::int64_t v = std::stoll(k.text);
    if (!negative || v < 1) throw Error(ErrorKind::Syntax, "offsets must refer to the past (by: -k, k >= 1)", k.loc);
    if (v > 1'000'000) throw Error(ErrorKind::Syntax, "offset too large", k.loc);
    return static_cast<std::uint32_t>(v);
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (at(Tok::Dot)) {
      SourceLoc loc = next().loc;
      if (at(Tok::Int)) {
        Token idx = next();
        e = make_project(e, static_cast<std::size_t>(std::stoul(idx.text)), loc);
        continue;
      }
      Token method = expect(Tok::Ident, "member");
      auto stream = std::get_if<Expr::StreamRef>(&e->node);
      if (method.text == "offset") {
        if (!stream) throw Error(ErrorKind::Syntax, "offset applies to stream names only", method.loc);
        expect(Tok::LParen, "'('");
        expect_keyword("by");
        expect(Tok::Colon, "':'");
        std::uint32_t distance = parse_offset_distance();
        expect(Tok::RParen, "')'");
        if (!at(Tok::Dot) || peek().kind != Tok::Ident || peek().text != "defaults") {
          throw Error(ErrorKind::Syntax, "offset access requires '.defaults(to: ...)'", cur().loc);
        }
        next();
        next();
        expect(Tok::LParen, "'('");
        expect_keyword("to");
        expect(Tok::Colon, "':'");
        ExprPtr fallback = parse_expr();
        expect(Tok::RParen, "')'");
        e = make_offset(stream->name, distance, fallback, e->loc);
      } else if (method.text == "hold") {
        if (!stream) throw Error(ErrorKind::Syntax, "hold applies to stream names only", method.loc);
        expect(Tok::LParen, "'('");
        expect_keyword("or");
        expect(Tok::Colon, "':'");
        ExprPtr fallback = parse_expr();
        expect(Tok::RParen, "')'");
        e = make_hold(stream->name, fallback, e->loc);
      } else {
        throw Error(ErrorKind::Syntax, "unknown member '" + method.text + "'", method.loc);
      }
    }
    return e;
  }

  ExprPtr parse_primary() {
    SourceLoc loc = cur().loc;
    if (at(Tok::Int) || at(Tok::Float)) return parse_number(false, loc);
    if (at(Tok::LParen)) {
      next();
      ExprPtr e = parse_expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    Token id = expect(Tok::Ident, "expression");
    if (id.text == "true") return make_constant(Value(true), false, loc);
    if (id.text == "false") return make_constant(Value(false), false, loc);
    if (id.text == "now") return make_now(loc);
    if (at(Tok::LParen)) {
      next();
      std::vector<ExprPtr> args;
      if (!at(Tok::RParen)) {
        args.push_back(parse_expr());
        while (at(Tok::Comma)) {
          next();
          args.push_back(parse_expr());
        }
      }
      expect(Tok::RParen, "')'");
      if (id.text == "abs" || id.text == "sqrt") {
        if (args.size() != 1) throw Error(ErrorKind::Syntax, id.text + " takes one argument", loc);
        return make_unary(id.text == "abs" ? UnaryOp::Abs : UnaryOp::Sqrt, args[0], loc);
      }
      if (id.text == "min" || id.text == "max") {
        if (args.empty()) throw Error(ErrorKind::Syntax, id.text + " needs at least one argument", loc);
        return make_nary(id.text == "min" ? NaryOp::Min : NaryOp::Max, std::move(args), loc);
      }
      throw Error(ErrorKind::Syntax, "unknown function '" + id.text + "'", loc);
    }
    return make_stream(id.text, loc);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void check_names(const Specification& spec, const ExprPtr& e);

void check_ref(const Specification& spec, const std::string& name, SourceLoc loc) {
  if (!spec.has_stream(name)) throw Error(ErrorKind::UnknownStream, "unknown stream '" + name + "'", loc);
}

void check_names(const Specification& spec, const ExprPtr& e) {
  if (!e) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::StreamRef>) {
          check_ref(spec, x.name, e->loc);
        } else if constexpr (std::is_same_v<T, Expr::Offset> || std::is_same_v<T, Expr::Hold>) {
          check_ref(spec, x.name, e->loc);
          check_names(spec, x.fallback);
        } else if constexpr (std::is_same_v<T, Expr::Project>) {
          check_names(spec, x.tuple);
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          check_names(spec, x.arg);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          check_names(spec, x.lhs);
          check_names(spec, x.rhs);
        } else if constexpr (std::is_same_v<T, Expr::Nary>) {
          for (const auto& a : x.args) check_names(spec, a);
        }
      },
      e->node);
}

void check_pacing_names(const Specification& spec, const std::optional<PacingType>& p, SourceLoc loc) {
  if (!p) return;
  for (const auto& name : p->inputs) {
    if (!spec.find_input(name)) {
      if (spec.find_output(name)) {
        throw Error(ErrorKind::Syntax, "pacing may only name input streams, '" + name + "' is an output", loc);
      }
      throw Error(ErrorKind::UnknownStream, "unknown input '" + name + "' in pacing", loc);
    }
  }
}

void validate(const Specification& spec) {
  std::set<std::string> seen;
  auto declare = [&](const std::string& name, SourceLoc loc) {
    if (!seen.insert(name).second) throw Error(ErrorKind::DuplicateStream, "stream '" + name + "' declared twice", loc);
  };
  for (const auto& in : spec.inputs) declare(in.name, in.loc);
  for (const auto& out : spec.outputs) declare(out.name, out.loc);
  for (const auto& out : spec.outputs) {
    for (const auto& c : out.clauses) {
      check_pacing_names(spec, c.pacing, c.loc);
      check_names(spec, c.when);
      check_names(spec, c.with);
    }
  }
  for (const auto& t : spec.triggers) {
    check_pacing_names(spec, t.pacing, t.loc);
    check_names(spec, t.expr);
  }
}

}  // namespace

Specification parse_spec(std::string_view text) {
  Parser parser(Lexer(text).run());
  Specification spec = parser.run();
  validate(spec);
  return spec;
}

Specification parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_spec(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ":" + e.what());
  }
}

}  // namespace lola
