#pragma once
// Operator expression language:
//   expr    := term (("+" | "-") term)*
//   term    := unary ("*" unary)*
//   unary   := "-" unary | postfix
//   postfix := primary ("^" INT)?
//   primary := NUMBER | SYMBOL | "i" | "comm(" expr "," expr ")" | "acomm(" expr "," expr ")"
//            | ORDER "[" expr "]" | "exp(" expr ";" INT ")" | "(" expr ")"
// NUMBER is "p", "p/q" or a decimal; daggers are written "†" or "^+".

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gwt/errors.hpp"
#include "gwt/operator.hpp"
#include "gwt/ordering.hpp"
#include "gwt/scalar.hpp"

namespace gwt {

/// Syntax errors carry the byte offset and the set of tokens that would have
/// been accepted there.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::set<std::string> expected, const std::string& found)
      : Error("SyntaxError", "SyntaxError: at position " + std::to_string(position) + ": expected " +
                                 join(expected) + ", found " + found),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const { return position_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  static std::string join(const std::set<std::string>& s) {
    std::string out;
    for (const auto& x : s) out += (out.empty() ? "" : " | ") + x;
    return out;
  }
  std::size_t position_;
  std::set<std::string> expected_;
};

struct Ast {
  enum class Kind { sum, product, number, imag, symbol, scalar, comm, acomm, order, exp, neg, pow };
  Kind kind = Kind::number;
  std::vector<Ast> children;
  std::vector<bool> minus;  // sum only: subtract child k
  Rational number{0};
  std::string name;         // symbol, scalar or ordering name
  int n = 0;                // exponent or series order

  static Ast leaf(Kind k, std::string name = {}) {
    Ast a;
    a.kind = k;
    a.name = std::move(name);
    return a;
  }
  static Ast num(Rational r) {
    Ast a;
    a.number = std::move(r);
    return a;
  }
  static Ast node(Kind k, std::vector<Ast> children, std::string name = {}, int n = 0) {
    Ast a;
    a.kind = k;
    a.children = std::move(children);
    a.name = std::move(name);
    a.n = n;
    if (k == Kind::sum) a.minus.assign(a.children.size(), false);
    return a;
  }

  friend bool operator==(const Ast& x, const Ast& y) {
    return x.kind == y.kind && x.number == y.number && x.name == y.name && x.n == y.n && x.minus == y.minus &&
           x.children == y.children;
  }
};

/// Names the parser can resolve: operator symbols, declared scalars and
/// orderings. Built-in ordering names are available when `builtin_orderings`.
struct ParseContext {
  RegistryPtr reg;
  std::map<std::string, Ordering> orderings;
  bool builtin_orderings = true;

  bool has_ordering(const std::string& name) const {
    if (orderings.count(name)) return true;
    for (const auto& [k, o] : orderings)
      if (o.name() == name) return true;
    static const std::set<std::string> builtin{"N", "A", "W", "T", "normal", "antinormal", "weyl", "time-desc"};
    return builtin_orderings && builtin.count(name);
  }

  /// Config names first, then canonical ordering names, then built-ins over
  /// every symbol of the registry.
  Ordering ordering(const std::string& name) const {
    if (auto it = orderings.find(name); it != orderings.end()) return it->second;
    for (const auto& [k, o] : orderings)
      if (o.name() == name) return o;
    if (!builtin_orderings) detail::fail("UnknownOrdering", name);
    std::vector<SymbolId> all;
    for (SymbolId s = 0; s < reg->size(); ++s) all.push_back(s);
    return Ordering::named(name, *reg, all);
  }
};

namespace detail {

enum class Grade { even, odd, mixed };

inline Grade grade_of(const Ast& a, const Registry& reg) {
  using K = Ast::Kind;
  auto combine = [](Grade x, Grade y) {
    if (x == Grade::mixed || y == Grade::mixed) return Grade::mixed;
    return x == y ? Grade::even : Grade::odd;
  };
  switch (a.kind) {
    case K::number:
    case K::imag:
    case K::scalar:
      return Grade::even;
    case K::symbol:
      return reg.is_fermion(reg.id(a.name)) ? Grade::odd : Grade::even;
    case K::neg:
    case K::order:
      return grade_of(a.children[0], reg);
    case K::exp:
      return grade_of(a.children[0], reg) == Grade::even ? Grade::even : Grade::mixed;
    case K::pow: {
      Grade g = grade_of(a.children[0], reg);
      return g == Grade::odd && a.n % 2 == 0 ? Grade::even : g;
    }
    case K::product:
    case K::comm:
    case K::acomm: {
      Grade g = Grade::even;
      for (const auto& c : a.children) g = combine(g, grade_of(c, reg));
      return g;
    }
    case K::sum: {
      Grade g = grade_of(a.children[0], reg);
      for (const auto& c : a.children)
        if (grade_of(c, reg) != g) return Grade::mixed;
      return g;
    }
  }
  return Grade::mixed;
}

class Parser {
 public:
  Parser(std::string_view src, const ParseContext& ctx) : src_(src), ctx_(ctx) {}

  Ast parse() {
    Ast a = expr();
    skip();
    if (pos_ != src_.size()) error({"+", "-", "*", "end of input"});
    return a;
  }

 private:
  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) error({std::string("'") + c + "'"});
  }
  [[noreturn]] void error(std::set<std::string> expected) {
    skip();
    std::string found = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'" : "end of input";
    throw SyntaxError(pos_, std::move(expected), found);
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
  }
  static bool ident_char(char c) {
    return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '\'';
  }

  Ast expr() {
    std::vector<Ast> terms{term()};
    std::vector<bool> minus{false};
    while (true) {
      skip();
      if (accept('+')) minus.push_back(false);
      else if (accept('-')) minus.push_back(true);
      else break;
      terms.push_back(term());
    }
    if (terms.size() == 1) return std::move(terms[0]);
    Ast s = Ast::node(Ast::Kind::sum, std::move(terms));
    s.minus = std::move(minus);
    return s;
  }

  Ast term() {
    std::vector<Ast> factors{unary()};
    while (accept('*')) factors.push_back(unary());
    if (factors.size() == 1) return std::move(factors[0]);
    return Ast::node(Ast::Kind::product, std::move(factors));
  }

  Ast unary() {
    if (accept('-')) return Ast::node(Ast::Kind::neg, {unary()});
    return postfix();
  }

  Ast postfix() {
    Ast base = primary();
    skip();
    if (pos_ < src_.size() && src_[pos_] == '^') {
      ++pos_;
      return Ast::node(Ast::Kind::pow, {std::move(base)}, {}, integer());
    }
    return base;
  }

  int integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) error({"INT"});
    return std::stoi(std::string(src_.substr(start, pos_ - start)));
  }

  Ast primary() {
    skip();
    if (pos_ >= src_.size()) error({"NUMBER", "SYMBOL", "(", "-"});
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Ast inner = expr();
      expect(')');
      return inner;
    }
    if (ident_start(c)) return identifier();
    error({"NUMBER", "SYMBOL", "(", "-"});
  }

  Ast number() {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    } else if (pos_ + 1 < src_.size() && src_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      ++pos_;
      digits();
    }
    std::string text(src_.substr(start, pos_ - start));
    try {
      return Ast::num(parse_rational(text));
    } catch (const Error&) {
      pos_ = start;
      error({"NUMBER"});
    }
  }

  Ast identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (src_.substr(pos_, 2) == "^+") {
      pos_ += 2;
      name += "†";
    }
    skip();
    char next = pos_ < src_.size() ? src_[pos_] : '\0';
    if (next == '(' && (name == "comm" || name == "acomm")) {
      ++pos_;
      Ast lhs = expr();
      expect(',');
      Ast rhs = expr();
      expect(')');
      auto kind = name == "comm" ? Ast::Kind::comm : Ast::Kind::acomm;
      check_bracket(kind, lhs, rhs, start);
      return Ast::node(kind, {std::move(lhs), std::move(rhs)});
    }
    if (next == '(' && name == "exp") {
      ++pos_;
      Ast body = expr();
      expect(';');
      int order = integer();
      expect(')');
      return Ast::node(Ast::Kind::exp, {std::move(body)}, {}, order);
    }
    if (next == '[') {
      if (!ctx_.has_ordering(name)) detail::fail("UnknownOrdering", name + " at position " + std::to_string(start));
      ++pos_;
      Ast body = expr();
      expect(']');
      return Ast::node(Ast::Kind::order, {std::move(body)}, name);
    }
    if (ctx_.reg && ctx_.reg->find(name)) return Ast::leaf(Ast::Kind::symbol, name);
    if (ctx_.reg && ctx_.reg->is_scalar(name)) return Ast::leaf(Ast::Kind::scalar, name);
    if (name == "i") return Ast::leaf(Ast::Kind::imag);
    detail::fail("UnknownSymbol", "'" + name + "' at position " + std::to_string(start));
  }

  void check_bracket(Ast::Kind kind, const Ast& lhs, const Ast& rhs, std::size_t at) {
    Grade a = grade_of(lhs, *ctx_.reg), b = grade_of(rhs, *ctx_.reg);
    std::string where = " at position " + std::to_string(at);
    if (a == Grade::mixed || b == Grade::mixed)
      detail::fail("StatisticsMismatch", "bracket operand has mixed statistics" + where);
    bool both_odd = a == Grade::odd && b == Grade::odd;
    if (kind == Ast::Kind::comm && both_odd)
      detail::fail("StatisticsMismatch", "comm of two fermionic operands; use acomm" + where);
    if (kind == Ast::Kind::acomm && !both_odd)
      detail::fail("StatisticsMismatch", "acomm needs two fermionic operands; use comm" + where);
  }

  std::string_view src_;
  const ParseContext& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Ast parse_expression(std::string_view src, const ParseContext& ctx) {
  return detail::Parser(src, ctx).parse();
}

/// Canonical text form; parse_expression(print_expression(a)) == a.
inline std::string print_expression(const Ast& a) {
  using K = Ast::Kind;
  auto wrap = [](const Ast& c, std::initializer_list<K> kinds) {
    for (K k : kinds)
      if (c.kind == k) return "(" + print_expression(c) + ")";
    return print_expression(c);
  };
  switch (a.kind) {
    case K::number:
      return rational_str(a.number);
    case K::imag:
      return "i";
    case K::symbol:
    case K::scalar:
      return a.name;
    case K::sum: {
      std::string out = wrap(a.children[0], {K::sum});
      for (std::size_t k = 1; k < a.children.size(); ++k)
        out += (a.minus[k] ? " - " : " + ") + wrap(a.children[k], {K::sum});
      return out;
    }
    case K::product: {
      std::string out;
      for (const auto& c : a.children) out += (out.empty() ? "" : "*") + wrap(c, {K::sum, K::product});
      return out;
    }
    case K::neg:
      return "-" + wrap(a.children[0], {K::sum, K::product});
    case K::pow:
      return wrap(a.children[0], {K::sum, K::product, K::neg, K::pow}) + "^" + std::to_string(a.n);
    case K::comm:
    case K::acomm:
      return std::string(a.kind == K::comm ? "comm(" : "acomm(") + print_expression(a.children[0]) + ", " +
             print_expression(a.children[1]) + ")";
    case K::order:
      return a.name + "[" + print_expression(a.children[0]) + "]";
    case K::exp:
      return "exp(" + print_expression(a.children[0]) + "; " + std::to_string(a.n) + ")";
  }
  return "";
}

/// The operator polynomial denoted by the expression; ordering applications
/// are carried out, nothing is reduced.
inline OperatorPoly evaluate_expression(const Ast& a, const ParseContext& ctx, Diagnostics* diag = nullptr) {
  using K = Ast::Kind;
  const RegistryPtr& reg = ctx.reg;
  auto sub = [&](std::size_t k) { return evaluate_expression(a.children[k], ctx, diag); };
  auto tidy = [&](const OperatorPoly& p) {
    return p.map_coefficients([&](const ScalarPoly& c) { return c.reduce_squares(reg->squares()); });
  };
  switch (a.kind) {
    case K::number:
      return OperatorPoly::scalar(reg, ScalarPoly(GaussianRational(a.number)));
    case K::imag:
      return OperatorPoly::scalar(reg, ScalarPoly(GaussianRational::i()));
    case K::scalar:
      return OperatorPoly::scalar(reg, ScalarPoly::symbol(a.name));
    case K::symbol:
      return OperatorPoly::symbol(reg, reg->id(a.name));
    case K::sum: {
      OperatorPoly out(reg);
      for (std::size_t k = 0; k < a.children.size(); ++k) {
        if (a.minus[k]) out -= sub(k);
        else out += sub(k);
      }
      return out;
    }
    case K::product: {
      OperatorPoly out = sub(0);
      for (std::size_t k = 1; k < a.children.size(); ++k) out = tidy(out * sub(k));
      return out;
    }
    case K::neg:
      return ScalarPoly(-1) * sub(0);
    case K::pow: {
      OperatorPoly base = sub(0), out = OperatorPoly::scalar(reg, 1);
      for (int k = 0; k < a.n; ++k) out = tidy(out * base);
      return out;
    }
    case K::comm:
    case K::acomm: {
      OperatorPoly x = sub(0), y = sub(1);
      return tidy(a.kind == K::comm ? x * y - y * x : x * y + y * x);
    }
    case K::order:
      return order_poly(ctx.ordering(a.name), sub(0), diag);
    case K::exp: {
      OperatorPoly body = sub(0), term = OperatorPoly::scalar(reg, 1), out = term;
      for (int k = 1; k <= a.n; ++k) {
        term = tidy(ScalarPoly(GaussianRational(Rational(1, k))) * (term * body));
        out += term;
      }
      return out;
    }
  }
  return OperatorPoly(reg);
}

inline OperatorPoly parse_operator(std::string_view src, const ParseContext& ctx, Diagnostics* diag = nullptr) {
  return evaluate_expression(parse_expression(src, ctx), ctx, diag);
}

/// A scalar given either in the exact interchange form ("p/q+r/s i") or as an
/// expression over declared scalar symbols ("-i*s").
inline ScalarPoly parse_scalar(std::string_view src, const ParseContext& ctx) {
  try {
    return ScalarPoly(GaussianRational::parse(src));
  } catch (const Error&) {
  }
  OperatorPoly p = parse_operator(src, ctx);
  if (!p.is_scalar()) detail::fail("NotCNumber", "'" + std::string(src) + "' is not a scalar");
  return p.scalar_part();
}

}  // namespace gwt
