#pragma once
// Exact c-number ring: Gaussian rationals and multivariate polynomials over
// them in named commuting symbols.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gwt/errors.hpp"

namespace gwt {

using Rational = boost::multiprecision::cpp_rational;

inline std::string rational_str(const Rational& r) { return r.str(); }

inline double rational_to_double(const Rational& r) {
  return static_cast<double>(r);
}

/// Parses "p", "p/q", or a terminating decimal such as "-0.25" exactly.
inline Rational parse_rational(std::string_view text) {
  static const std::regex frac(R"(^\s*([+-]?)(\d+)(?:/(\d+))?\s*$)");
  static const std::regex dec(R"(^\s*([+-]?)(\d*)\.(\d+)\s*$)");
  std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, frac)) {
    std::string whole = m[2].str();
    whole.erase(0, std::min(whole.find_first_not_of('0'), whole.size() - 1));
    Rational num{boost::multiprecision::cpp_int(whole)};
    if (m[3].matched) {
      std::string d = m[3].str();
      d.erase(0, std::min(d.find_first_not_of('0'), d.size() - 1));
      boost::multiprecision::cpp_int den(d);
      if (den == 0) detail::fail("ParseError", "zero denominator in '" + s + "'");
      num /= Rational(den);
    }
    return m[1].str() == "-" ? Rational(-num) : num;
  }
  if (std::regex_match(s, m, dec)) {
    std::string digits = m[2].str() + m[3].str();
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));  // no octal prefix
    boost::multiprecision::cpp_int scale = 1;
    for (std::size_t k = 0; k < static_cast<std::size_t>(m[3].length()); ++k) scale *= 10;
    Rational value(boost::multiprecision::cpp_int(digits.empty() ? "0" : digits), scale);
    return m[1].str() == "-" ? Rational(-value) : value;
  }
  detail::fail("ParseError", "not a rational literal: '" + s + "'");
}

class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long long re) : re_(re) {}  // NOLINT: implicit by design of literals
  GaussianRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }
  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }
  GaussianRational conj() const { return {re_, -im_}; }

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    if (o.im_ == 0) {
      re_ *= o.re_;
      im_ *= o.re_;
      return *this;
    }
    Rational re = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    if (o.is_zero()) detail::fail("DivisionByZero", "Gaussian rational division by zero");
    Rational norm = o.re_ * o.re_ + o.im_ * o.im_;
    *this *= o.conj();
    re_ /= norm;
    im_ /= norm;
    return *this;
  }
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  std::complex<double> to_complex() const {
    return {rational_to_double(re_), rational_to_double(im_)};
  }

  /// Exact interchange form: "p/q", "r/s i", "p/q+r/s i".
  std::string str() const {
    if (im_ == 0) return rational_str(re_);
    std::string im = rational_str(abs(im_)) + " i";
    if (re_ == 0) return (im_ < 0 ? "-" : "") + im;
    return rational_str(re_) + (im_ < 0 ? "-" : "+") + im;
  }

  /// Expression-syntax form ("1/2", "-i", "(1+2*i)"). `standalone` drops the
  /// parentheses around a complex value.
  std::string expr_str(bool standalone = true) const {
    auto imag_part = [](const Rational& v) {
      if (v == 1) return std::string("i");
      if (v == -1) return std::string("-i");
      return rational_str(v) + "*i";
    };
    if (im_ == 0) return rational_str(re_);
    if (re_ == 0) return imag_part(im_);
    std::string body = rational_str(re_) + (im_ < 0 ? "-" : "+") + imag_part(abs(im_));
    return standalone ? body : "(" + body + ")";
  }

  /// Accepts the exact interchange form produced by str(): "p/q",
  /// "r/s i", "p/q+r/s i" (the space before i is optional).
  static GaussianRational parse(std::string_view text) {
    std::string s;
    for (char ch : text)
      if (ch != ' ' && ch != '\t') s += ch;
    if (s.empty()) detail::fail("ParseError", "empty Gaussian rational");
    if (s.back() != 'i') return {parse_rational(s), Rational(0)};
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
      if (s[k] == '+' || s[k] == '-') {
        split = k;
        break;
      }
    auto imag_of = [](const std::string& t) {
      if (t.empty() || t == "+") return Rational(1);
      if (t == "-") return Rational(-1);
      return parse_rational(t);
    };
    if (split == std::string::npos) return {Rational(0), imag_of(s)};
    return {parse_rational(s.substr(0, split)), imag_of(s.substr(split))};
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

/// Product of named commuting symbols with positive exponents, kept sorted by
/// name so that equal monomials compare equal.
class Monomial {
 public:
  Monomial() = default;
  static Monomial symbol(std::string name, int exponent = 1) {
    Monomial m;
    if (exponent > 0) m.factors_.emplace_back(std::move(name), exponent);
    return m;
  }

  const std::vector<std::pair<std::string, int>>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }
  int degree() const {
    int d = 0;
    for (const auto& [_, e] : factors_) d += e;
    return d;
  }
  int exponent_of(const std::string& name) const {
    for (const auto& [n, e] : factors_)
      if (n == name) return e;
    return 0;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial out;
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() || j != b.factors_.end()) {
      if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
        out.factors_.push_back(*i++);
      } else if (i == a.factors_.end() || j->first < i->first) {
        out.factors_.push_back(*j++);
      } else {
        out.factors_.emplace_back(i->first, i->second + j->second);
        ++i;
        ++j;
      }
    }
    return out;
  }

  // Lexicographic on symbol names, then exponent.
  friend bool operator<(const Monomial& a, const Monomial& b) { return a.factors_ < b.factors_; }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors_ == b.factors_; }

  std::string str() const {
    std::string out;
    for (const auto& [n, e] : factors_) {
      if (!out.empty()) out += "*";
      out += n;
      if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
  }

 private:
  friend class ScalarPoly;
  std::vector<std::pair<std::string, int>> factors_;
};

/// Symbol assignments used when a scalar is evaluated in floating point.
struct NumericContext {
  std::map<std::string, std::complex<double>> assignments;
};

class ScalarPoly {
 public:
  using TermMap = std::map<Monomial, GaussianRational>;

  ScalarPoly() = default;
  ScalarPoly(GaussianRational c) {  // NOLINT
    if (!c.is_zero()) terms_.emplace(Monomial{}, std::move(c));
  }
  ScalarPoly(long long c) : ScalarPoly(GaussianRational(c)) {}  // NOLINT
  ScalarPoly(int c) : ScalarPoly(GaussianRational(static_cast<long long>(c))) {}  // NOLINT

  static ScalarPoly symbol(const std::string& name) {
    ScalarPoly p;
    p.terms_.emplace(Monomial::symbol(name), GaussianRational(1));
    return p;
  }
  static ScalarPoly term(Monomial m, GaussianRational c) {
    ScalarPoly p;
    if (!c.is_zero()) p.terms_.emplace(std::move(m), std::move(c));
    return p;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
  GaussianRational constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? GaussianRational{} : it->second;
  }
  /// The value of a constant polynomial; throws if symbols remain.
  GaussianRational constant() const {
    if (!is_constant()) detail::fail("NotConstant", "scalar '" + str() + "' is not a constant");
    return constant_term();
  }

  std::set<std::string> free_symbols() const {
    std::set<std::string> out;
    for (const auto& [m, _] : terms_)
      for (const auto& [n, e] : m.factors()) out.insert(n);
    return out;
  }

  ScalarPoly operator-() const {
    ScalarPoly out = *this;
    for (auto& [_, c] : out.terms_) c = -c;
    return out;
  }
  ScalarPoly& operator+=(const ScalarPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  ScalarPoly& operator-=(const ScalarPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  ScalarPoly& operator*=(const ScalarPoly& o) { return *this = *this * o; }
  friend ScalarPoly operator+(ScalarPoly a, const ScalarPoly& b) { return a += b; }
  friend ScalarPoly operator-(ScalarPoly a, const ScalarPoly& b) { return a -= b; }
  friend ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b) {
    ScalarPoly out;
    if (a.is_zero() || b.is_zero()) return out;
    if (b.is_constant()) {
      const GaussianRational& c = b.terms_.begin()->second;
      out = a;
      for (auto& [_, v] : out.terms_) v *= c;
      return out;
    }
    if (a.is_constant()) return b * a;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    return out;
  }
  friend bool operator==(const ScalarPoly& a, const ScalarPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const ScalarPoly& a, const ScalarPoly& b) { return !(a == b); }

  ScalarPoly pow(unsigned n) const {
    ScalarPoly result(1), base = *this;
    while (n) {
      if (n & 1U) result *= base;
      n >>= 1U;
      if (n) base *= base;
    }
    return result;
  }

  void add_term(const Monomial& m, const GaussianRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  /// Total degree in the given subset of symbols (0 for the zero polynomial).
  int degree_in(const std::set<std::string>& symbols) const {
    int best = 0;
    for (const auto& [m, _] : terms_) {
      int d = 0;
      for (const auto& [n, e] : m.factors())
        if (symbols.count(n)) d += e;
      best = std::max(best, d);
    }
    return best;
  }

  /// Drops every term whose degree in `symbols` exceeds `max_degree`.
  ScalarPoly truncate_degree(const std::set<std::string>& symbols, int max_degree) const {
    ScalarPoly out;
    for (const auto& [m, c] : terms_) {
      int d = 0;
      for (const auto& [n, e] : m.factors())
        if (symbols.count(n)) d += e;
      if (d <= max_degree) out.terms_.emplace(m, c);
    }
    return out;
  }

  /// Reduces modulo relations s^2 = value (used for radicals such as 2^{-1/2}).
  ScalarPoly reduce_squares(const std::map<std::string, GaussianRational>& squares) const {
    if (squares.empty()) return *this;
    ScalarPoly out;
    for (const auto& [m, c] : terms_) {
      Monomial reduced;
      GaussianRational coeff = c;
      for (const auto& [n, e] : m.factors()) {
        auto rel = squares.find(n);
        if (rel == squares.end()) {
          reduced.factors_.emplace_back(n, e);
          continue;
        }
        for (int k = 0; k < e / 2; ++k) coeff *= rel->second;
        if (e % 2) reduced.factors_.emplace_back(n, 1);
      }
      out.add_term(reduced, coeff);
    }
    return out;
  }

  /// Replaces a symbol by a polynomial.
  ScalarPoly substitute(const std::string& name, const ScalarPoly& value) const {
    ScalarPoly out;
    for (const auto& [m, c] : terms_) {
      Monomial rest;
      int e = 0;
      for (const auto& f : m.factors()) {
        if (f.first == name) e = f.second;
        else rest.factors_.push_back(f);
      }
      out += ScalarPoly::term(rest, c) * value.pow(static_cast<unsigned>(e));
    }
    return out;
  }

  std::complex<double> evaluate(const NumericContext& ctx) const {
    std::complex<double> total = 0.0;
    for (const auto& [m, c] : terms_) {
      std::complex<double> v = c.to_complex();
      for (const auto& [n, e] : m.factors()) {
        auto it = ctx.assignments.find(n);
        if (it == ctx.assignments.end()) detail::fail("UnassignedSymbol", n);
        v *= std::pow(it->second, e);
      }
      total += v;
    }
    return total;
  }

  /// Expression-syntax rendering, parseable by the expression parser.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      std::string t;
      if (m.empty()) {
        t = c.expr_str(true);
      } else if (c == GaussianRational(1)) {
        t = m.str();
      } else if (c == GaussianRational(-1)) {
        t = "-" + m.str();
      } else {
        t = c.expr_str(false) + "*" + m.str();
      }
      if (out.empty()) out = t;
      else if (t[0] == '-') out += " - " + t.substr(1);
      else out += " + " + t;
    }
    return out;
  }

 private:
  TermMap terms_;
};

}  // namespace gwt
