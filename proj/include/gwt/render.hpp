#pragma once
// Text, JSON and LaTeX renderings of polynomials, contractions and
// expressions. JSON carries exact coefficients as "p/q+r/s i" strings.

#include <json.hpp>

#include <cctype>
#include <string>

#include "gwt/contraction.hpp"
#include "gwt/errors.hpp"
#include "gwt/operator.hpp"
#include "gwt/parser.hpp"
#include "gwt/scalar.hpp"

namespace gwt {

enum class Format { text, json, latex };

inline Format parse_format(const std::string& s) {
  if (s == "text") return Format::text;
  if (s == "json") return Format::json;
  if (s == "latex") return Format::latex;
  detail::fail("UnknownFormat", s);
}

/// Exact coefficient string: the interchange form for numbers, expression
/// syntax when scalar symbols remain.
inline std::string exact_str(const ScalarPoly& c) { return c.is_constant() ? c.constant().str() : c.str(); }

inline nlohmann::json poly_json(const OperatorPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  const Registry& reg = *p.registry();
  for (const auto& [w, c] : p.terms()) {
    nlohmann::json word = nlohmann::json::array();
    for (SymbolId s : w) word.push_back(reg.name(s));
    terms.push_back({{"word", word}, {"coefficient", exact_str(c)}});
  }
  return {{"text", p.str()}, {"terms", terms}};
}

// ---- LaTeX ----------------------------------------------------------------

/// "a†" -> "a^{\dagger}", "c1" -> "c_{1}", "psi2†" -> "\psi_{2}^{\dagger}".
inline std::string latex_symbol(const std::string& name) {
  static const std::string dagger = "†";
  std::string base = name;
  bool dag = false;
  if (base.size() >= dagger.size() && base.compare(base.size() - dagger.size(), dagger.size(), dagger) == 0) {
    dag = true;
    base.erase(base.size() - dagger.size());
  }
  std::string primes;
  while (!base.empty() && base.back() == '\'') {
    primes += "'";
    base.pop_back();
  }
  std::size_t cut = base.size();
  while (cut > 0 && std::isdigit(static_cast<unsigned char>(base[cut - 1]))) --cut;
  std::string stem = base.substr(0, cut), sub = base.substr(cut);
  static const char* greek[] = {"alpha", "beta", "gamma", "delta", "phi", "varphi", "psi", "chi", "xi", "eta"};
  for (const char* g : greek)
    if (stem == g) stem = std::string("\\") + g;
  std::string out = stem + (sub.empty() ? "" : "_{" + sub + "}") + primes;
  return dag ? out + "^{\\dagger}" : out;
}

inline std::string latex_rational(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  std::string sign = r < 0 ? "-" : "";
  return sign + "\\frac{" + boost::multiprecision::cpp_int(abs(numerator(r))).str() + "}{" + denominator(r).str() + "}";
}

inline std::string latex_gaussian(const GaussianRational& g) {
  auto im = [](const Rational& v) {
    if (v == 1) return std::string("i");
    if (v == -1) return std::string("-i");
    return latex_rational(v) + " i";
  };
  if (g.im() == 0) return latex_rational(g.re());
  if (g.re() == 0) return im(g.im());
  std::string i = im(g.im());
  return "\\left(" + latex_rational(g.re()) + (i[0] == '-' ? " - " + i.substr(1) : " + " + i) + "\\right)";
}

inline std::string latex_scalar(const ScalarPoly& c) {
  if (c.is_zero()) return "0";
  std::string out;
  for (const auto& [m, v] : c.terms()) {
    std::string mono;
    for (const auto& [n, e] : m.factors()) {
      if (!mono.empty()) mono += " ";
      mono += latex_symbol(n) + (e != 1 ? "^{" + std::to_string(e) + "}" : "");
    }
    std::string t;
    if (mono.empty()) t = latex_gaussian(v);
    else if (v == GaussianRational(1)) t = mono;
    else if (v == GaussianRational(-1)) t = "-" + mono;
    else t = latex_gaussian(v) + " " + mono;
    if (out.empty()) out = t;
    else if (t[0] == '-') out += " - " + t.substr(1);
    else out += " + " + t;
  }
  return out;
}

inline std::string latex_poly(const OperatorPoly& p) {
  if (p.is_zero()) return "0";
  const Registry& reg = *p.registry();
  std::string out;
  for (const auto& [w, c] : p.terms()) {
    std::string word;
    for (SymbolId s : w) word += (word.empty() ? "" : " ") + latex_symbol(reg.name(s));
    std::string t;
    std::string cs = latex_scalar(c);
    bool compound = c.terms().size() > 1;
    if (word.empty()) t = compound && !out.empty() ? "\\left(" + cs + "\\right)" : cs;
    else if (c == ScalarPoly(1)) t = word;
    else if (c == ScalarPoly(-1)) t = "-" + word;
    else t = (compound ? "\\left(" + cs + "\\right)" : cs) + " " + word;
    if (out.empty()) out = t;
    else if (t[0] == '-') out += " - " + t.substr(1);
    else out += " + " + t;
  }
  return out;
}

/// Ordering symbols: calligraphic N, A, W, T for the standard orderings.
inline std::string latex_ordering(const std::string& name) {
  if (name == "N" || name == "normal") return "\\mathcal{N}";
  if (name == "A" || name == "antinormal") return "\\mathcal{A}";
  if (name == "W" || name == "weyl") return "\\mathcal{W}";
  if (name == "T" || name == "time-desc") return "\\mathcal{T}";
  return "\\mathcal{O}_{\\mathrm{" + name + "}}";
}

inline std::string latex_expression(const Ast& a) {
  using K = Ast::Kind;
  auto wrap = [](const Ast& c, std::initializer_list<K> kinds) {
    for (K k : kinds)
      if (c.kind == k) return "\\left(" + latex_expression(c) + "\\right)";
    return latex_expression(c);
  };
  switch (a.kind) {
    case K::number:
      return latex_rational(a.number);
    case K::imag:
      return "i";
    case K::symbol:
    case K::scalar:
      return latex_symbol(a.name);
    case K::sum: {
      std::string out = wrap(a.children[0], {K::sum});
      for (std::size_t k = 1; k < a.children.size(); ++k)
        out += (a.minus[k] ? " - " : " + ") + wrap(a.children[k], {K::sum});
      return out;
    }
    case K::product: {
      std::string out;
      for (const auto& c : a.children) out += (out.empty() ? "" : " ") + wrap(c, {K::sum, K::product});
      return out;
    }
    case K::neg:
      return "-" + wrap(a.children[0], {K::sum, K::product});
    case K::pow:
      return "{" + wrap(a.children[0], {K::sum, K::product, K::neg, K::pow}) + "}^{" + std::to_string(a.n) + "}";
    case K::comm:
      return "\\left[" + latex_expression(a.children[0]) + ", " + latex_expression(a.children[1]) + "\\right]";
    case K::acomm:
      return "\\left\\{" + latex_expression(a.children[0]) + ", " + latex_expression(a.children[1]) + "\\right\\}";
    case K::order:
      return latex_ordering(a.name) + "\\left[" + latex_expression(a.children[0]) + "\\right]";
    case K::exp:
      return "e^{" + latex_expression(a.children[0]) + "}";
  }
  return "";
}

// ---- contractions -----------------------------------------------------------

inline std::string contraction_text(const ContractionMatrix& c) {
  const Registry& reg = *c.registry();
  std::string out = "C(" + c.from + " - " + c.to + ")";
  out += c.parity() == Parity::antisymmetric ? ", antisymmetric\n" : ", symmetric\n";
  bool any = false;
  for (SymbolId a : c.index())
    for (SymbolId b : c.index()) {
      ScalarPoly v = c.at(a, b);
      if (v.is_zero()) continue;
      any = true;
      out += "C[" + reg.name(a) + ", " + reg.name(b) + "] = " + v.str() + "\n";
    }
  if (!any) out += "all entries vanish\n";
  return out;
}

inline nlohmann::json contraction_json(const ContractionMatrix& c) {
  const Registry& reg = *c.registry();
  nlohmann::json index = nlohmann::json::array(), entries = nlohmann::json::array();
  for (SymbolId a : c.index()) index.push_back(reg.name(a));
  for (SymbolId a : c.index())
    for (SymbolId b : c.index()) {
      ScalarPoly v = c.at(a, b);
      if (!v.is_zero()) entries.push_back({{"row", reg.name(a)}, {"col", reg.name(b)}, {"value", exact_str(v)}});
    }
  return {{"from", c.from},
          {"to", c.to},
          {"parity", c.parity() == Parity::antisymmetric ? "antisymmetric" : "symmetric"},
          {"index", index},
          {"entries", entries}};
}

inline std::string contraction_latex(const ContractionMatrix& c) {
  const Registry& reg = *c.registry();
  std::string out = "C = \\begin{pmatrix}";
  bool first_row = true;
  for (SymbolId a : c.index()) {
    out += first_row ? " " : " \\\\ ";
    first_row = false;
    bool first = true;
    for (SymbolId b : c.index()) {
      out += (first ? "" : " & ") + latex_scalar(c.at(a, b));
      first = false;
    }
  }
  out += " \\end{pmatrix}, \\quad (";
  bool first = true;
  for (SymbolId a : c.index()) {
    out += (first ? "" : ", ") + latex_symbol(reg.name(a));
    first = false;
  }
  return out + ")";
}

}  // namespace gwt
