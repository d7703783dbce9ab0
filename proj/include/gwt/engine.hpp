#pragma once
// The General Wick Theorem in its derivative (e^Gamma) and substitution
// (phi' = phi + C d) forms, with the derivative calculus both rely on.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gwt/contraction.hpp"
#include "gwt/errors.hpp"
#include "gwt/operator.hpp"
#include "gwt/ordering.hpp"

namespace gwt {

enum class Flavor { bosonic, grassmann };

struct DerivativeIndex {
  SymbolId symbol = 0;
  Flavor flavor = Flavor::bosonic;

  static DerivativeIndex of(const Registry& reg, SymbolId s) {
    return {s, reg.is_fermion(s) ? Flavor::grassmann : Flavor::bosonic};
  }
};

namespace detail {

inline void check_flavor(const Registry& reg, const DerivativeIndex& d, Flavor expected) {
  if (d.flavor != expected)
    fail("FlavorMismatch", "derivative flavor does not match the requested calculus");
  if ((d.flavor == Flavor::grassmann) != reg.is_fermion(d.symbol))
    fail("FlavorMismatch", reg.name(d.symbol) + " has " + to_string(reg.at(d.symbol).statistics) + " statistics");
}

// Left derivative: each occurrence is deleted; a Grassmann derivative picks up
// one sign per fermionic factor it passes.
inline OperatorPoly derive(const OperatorPoly& p, SymbolId s, bool graded) {
  const RegistryPtr& reg = p.registry();
  OperatorPoly out(reg);
  for (const auto& [w, c] : p.terms()) {
    int passed = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j] == s) {
        Word rest;
        rest.reserve(w.size() - 1);
        rest.insert(rest.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(j));
        rest.insert(rest.end(), w.begin() + static_cast<std::ptrdiff_t>(j) + 1, w.end());
        out.add_term(std::move(rest), graded && passed % 2 ? -c : c);
      }
      if (reg->is_fermion(w[j])) ++passed;
    }
  }
  return out;
}

}  // namespace detail

inline OperatorPoly derive_boson(const OperatorPoly& p, const DerivativeIndex& d) {
  detail::check_flavor(*p.registry(), d, Flavor::bosonic);
  return detail::derive(p, d.symbol, false);
}

inline OperatorPoly derive_grassmann(const OperatorPoly& p, const DerivativeIndex& d) {
  detail::check_flavor(*p.registry(), d, Flavor::grassmann);
  return detail::derive(p, d.symbol, true);
}

/// Flavor chosen from the symbol's statistics.
inline OperatorPoly derive(const OperatorPoly& p, SymbolId s) {
  return detail::derive(p, s, p.registry()->is_fermion(s));
}

/// Gamma = 1/2 C_ab d_a d_b. On fermions the derivative with the first
/// index is applied first: Gamma p = 1/2 C_ab d_b(d_a p).
class GammaOperator {
 public:
  explicit GammaOperator(ContractionMatrix c) : c_(std::move(c)) {
    const Registry& reg = *c_.registry();
    for (const auto& [ab, v] : c_.entries()) {
      const auto& [a, b] = ab;
      bool fa = reg.is_fermion(a), fb = reg.is_fermion(b);
      if (fa != fb) detail::fail("FlavorMismatch", "contraction couples a boson and a fermion");
      ScalarPoly partner = c_.at(b, a);
      if (fa ? partner != -v : partner != v)
        detail::fail("FlavorMismatch", "contraction parity does not match statistics at (" + reg.name(a) + ", " +
                                           reg.name(b) + ")");
    }
  }

  const ContractionMatrix& contraction() const { return c_; }

  OperatorPoly apply(const OperatorPoly& p) const {
    OperatorPoly out(p.registry());
    if (p.degree() < 2) return out;
    const auto& sq = c_.registry()->squares();
    // group by first index so d_a p is computed once
    std::map<SymbolId, std::vector<std::pair<SymbolId, const ScalarPoly*>>> rows;
    for (const auto& [ab, v] : c_.entries()) rows[ab.first].emplace_back(ab.second, &v);
    ScalarPoly half(GaussianRational(Rational(1, 2)));
    for (const auto& [a, row] : rows) {
      OperatorPoly da = derive(p, a);
      if (da.is_zero()) continue;
      for (const auto& [b, v] : row) {
        OperatorPoly dba = derive(da, b);
        if (!dba.is_zero()) out += (half * *v) * dba;
      }
    }
    return out.map_coefficients([&](const ScalarPoly& c) { return c.reduce_squares(sq); });
  }

 private:
  ContractionMatrix c_;
};

inline OperatorPoly gamma_apply(const GammaOperator& g, const OperatorPoly& p) { return g.apply(p); }

/// sum_m Gamma^m p / m!; terminates since Gamma lowers the degree by two.
inline OperatorPoly exp_gamma_apply(const GammaOperator& g, const OperatorPoly& p) {
  OperatorPoly out = p;
  OperatorPoly term = p;
  for (long long m = 1; !term.is_zero(); ++m) {
    term = ScalarPoly(GaussianRational(Rational(1, m))) * g.apply(term);
    out += term;
  }
  return out;
}

/// O'[e^Gamma F]: the derivative form of the theorem through a basis change.
inline OperatorPoly gwt_exponential_form(const Ordering& oprime, const BasisChange& basis, const GammaOperator& g,
                                         const OperatorPoly& f) {
  return order_poly_foreign(oprime, exp_gamma_apply(g, f), basis);
}

/// O'[F(phi')] with phi'_a = phi_a + C_ab d_b. Each product is built from the
/// right: P_k = phi_k P_{k+1} + C_{k b} d_b P_{k+1}, so every derivative acts on
/// the factors to its right before O' is applied.
inline OperatorPoly gwt_substitution(const Ordering& o, const Ordering& oprime, const BasisChange& basis,
                                     const ContractionMatrix& c, const OperatorPoly& f) {
  if ((!c.from.empty() && c.from != o.name()) || (!c.to.empty() && c.to != oprime.name()))
    detail::fail("ContractionMismatch", "contraction was computed for " + c.from + " vs " + c.to);
  const RegistryPtr& reg = f.registry();
  std::map<SymbolId, std::vector<std::pair<SymbolId, ScalarPoly>>> rows;
  for (const auto& [ab, v] : c.entries()) rows[ab.first].emplace_back(ab.second, v);
  std::set<SymbolId> index(c.index().begin(), c.index().end());

  OperatorPoly formal(reg);
  for (const auto& [w, coeff] : f.terms()) {
    OperatorPoly acc = OperatorPoly::scalar(reg, coeff);
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      if (!index.count(*it)) detail::fail("ContractionMismatch", reg->name(*it) + " is not indexed by the contraction");
      OperatorPoly next = OperatorPoly::symbol(reg, *it) * acc;
      if (auto r = rows.find(*it); r != rows.end())
        for (const auto& [b, v] : r->second) next += v * derive(acc, b);
      acc = std::move(next);
    }
    formal += acc;
  }
  formal = formal.map_coefficients([&](const ScalarPoly& x) { return x.reduce_squares(reg->squares()); });
  return order_poly_foreign(oprime, formal, basis);
}

/// Coefficients f_n of F = sum_n f_n X^n, given F over the single symbol X.
inline std::vector<ScalarPoly> univariate_coefficients(const OperatorPoly& f, SymbolId x) {
  std::vector<ScalarPoly> out;
  for (const auto& [w, c] : f.terms()) {
    for (SymbolId s : w)
      if (s != x) detail::fail("NotUnivariate", "F contains " + f.registry()->name(s));
    if (out.size() <= w.size()) out.resize(w.size() + 1);
    out[w.size()] += c;
  }
  return out;
}

/// O[F(X)] = e^{C d_X^2 / 2} O'[F(X)] for X = lambda~_k v_k:
///   X^n -> sum_m n! / (m! (n-2m)! 2^m) C^m O'[X^(n-2m)].
inline OperatorPoly gwt_implicit(const std::vector<ScalarPoly>& f, const ScalarPoly& c, const OperatorPoly& x_tilde,
                                 const Ordering& oprime) {
  const RegistryPtr& reg = x_tilde.registry();
  for (const auto& [w, _] : x_tilde.terms()) {
    if (w.size() != 1) detail::fail("NotUnivariate", "X must be linear in the operators");
    if (reg->is_fermion(w[0])) detail::fail("FlavorMismatch", "X must be bosonic");
  }
  std::vector<OperatorPoly> powers{OperatorPoly::scalar(reg, 1)};
  for (std::size_t n = 1; n < f.size(); ++n) powers.push_back(powers.back() * x_tilde);
  std::vector<OperatorPoly> ordered;
  for (const auto& p : powers) ordered.push_back(order_poly(oprime, p));

  OperatorPoly out(reg);
  ScalarPoly half_c = ScalarPoly(GaussianRational(Rational(1, 2))) * c;
  for (std::size_t n = 0; n < f.size(); ++n) {
    if (f[n].is_zero()) continue;
    // n! / (m! (n-2m)!) accumulated incrementally
    Rational ratio = 1;
    ScalarPoly cm = 1;
    for (std::size_t m = 0; 2 * m <= n; ++m) {
      if (m > 0) {
        ratio *= Rational(static_cast<long long>((n - 2 * m + 2) * (n - 2 * m + 1)), static_cast<long long>(m));
        cm *= half_c;
      }
      out += (f[n] * ScalarPoly(GaussianRational(ratio)) * cm) * ordered[n - 2 * m];
    }
  }
  return out.map_coefficients([&](const ScalarPoly& v) { return v.reduce_squares(reg->squares()); });
}

/// Several combinations X^i at once: F over bosonic placeholder symbols X^i,
/// pairwise scalar contractions C^{ij} held in `g`, and the expansions of the
/// placeholders over target symbols.
inline OperatorPoly gwt_implicit_multi(const OperatorPoly& f, const GammaOperator& g,
                                       const std::map<SymbolId, OperatorPoly>& x_tilde, const Ordering& oprime) {
  OperatorPoly smoothed = exp_gamma_apply(g, f);
  const RegistryPtr& reg = f.registry();
  OperatorPoly expanded(reg);
  for (const auto& [w, c] : smoothed.terms()) {
    OperatorPoly acc = OperatorPoly::scalar(reg, c);
    for (SymbolId s : w) {
      auto it = x_tilde.find(s);
      if (it == x_tilde.end()) detail::fail("NotUnivariate", reg->name(s) + " has no expansion");
      acc = acc * it->second;
    }
    expanded += acc;
  }
  return order_poly(oprime, expanded);
}

/// Truncated series of e^X for X = lambda_a phi_a with commuting formal
/// coefficients lambda_a; terms of total lambda-degree above max_order dropped.
struct ExponentialSeries {
  OperatorPoly lhs;  // O[e^X]
  OperatorPoly rhs;  // e^{C lambda lambda / 2} O'[e^X]
};

namespace detail {

inline OperatorPoly truncate_lambda(const OperatorPoly& p, const std::set<std::string>& lam, int max_order) {
  return p.map_coefficients([&](const ScalarPoly& c) { return c.truncate_degree(lam, max_order); });
}

}  // namespace detail

inline ExponentialSeries gwt_exponential_series(const Ordering& o, const Ordering& oprime, const BasisChange& basis,
                                                const ContractionMatrix& c,
                                                const std::vector<std::pair<SymbolId, ScalarPoly>>& lambda,
                                                int max_order) {
  if (max_order < 0) detail::fail("InvalidArgument", "max_order must be non-negative");
  const RegistryPtr& reg = c.registry();
  std::set<std::string> lam;
  OperatorPoly x(reg);
  for (const auto& [a, l] : lambda) {
    if (reg->is_fermion(a)) detail::fail("FlavorMismatch", "exponential series needs bosonic sources");
    for (const auto& s : l.free_symbols()) lam.insert(s);
    x += l * OperatorPoly::symbol(reg, a);
  }
  // sum_n X^n / n!
  OperatorPoly series = OperatorPoly::scalar(reg, 1);
  OperatorPoly term = series;
  for (int n = 1; n <= max_order; ++n) {
    term = detail::truncate_lambda(ScalarPoly(GaussianRational(Rational(1, n))) * (term * x), lam, max_order);
    series += term;
  }
  ExponentialSeries out;
  out.lhs = detail::truncate_lambda(order_poly(o, series), lam, max_order);

  ScalarPoly s = ScalarPoly(GaussianRational(Rational(1, 2))) * contract_with(c, lambda);
  ScalarPoly es = 1, sterm = 1;
  for (int m = 1; 2 * m <= max_order; ++m) {
    sterm = (sterm * s * ScalarPoly(GaussianRational(Rational(1, m)))).truncate_degree(lam, max_order);
    es += sterm;
  }
  out.rhs = detail::truncate_lambda(es * order_poly_foreign(oprime, series, basis), lam, max_order);
  return out;
}

}  // namespace gwt
