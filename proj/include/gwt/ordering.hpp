#pragma once
// Operator orderings: signed permutation orderings, Weyl symmetrization, and
// the indirect ordering of one operator set through a linear basis change.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gwt/errors.hpp"
#include "gwt/operator.hpp"

namespace gwt {

enum class OrderingKind { permutation, symmetric };
enum class Signature { bosonic, fermionic };

struct Diagnostics {
  std::vector<std::string> warnings;
};

/// A permutation ordering places symbols of lower precedence value further
/// left; equal values are ties and keep their input order. A symmetric
/// ordering averages over all arrangements.
class Ordering {
 public:
  static Ordering permutation(std::string name, std::map<SymbolId, Rational> precedence,
                              Signature signature = Signature::fermionic, bool warn_on_ties = false) {
    Ordering o;
    o.name_ = std::move(name);
    o.kind_ = OrderingKind::permutation;
    o.signature_ = signature;
    o.precedence_ = std::move(precedence);
    o.warn_on_ties_ = warn_on_ties;
    return o;
  }

  static Ordering symmetric(std::string name, const std::vector<SymbolId>& domain) {
    Ordering o;
    o.name_ = std::move(name);
    o.kind_ = OrderingKind::symmetric;
    o.signature_ = Signature::bosonic;
    for (SymbolId s : domain) o.precedence_.emplace(s, Rational(0));
    return o;
  }

  /// Creation operators (daggered) left of annihilation operators.
  static Ordering normal(const Registry& reg, const std::vector<SymbolId>& domain) {
    return by_rule("normal", reg, domain, [](const OperatorSymbol& s) { return Rational(s.dagger ? 0 : 1); });
  }
  static Ordering antinormal(const Registry& reg, const std::vector<SymbolId>& domain) {
    return by_rule("antinormal", reg, domain, [](const OperatorSymbol& s) { return Rational(s.dagger ? 1 : 0); });
  }
  /// Later keys (times) to the left.
  static Ordering time_desc(const Registry& reg, const std::vector<SymbolId>& domain) {
    Ordering o = by_rule("time-desc", reg, domain, [](const OperatorSymbol& s) { return Rational(-s.key); });
    o.warn_on_ties_ = true;
    return o;
  }
  /// Position quadratures (names starting with 'q') left of momenta ('p').
  static Ordering qp(const Registry& reg, const std::vector<SymbolId>& domain) {
    std::map<SymbolId, Rational> prec;
    for (SymbolId s : domain) {
      char c = reg.name(s).empty() ? '\0' : reg.name(s)[0];
      if (c != 'q' && c != 'p')
        detail::fail("IncomparableKeys", "qp ordering cannot place '" + reg.name(s) + "'");
      prec.emplace(s, Rational(c == 'q' ? 0 : 1));
    }
    return permutation("qp", std::move(prec));
  }
  /// Explicit ranking list, leftmost first.
  static Ordering ranked(std::string name, const std::vector<SymbolId>& ranking) {
    std::map<SymbolId, Rational> prec;
    for (std::size_t k = 0; k < ranking.size(); ++k) prec.emplace(ranking[k], Rational(static_cast<long long>(k)));
    return permutation(std::move(name), std::move(prec));
  }
  static Ordering weyl(const std::vector<SymbolId>& domain) { return symmetric("weyl", domain); }

  /// Built-in comparator by name (accepts the one-letter aliases N, A, W, T).
  static Ordering named(const std::string& name, const Registry& reg, const std::vector<SymbolId>& domain) {
    if (name == "normal" || name == "N") return normal(reg, domain);
    if (name == "antinormal" || name == "A") return antinormal(reg, domain);
    if (name == "time-desc" || name == "T") return time_desc(reg, domain);
    if (name == "qp") return qp(reg, domain);
    if (name == "weyl" || name == "W") return weyl(domain);
    detail::fail("UnknownOrdering", name);
  }

  const std::string& name() const { return name_; }
  OrderingKind kind() const { return kind_; }
  Signature signature() const { return signature_; }
  bool warn_on_ties() const { return warn_on_ties_; }
  const std::map<SymbolId, Rational>& precedence_map() const { return precedence_; }

  bool in_domain(SymbolId s) const { return precedence_.count(s) > 0; }
  std::vector<SymbolId> domain() const {
    std::vector<SymbolId> out;
    for (const auto& [s, _] : precedence_) out.push_back(s);
    return out;
  }

  const Rational& precedence(SymbolId s) const {
    auto it = precedence_.find(s);
    if (it == precedence_.end())
      detail::fail("IncomparableKeys", "symbol #" + std::to_string(s) + " is outside the domain of " + name_);
    return it->second;
  }

  /// Strict step function: true iff `a` is placed left of `b`.
  bool left_of(SymbolId a, SymbolId b) const {
    if (kind_ != OrderingKind::permutation)
      detail::fail("NotPermutationOrdering", name_ + " has no comparator");
    return precedence(a) < precedence(b);
  }

 private:
  template <typename Rule>
  static Ordering by_rule(std::string name, const Registry& reg, const std::vector<SymbolId>& domain, Rule rule) {
    std::map<SymbolId, Rational> prec;
    for (SymbolId s : domain) prec.emplace(s, rule(reg.at(s)));
    return permutation(std::move(name), std::move(prec));
  }

  std::string name_;
  OrderingKind kind_ = OrderingKind::permutation;
  Signature signature_ = Signature::fermionic;
  std::map<SymbolId, Rational> precedence_;
  bool warn_on_ties_ = false;
};

/// Applies an ordering to a single word.
inline OperatorPoly order_word(const Ordering& o, const RegistryPtr& reg, const Word& w,
                               Diagnostics* diag = nullptr) {
  for (SymbolId s : w) (void)o.precedence(s);
  if (o.kind() == OrderingKind::symmetric) {
    for (SymbolId s : w)
      if (reg->is_fermion(s)) detail::fail("SymmetricOnFermions", reg->name(s));
    std::vector<std::size_t> perm(w.size());
    std::iota(perm.begin(), perm.end(), 0);
    OperatorPoly out(reg);
    long long count = 0;
    std::map<Word, long long> tally;
    do {
      Word v(w.size());
      for (std::size_t k = 0; k < w.size(); ++k) v[k] = w[perm[k]];
      ++tally[v];
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (const auto& [v, n] : tally) out.add_term(v, ScalarPoly(GaussianRational(Rational(n, count))));
    return out;
  }

  std::vector<std::size_t> idx(w.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return o.precedence(w[a]) < o.precedence(w[b]); });
  // Each fermion pair whose relative order flips contributes one sign.
  int inversions = 0;
  if (o.signature() == Signature::fermionic) {
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        if (idx[a] > idx[b] && reg->is_fermion(w[idx[a]]) && reg->is_fermion(w[idx[b]])) ++inversions;
  }
  if (diag && o.warn_on_ties()) {
    for (std::size_t a = 0; a < w.size(); ++a)
      for (std::size_t b = a + 1; b < w.size(); ++b)
        if (w[a] != w[b] && reg->is_fermion(w[a]) && reg->is_fermion(w[b]) &&
            o.precedence(w[a]) == o.precedence(w[b]))
          diag->warnings.push_back("equal-key fermions " + reg->name(w[a]) + ", " + reg->name(w[b]) +
                                   " kept in input order by " + o.name());
  }
  Word v(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) v[k] = w[idx[k]];
  return OperatorPoly::word(reg, std::move(v), ScalarPoly(inversions % 2 ? -1 : 1));
}

inline OperatorPoly order_poly(const Ordering& o, const OperatorPoly& p, Diagnostics* diag = nullptr) {
  OperatorPoly out(p.registry());
  for (const auto& [w, c] : p.terms()) out += c * order_word(o, p.registry(), w, diag);
  return out;
}

/// Linear relation phi_alpha = L_{alpha k} varphi_k between the symbols an
/// ordering O acts on (source) and those O' acts on (target).
class BasisChange {
 public:
  static BasisChange identity(const std::vector<SymbolId>& ids) {
    BasisChange b;
    b.source_ = ids;
    b.target_ = ids;
    for (SymbolId s : ids) b.rows_[s] = Expansion{{s, ScalarPoly(1)}};
    b.inverse_ = b.rows_;
    b.identity_ = true;
    return b;
  }

  /// Rows from the registry: a source symbol that is itself a target maps to
  /// itself, otherwise its composite expansion must use target symbols only.
  static BasisChange from_registry(const Registry& reg, const std::vector<SymbolId>& source,
                                   const std::vector<SymbolId>& target) {
    BasisChange b;
    b.source_ = source;
    b.target_ = target;
    std::set<SymbolId> tset(target.begin(), target.end());
    bool ident = source == target;
    for (SymbolId s : source) {
      if (tset.count(s)) {
        b.rows_[s] = Expansion{{s, ScalarPoly(1)}};
        continue;
      }
      ident = false;
      if (reg.is_elementary(s)) detail::fail("SymbolNotInBasis", reg.name(s));
      for (const auto& [k, _] : reg.expansion(s))
        if (!tset.count(k)) detail::fail("SymbolNotInBasis", reg.name(s) + " expands onto " + reg.name(k));
      b.rows_[s] = reg.expansion(s);
    }
    b.identity_ = ident;
    if (ident) b.inverse_ = b.rows_;
    return b;
  }

  static BasisChange from_rows(std::vector<SymbolId> source, std::vector<SymbolId> target,
                               std::map<SymbolId, Expansion> rows) {
    BasisChange b;
    b.source_ = std::move(source);
    b.target_ = std::move(target);
    for (SymbolId s : b.source_) {
      auto it = rows.find(s);
      bool nonzero = false;
      if (it != rows.end())
        for (const auto& [_, c] : it->second) nonzero = nonzero || !c.is_zero();
      if (!nonzero) detail::fail("InvalidBasisChange", "empty row for symbol #" + std::to_string(s));
    }
    b.rows_ = std::move(rows);
    return b;
  }

  /// Optional expansion of target symbols over source symbols.
  void set_inverse(std::map<SymbolId, Expansion> inverse) { inverse_ = std::move(inverse); }
  bool has_inverse() const { return !inverse_.empty(); }
  const Expansion& inverse_row(SymbolId target) const {
    auto it = inverse_.find(target);
    if (it == inverse_.end())
      detail::fail("BasisNotInvertible", "no inverse row for symbol #" + std::to_string(target));
    return it->second;
  }

  const std::vector<SymbolId>& source() const { return source_; }
  const std::vector<SymbolId>& target() const { return target_; }
  bool is_identity() const { return identity_; }

  const Expansion& row(SymbolId s) const {
    auto it = rows_.find(s);
    if (it == rows_.end()) detail::fail("SymbolNotInBasis", "symbol #" + std::to_string(s));
    return it->second;
  }

  ScalarPoly entry(SymbolId s, SymbolId k) const {
    for (const auto& [t, c] : row(s))
      if (t == k) return c;
    return {};
  }

  /// Rewrites a polynomial over source symbols into target symbols.
  OperatorPoly expand(const OperatorPoly& p) const {
    OperatorPoly out(p.registry());
    for (const auto& [w, c] : p.terms()) {
      std::vector<std::pair<Word, ScalarPoly>> acc{{Word{}, c}};
      for (SymbolId s : w) {
        std::vector<std::pair<Word, ScalarPoly>> next;
        for (const auto& [pw, pc] : acc)
          for (const auto& [k, lk] : row(s)) {
            Word nw = pw;
            nw.push_back(k);
            next.emplace_back(std::move(nw), pc * lk);
          }
        acc = std::move(next);
      }
      for (auto& [nw, nc] : acc) out.add_term(std::move(nw), nc);
    }
    return out;
  }

 private:
  std::vector<SymbolId> source_, target_;
  std::map<SymbolId, Expansion> rows_;
  std::map<SymbolId, Expansion> inverse_;
  bool identity_ = false;
};

/// O'-ordering of a word over source symbols: expand every factor through
/// the basis change, then order each target word.
inline OperatorPoly order_word_foreign(const Ordering& oprime, const RegistryPtr& reg, const Word& w,
                                       const BasisChange& basis, Diagnostics* diag = nullptr) {
  OperatorPoly expanded = basis.expand(OperatorPoly::word(reg, w));
  return order_poly(oprime, expanded, diag);
}

inline OperatorPoly order_poly_foreign(const Ordering& oprime, const OperatorPoly& p, const BasisChange& basis,
                                       Diagnostics* diag = nullptr) {
  return order_poly(oprime, basis.expand(p), diag);
}

/// The pair of orderings a theorem instance relates, with its basis change.
struct OrderingPair {
  Ordering from;      // O, acts on basis.source()
  Ordering to;        // O', acts on basis.target()
  BasisChange basis;  // phi = L varphi
};

}  // namespace gwt
