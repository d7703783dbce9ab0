#pragma once
// Contraction data between two orderings: C_ab = (O - O') phi_a phi_b, its
// step-function form, the target-basis form, the scalar form for a single
// linear combination, and the split annihilator/creator block for fermions.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gwt/errors.hpp"
#include "gwt/operator.hpp"
#include "gwt/ordering.hpp"

namespace gwt {

enum class Parity { symmetric, antisymmetric };

class ContractionMatrix {
 public:
  ContractionMatrix() = default;
  ContractionMatrix(RegistryPtr reg, std::vector<SymbolId> index, Parity parity)
      : reg_(std::move(reg)), index_(std::move(index)), parity_(parity) {}

  const RegistryPtr& registry() const { return reg_; }
  const std::vector<SymbolId>& index() const { return index_; }
  Parity parity() const { return parity_; }

  ScalarPoly at(SymbolId a, SymbolId b) const {
    auto it = entries_.find({a, b});
    return it == entries_.end() ? ScalarPoly{} : it->second;
  }
  void set(SymbolId a, SymbolId b, ScalarPoly v) {
    if (v.is_zero()) entries_.erase({a, b});
    else entries_[{a, b}] = std::move(v);
  }
  const std::map<std::pair<SymbolId, SymbolId>, ScalarPoly>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  /// Names of the ordering pair the matrix was computed for ("" if unknown).
  std::string from, to;

  friend bool operator==(const ContractionMatrix& a, const ContractionMatrix& b) {
    return a.index_ == b.index_ && a.entries_ == b.entries_;
  }

  ContractionMatrix scaled(const ScalarPoly& c) const {
    ContractionMatrix out = *this;
    for (auto& [_, v] : out.entries_) v = c * v;
    if (c.is_zero()) out.entries_.clear();
    return out;
  }

 private:
  RegistryPtr reg_;
  std::vector<SymbolId> index_;
  Parity parity_ = Parity::symmetric;
  std::map<std::pair<SymbolId, SymbolId>, ScalarPoly> entries_;
};

namespace detail {

inline Parity parity_of(const Registry& reg, const std::vector<SymbolId>& ids) {
  bool any = false, all = true;
  for (SymbolId s : ids) {
    any = any || reg.is_fermion(s);
    all = all && reg.is_fermion(s);
  }
  return any && all ? Parity::antisymmetric : Parity::symmetric;
}

inline ScalarPoly require_cnumber(const OperatorPoly& reduced, const std::string& where) {
  if (!reduced.is_scalar()) fail("NotCNumber", where + " leaves " + reduced.str());
  return reduced.scalar_part();
}

}  // namespace detail

/// C_ab = O(phi_a phi_b) - O'(phi_a phi_b), the latter through the basis change.
inline ContractionMatrix contraction_def(const Ordering& o, const Ordering& oprime, const BasisChange& basis,
                                         const CommutationTable& table) {
  const RegistryPtr& reg = table.registry();
  const auto& ids = basis.source();
  ContractionMatrix c(reg, ids, detail::parity_of(*reg, ids));
  c.from = o.name();
  c.to = oprime.name();
  Reducer reducer(table);
  for (SymbolId a : ids)
    for (SymbolId b : ids) {
      Word w{a, b};
      OperatorPoly diff = order_word(o, reg, w) - order_word_foreign(oprime, reg, w, basis);
      c.set(a, b, detail::require_cnumber(reducer.reduce(diff), "(" + reg->name(a) + ", " + reg->name(b) + ")"));
    }
  return c;
}

/// Step-function form, summed over the basis change:
///   C_ab = sum_kl th'(l left of k) L_ak L_bl [v_k, v_l] - th(b left of a) [phi_a, phi_b]
/// with strict steps (ties count as not transposed).
inline ContractionMatrix contraction_theta(const Ordering& o, const Ordering& oprime, const BasisChange& basis,
                                           const CommutationTable& table) {
  if (o.kind() != OrderingKind::permutation)
    detail::fail("NotPermutationOrdering", o.name() + " has no step function");
  if (oprime.kind() != OrderingKind::permutation)
    detail::fail("NotPermutationOrdering", oprime.name() + " has no step function");
  const RegistryPtr& reg = table.registry();
  const auto& ids = basis.source();
  ContractionMatrix c(reg, ids, detail::parity_of(*reg, ids));
  c.from = o.name();
  c.to = oprime.name();
  for (SymbolId a : ids)
    for (SymbolId b : ids) {
      ScalarPoly v;
      for (const auto& [k, lak] : basis.row(a))
        for (const auto& [l, lbl] : basis.row(b))
          if (oprime.left_of(l, k)) v += lak * lbl * table.bracket(k, l);
      if (o.left_of(b, a)) v -= table.bracket(a, b);
      c.set(a, b, v.reduce_squares(reg->squares()));
    }
  return c;
}

/// C~_kl = (O - O') v_k v_l over the target symbols. O only acts on source
/// symbols, so each target symbol is first written through the inverse rows.
inline ContractionMatrix tilde_contraction(const Ordering& o, const Ordering& oprime, const BasisChange& basis,
                                           const CommutationTable& table) {
  const RegistryPtr& reg = table.registry();
  const auto& ids = basis.target();
  ContractionMatrix c(reg, ids, detail::parity_of(*reg, ids));
  c.from = o.name();
  c.to = oprime.name();
  Reducer reducer(table);
  for (SymbolId k : ids)
    for (SymbolId l : ids) {
      OperatorPoly lhs(reg);
      for (const auto& [a, mka] : basis.inverse_row(k))
        for (const auto& [b, mlb] : basis.inverse_row(l)) lhs += (mka * mlb) * order_word(o, reg, Word{a, b});
      OperatorPoly diff = lhs - order_word(oprime, reg, Word{k, l});
      c.set(k, l, detail::require_cnumber(reducer.reduce(diff), "(" + reg->name(k) + ", " + reg->name(l) + ")"));
    }
  return c;
}

/// L C~ L^T, for comparison with the source-basis matrix.
inline ContractionMatrix transform_tilde(const ContractionMatrix& tilde, const BasisChange& basis) {
  const RegistryPtr& reg = tilde.registry();
  ContractionMatrix c(reg, basis.source(), detail::parity_of(*reg, basis.source()));
  c.from = tilde.from;
  c.to = tilde.to;
  for (SymbolId a : basis.source())
    for (SymbolId b : basis.source()) {
      ScalarPoly v;
      for (const auto& [k, lak] : basis.row(a))
        for (const auto& [l, lbl] : basis.row(b)) v += lak * lbl * tilde.at(k, l);
      c.set(a, b, v.reduce_squares(reg->squares()));
    }
  return c;
}

struct ScalarContraction {
  ScalarPoly value;
  std::vector<std::pair<SymbolId, ScalarPoly>> lambda;        // over source symbols
  std::vector<std::pair<SymbolId, ScalarPoly>> lambda_tilde;  // over target symbols
};

/// C = (O - O') X^2 for X = lambda_a phi_a = lambda~_k v_k, with no basis
/// change between the two symbol sets.
inline ScalarContraction scalar_contraction_implicit(const std::vector<std::pair<SymbolId, ScalarPoly>>& lambda,
                                                     const std::vector<std::pair<SymbolId, ScalarPoly>>& lambda_tilde,
                                                     const Ordering& o, const Ordering& oprime,
                                                     const CommutationTable& table) {
  const RegistryPtr& reg = table.registry();
  Reducer reducer(table);
  OperatorPoly x(reg), xt(reg);
  for (const auto& [a, c] : lambda) x += c * OperatorPoly::symbol(reg, a);
  for (const auto& [k, c] : lambda_tilde) xt += c * OperatorPoly::symbol(reg, k);
  if (!reducer.reduce(x - xt).is_zero()) detail::fail("RelationViolated", x.str() + " != " + xt.str());
  OperatorPoly lhs = order_poly(o, x * x);
  OperatorPoly rhs = order_poly(oprime, xt * xt);
  ScalarContraction out;
  out.value = detail::require_cnumber(reducer.reduce(lhs - rhs), "(O - O')X^2");
  out.lambda = lambda;
  out.lambda_tilde = lambda_tilde;
  return out;
}

/// C_ab lambda_a lambda_b.
inline ScalarPoly contract_with(const ContractionMatrix& c, const std::vector<std::pair<SymbolId, ScalarPoly>>& lambda) {
  ScalarPoly v;
  for (const auto& [a, la] : lambda)
    for (const auto& [b, lb] : lambda) v += la * lb * c.at(a, b);
  return c.registry() ? v.reduce_squares(c.registry()->squares()) : v;
}

/// Annihilator/creator block Cbar_ab = C(psi_a, psi+_b) of a fermionic pair.
struct FermionContraction {
  std::vector<SymbolId> psi, psi_dagger;
  std::vector<std::vector<ScalarPoly>> bar;  // bar[a][b]
  ContractionMatrix full;
};

inline FermionContraction fermion_field_contraction(const std::vector<SymbolId>& psi,
                                                    const std::vector<SymbolId>& psi_dagger, const Ordering& o,
                                                    const Ordering& oprime, const CommutationTable& table) {
  const Registry& reg = *table.registry();
  auto check_family = [&](const std::vector<SymbolId>& fam) {
    for (SymbolId x : fam) {
      if (!reg.is_fermion(x)) detail::fail("FamilyAxiomViolated", reg.name(x) + " is not fermionic");
      for (SymbolId y : fam)
        if (!table.bracket(x, y).is_zero())
          detail::fail("FamilyAxiomViolated", "{" + reg.name(x) + ", " + reg.name(y) + "} != 0");
    }
  };
  check_family(psi);
  check_family(psi_dagger);
  std::vector<SymbolId> all = psi;
  all.insert(all.end(), psi_dagger.begin(), psi_dagger.end());
  FermionContraction out;
  out.psi = psi;
  out.psi_dagger = psi_dagger;
  out.full = contraction_def(o, oprime, BasisChange::identity(all), table);
  out.bar.assign(psi.size(), std::vector<ScalarPoly>(psi_dagger.size()));
  for (std::size_t a = 0; a < psi.size(); ++a)
    for (std::size_t b = 0; b < psi_dagger.size(); ++b) out.bar[a][b] = out.full.at(psi[a], psi_dagger[b]);
  return out;
}

}  // namespace gwt
