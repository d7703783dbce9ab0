#pragma once
// Small symbol sets shared by the unit tests.

#include <catch_amalgamated.hpp>

#include <memory>
#include <string>
#include <vector>

#include "gwt/operator.hpp"
#include "gwt/ordering.hpp"

template <>
struct Catch::StringMaker<gwt::ScalarPoly> {
  static std::string convert(const gwt::ScalarPoly& p) { return p.str(); }
};
template <>
struct Catch::StringMaker<gwt::OperatorPoly> {
  static std::string convert(const gwt::OperatorPoly& p) { return p.str(); }
};

namespace fixtures {

using namespace gwt;

inline ScalarPoly half() { return ScalarPoly(GaussianRational(Rational(1, 2))); }
inline ScalarPoly I() { return ScalarPoly(GaussianRational::i()); }

/// Bosonic modes a_k, a_k† with [a_k, a_l†] = delta_kl.
struct Bosons {
  std::shared_ptr<Registry> reg = std::make_shared<Registry>();
  std::vector<SymbolId> a, ad;
  std::unique_ptr<CommutationTable> table;

  explicit Bosons(int modes, MissingRule missing = MissingRule::zero) {
    const char* names[] = {"a", "b", "c", "d"};
    for (int k = 0; k < modes; ++k) {
      a.push_back(reg->add({names[k], Statistics::boson, 0, false}));
      ad.push_back(reg->add({std::string(names[k]) + "†", Statistics::boson, 0, true}));
    }
    table = std::make_unique<CommutationTable>(reg, missing);
    for (int k = 0; k < modes; ++k)
      for (int l = 0; l < modes; ++l) table->set(a[k], ad[l], k == l ? 1 : 0);
  }
  std::vector<SymbolId> all() const {
    std::vector<SymbolId> v;
    for (std::size_t k = 0; k < a.size(); ++k) {
      v.push_back(a[k]);
      v.push_back(ad[k]);
    }
    return v;
  }
  OperatorPoly w(Word word) const { return OperatorPoly::word(reg, std::move(word)); }
  OperatorPoly one() const { return OperatorPoly::scalar(reg, 1); }
};

/// One mode with quadratures q = s(a + a†), p = -i s(a - a†), s^2 = 1/2.
struct Quadratures {
  std::shared_ptr<Registry> reg = std::make_shared<Registry>();
  SymbolId a, ad, q, p;
  std::unique_ptr<CommutationTable> table;

  Quadratures() {
    a = reg->add({"a", Statistics::boson, 0, false});
    ad = reg->add({"a†", Statistics::boson, 0, true});
    reg->set_square("s", GaussianRational(Rational(1, 2)));
    ScalarPoly s = ScalarPoly::symbol("s");
    q = reg->add_composite({"q", Statistics::boson}, {{a, s}, {ad, s}});
    p = reg->add_composite({"p", Statistics::boson}, {{a, -I() * s}, {ad, I() * s}});
    table = std::make_unique<CommutationTable>(reg);
    table->set(a, ad, 1);
  }
  BasisChange basis() const {
    BasisChange b = BasisChange::from_registry(*reg, {q, p}, {a, ad});
    ScalarPoly s = ScalarPoly::symbol("s");
    b.set_inverse({{a, {{q, s}, {p, I() * s}}}, {ad, {{q, s}, {p, -I() * s}}}});
    return b;
  }
};

/// Fermionic fields c(t) and c†(t) of a single mode at given times; every
/// pair {c(t), c†(t')} = 1 and like fields anticommute to zero.
struct TimedFermions {
  std::shared_ptr<Registry> reg = std::make_shared<Registry>();
  std::vector<SymbolId> c, cd;
  std::unique_ptr<CommutationTable> table;

  TimedFermions(const std::vector<int>& times_c, const std::vector<int>& times_cd) {
    auto name = [&](std::string base, int t) {
      base += "(" + std::to_string(t) + ")";
      while (reg->find(base)) base += "'";
      return base;
    };
    for (int t : times_c) c.push_back(reg->add({name("c", t), Statistics::fermion, t, false}));
    for (int t : times_cd) cd.push_back(reg->add({name("c†", t), Statistics::fermion, t, true}));
    table = std::make_unique<CommutationTable>(reg);
    for (SymbolId x : c)
      for (SymbolId y : c) table->set(x, y, 0);
    for (SymbolId x : cd)
      for (SymbolId y : cd) table->set(x, y, 0);
    for (SymbolId x : c)
      for (SymbolId y : cd) table->set(x, y, 1);
  }
  std::vector<SymbolId> all() const {
    std::vector<SymbolId> v = c;
    v.insert(v.end(), cd.begin(), cd.end());
    return v;
  }
  OperatorPoly w(Word word) const { return OperatorPoly::word(reg, std::move(word)); }
};

}  // namespace fixtures
