#include <catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"
#include "gwt/engine.hpp"

using namespace gwt;
using namespace fixtures;

namespace {

std::vector<Word> all_words(const std::vector<SymbolId>& ids, std::size_t max_len) {
  std::vector<Word> out{{}};
  std::vector<Word> frontier{{}};
  for (std::size_t n = 1; n <= max_len; ++n) {
    std::vector<Word> next;
    for (const Word& w : frontier)
      for (SymbolId s : ids) {
        Word v = w;
        v.push_back(s);
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

// Checks O[w] = O'[e^Gamma w] = O'[w(phi')] for every word up to max_len.
void check_forms(const Ordering& o, const Ordering& op, const BasisChange& b, const CommutationTable& t,
                 std::size_t max_len) {
  const RegistryPtr& reg = t.registry();
  ContractionMatrix c = contraction_def(o, op, b, t);
  GammaOperator g(c);
  Reducer r(t);
  for (const Word& w : all_words(b.source(), max_len)) {
    OperatorPoly f = OperatorPoly::word(reg, w);
    OperatorPoly lhs = r.reduce(order_poly(o, f));
    OperatorPoly via_gamma = r.reduce(gwt_exponential_form(op, b, g, f));
    OperatorPoly via_subst = r.reduce(gwt_substitution(o, op, b, c, f));
    INFO(f.str());
    CHECK(lhs == via_gamma);
    CHECK(lhs == via_subst);
    if (b.is_identity()) CHECK(lhs == r.reduce(exp_gamma_apply(g, order_word_foreign(op, reg, w, b))));
  }
}

}  // namespace

TEST_CASE("c-number derivatives", "[engine]") {
  Bosons m(1);
  SymbolId a = m.a[0], ad = m.ad[0];
  auto d = DerivativeIndex::of(*m.reg, a);
  CHECK(derive_boson(m.w({a, ad, a}), d) == m.w({ad, a}) + m.w({a, ad}));
  CHECK(derive_boson(m.w({ad, ad}), d).is_zero());
  CHECK_THROWS_AS(derive_grassmann(m.w({a}), d), Error);

  Quadratures qp;
  auto dq = DerivativeIndex::of(*qp.reg, qp.q);
  CHECK(derive_boson(OperatorPoly::word(qp.reg, {qp.q, qp.q}), dq) ==
        ScalarPoly(2) * OperatorPoly::symbol(qp.reg, qp.q));
}

TEST_CASE("grassmann derivatives", "[engine]") {
  TimedFermions f({1}, {1});
  SymbolId c = f.c[0], cd = f.cd[0];
  auto dc = DerivativeIndex::of(*f.reg, c);
  CHECK(derive_grassmann(f.w({c}), dc) == OperatorPoly::scalar(f.reg, 1));
  CHECK(derive_grassmann(f.w({cd, c}), dc) == -f.w({cd}));
  CHECK(derive_grassmann(derive_grassmann(f.w({c, cd}), dc), dc).is_zero());
  CHECK_THROWS_AS(derive_boson(f.w({c}), dc), Error);
}

TEST_CASE("grassmann derivatives anticommute", "[engine][property]") {
  TimedFermions f({1, 2}, {1, 2});
  auto ids = f.all();
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, 3), coef(-2, 2);
  for (int trial = 0; trial < 50; ++trial) {
    OperatorPoly p(f.reg);
    for (int term = 0; term < 4; ++term) {
      Word w;
      int len = 1 + pick(rng);
      for (int k = 0; k < len; ++k) w.push_back(ids[pick(rng)]);
      p.add_term(w, coef(rng));
    }
    for (SymbolId x : ids) {
      CHECK(derive(derive(p, x), x).is_zero());
      for (SymbolId y : ids) CHECK((derive(derive(p, x), y) + derive(derive(p, y), x)).is_zero());
    }
  }
}

TEST_CASE("gamma lowers degree by two", "[engine]") {
  Bosons m(1);
  auto ids = m.all();
  BasisChange id = BasisChange::identity(ids);
  Ordering a = Ordering::antinormal(*m.reg, ids), n = Ordering::normal(*m.reg, ids);
  GammaOperator g(contraction_def(a, n, id, *m.table));
  CHECK(gamma_apply(g, m.w({m.a[0]})).is_zero());
  CHECK(gamma_apply(g, m.w({m.a[0], m.ad[0]})) == m.one());
  OperatorPoly cubic = m.w({m.a[0], m.ad[0], m.a[0]}) + m.w({m.ad[0], m.ad[0], m.ad[0]});
  CHECK(gamma_apply(g, gamma_apply(g, cubic)).is_zero());

  GammaOperator zero(contraction_def(n, n, id, *m.table));
  CHECK(exp_gamma_apply(zero, cubic) == cubic);

  // A[a a†] = e^Gamma N[a a†]
  OperatorPoly via = exp_gamma_apply(g, order_word(n, m.reg, {m.a[0], m.ad[0]}));
  CHECK(via == m.w({m.ad[0], m.a[0]}) + m.one());
  CHECK(via == canonical_reduce(m.w({m.a[0], m.ad[0]}), *m.table));
}

TEST_CASE("gamma rejects a contraction with the wrong parity", "[engine]") {
  Bosons m(1);
  ContractionMatrix c(m.reg, m.all(), Parity::symmetric);
  c.set(m.a[0], m.ad[0], 1);
  CHECK_THROWS_AS(GammaOperator(c), Error);
}

TEST_CASE("substitution form examples", "[engine]") {
  Bosons m(1);
  auto ids = m.all();
  BasisChange id = BasisChange::identity(ids);
  Ordering a = Ordering::antinormal(*m.reg, ids), n = Ordering::normal(*m.reg, ids);
  ContractionMatrix c = contraction_def(a, n, id, *m.table);
  CHECK(gwt_substitution(a, n, id, c, m.w({m.a[0], m.ad[0]})) == m.w({m.ad[0], m.a[0]}) + m.one());
  CHECK(gwt_substitution(a, n, id, c, m.w({m.ad[0]})) == m.w({m.ad[0]}));
  CHECK_THROWS_AS(gwt_substitution(n, a, id, c, m.w({m.ad[0]})), Error);

  TimedFermions f({2}, {1});
  auto fids = f.all();
  BasisChange fid = BasisChange::identity(fids);
  Ordering t = Ordering::time_desc(*f.reg, fids), fn = Ordering::normal(*f.reg, fids);
  ContractionMatrix fc = contraction_def(t, fn, fid, *f.table);
  OperatorPoly got = gwt_substitution(t, fn, fid, fc, f.w({f.c[0], f.cd[0]}));
  CHECK(got == -f.w({f.cd[0], f.c[0]}) + OperatorPoly::scalar(f.reg, 1));
  CHECK(canonical_reduce(order_word(t, f.reg, {f.c[0], f.cd[0]}), *f.table) == canonical_reduce(got, *f.table));
}

TEST_CASE("all forms agree on short words", "[engine][property]") {
  SECTION("bosons, antinormal and weyl against normal") {
    Bosons m(1);
    auto ids = m.all();
    BasisChange id = BasisChange::identity(ids);
    Ordering n = Ordering::normal(*m.reg, ids);
    check_forms(Ordering::antinormal(*m.reg, ids), n, id, *m.table, 5);
    check_forms(Ordering::weyl(ids), n, id, *m.table, 5);
    check_forms(n, Ordering::antinormal(*m.reg, ids), id, *m.table, 4);
  }
  SECTION("quadratures against normal") {
    Quadratures qp;
    check_forms(Ordering::qp(*qp.reg, {qp.q, qp.p}), Ordering::normal(*qp.reg, {qp.a, qp.ad}), qp.basis(),
                *qp.table, 5);
  }
  SECTION("timed fermions, time against normal") {
    TimedFermions f({1, 3}, {2, 4});
    auto ids = f.all();
    check_forms(Ordering::time_desc(*f.reg, ids), Ordering::normal(*f.reg, ids), BasisChange::identity(ids),
                *f.table, 4);
  }
}

TEST_CASE("commutator of gamma with a field is the contraction derivative", "[engine][property]") {
  TimedFermions f({1, 3}, {2});
  auto ids = f.all();
  BasisChange id = BasisChange::identity(ids);
  ContractionMatrix c =
      contraction_def(Ordering::time_desc(*f.reg, ids), Ordering::normal(*f.reg, ids), id, *f.table);
  GammaOperator g(c);
  for (const Word& w : all_words(ids, 3)) {
    OperatorPoly p = f.w(w);
    for (SymbolId x : ids) {
      OperatorPoly lhs = g.apply(OperatorPoly::symbol(f.reg, x) * p) - OperatorPoly::symbol(f.reg, x) * g.apply(p);
      OperatorPoly rhs(f.reg);
      for (SymbolId y : ids) rhs += c.at(x, y) * derive(p, y);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("implicit form for a single linear combination", "[engine]") {
  Bosons m(1);
  auto ids = m.all();
  Ordering a = Ordering::antinormal(*m.reg, ids), n = Ordering::normal(*m.reg, ids);
  OperatorPoly x = m.w({m.a[0]}) + m.w({m.ad[0]});
  ScalarPoly c = contract_with(contraction_def(a, n, BasisChange::identity(ids), *m.table),
                               {{m.a[0], 1}, {m.ad[0], 1}});
  CHECK(c == ScalarPoly(2));
  // F = X^2
  CHECK(gwt_implicit({0, 0, 1}, c, x, n) == order_poly(n, x * x) + OperatorPoly::scalar(m.reg, c));
  CHECK(gwt_implicit({0, 0, 1}, 0, x, n) == order_poly(n, x * x));
  // F = X^4 against the direct antinormal ordering
  OperatorPoly x4 = x * x * x * x;
  CHECK(canonical_reduce(gwt_implicit({0, 0, 0, 0, 1}, c, x, n), *m.table) ==
        canonical_reduce(order_poly(a, x4), *m.table));

  SymbolId xs = 0;
  auto reg = std::make_shared<Registry>();
  xs = reg->add({"X", Statistics::boson});
  SymbolId ys = reg->add({"Y", Statistics::boson});
  OperatorPoly f = OperatorPoly::word(reg, {xs, xs}) + OperatorPoly::scalar(reg, 3);
  auto coeffs = univariate_coefficients(f, xs);
  REQUIRE(coeffs.size() == 3);
  CHECK(coeffs[0] == ScalarPoly(3));
  CHECK(coeffs[2] == ScalarPoly(1));
  CHECK_THROWS_AS(univariate_coefficients(OperatorPoly::word(reg, {xs, ys}), xs), Error);
}

TEST_CASE("implicit form with two linear combinations", "[engine]") {
  // X1 = a + a†, X2 = a - a†, A vs N: C^{ij} = (A - N) X_i X_j
  Bosons m(1);
  auto ids = m.all();
  Ordering a = Ordering::antinormal(*m.reg, ids), n = Ordering::normal(*m.reg, ids);
  ContractionMatrix cm = contraction_def(a, n, BasisChange::identity(ids), *m.table);
  OperatorPoly x1 = m.w({m.a[0]}) + m.w({m.ad[0]});
  OperatorPoly x2 = m.w({m.a[0]}) - m.w({m.ad[0]});

  auto reg = std::make_shared<Registry>(*m.reg);
  SymbolId s1 = reg->add({"X1", Statistics::boson});
  SymbolId s2 = reg->add({"X2", Statistics::boson});
  auto lift = [&](const OperatorPoly& p) {
    OperatorPoly out(reg);
    for (const auto& [w, c] : p.terms()) out.add_term(w, c);
    return out;
  };
  std::vector<std::pair<SymbolId, ScalarPoly>> l1{{m.a[0], 1}, {m.ad[0], 1}}, l2{{m.a[0], 1}, {m.ad[0], -1}};
  ContractionMatrix cx(reg, {s1, s2}, Parity::symmetric);
  cx.set(s1, s1, contract_with(cm, l1));
  cx.set(s2, s2, contract_with(cm, l2));
  ScalarPoly c12;
  for (const auto& [p, lp] : l1)
    for (const auto& [q, lq] : l2) c12 += lp * lq * cm.at(p, q);
  cx.set(s1, s2, c12);
  cx.set(s2, s1, c12);
  Ordering nn = Ordering::normal(*reg, ids);
  OperatorPoly f = OperatorPoly::word(reg, {s1, s1, s2}) + OperatorPoly::word(reg, {s2, s2});
  OperatorPoly got = gwt_implicit_multi(f, GammaOperator(cx), {{s1, lift(x1)}, {s2, lift(x2)}}, nn);

  CommutationTable t(reg);
  t.set(m.a[0], m.ad[0], 1);
  Ordering aa = Ordering::antinormal(*reg, ids);
  OperatorPoly want = order_poly(aa, lift(x1 * x1 * x2 + x2 * x2));
  CHECK(canonical_reduce(got, t) == canonical_reduce(want, t));
}

TEST_CASE("exponential series", "[engine]") {
  Bosons m(1);
  auto ids = m.all();
  BasisChange id = BasisChange::identity(ids);
  Ordering a = Ordering::antinormal(*m.reg, ids), n = Ordering::normal(*m.reg, ids);
  ContractionMatrix c = contraction_def(a, n, id, *m.table);
  std::vector<std::pair<SymbolId, ScalarPoly>> lam{{m.a[0], ScalarPoly::symbol("l")},
                                                   {m.ad[0], ScalarPoly::symbol("m")}};
  auto s0 = gwt_exponential_series(a, n, id, c, lam, 0);
  CHECK(s0.lhs == m.one());
  CHECK(s0.rhs == m.one());
  for (int order : {2, 4}) {
    auto s = gwt_exponential_series(a, n, id, c, lam, order);
    CHECK(canonical_reduce(s.lhs - s.rhs, *m.table).is_zero());
  }
  auto s2 = gwt_exponential_series(a, n, id, c, lam, 2);
  // coefficient of l*m in the scalar part: C_{a a†} from the prefactor
  ScalarPoly scalar = canonical_reduce(s2.lhs, *m.table).scalar_part();
  CHECK(scalar == ScalarPoly(1) + ScalarPoly::symbol("l") * ScalarPoly::symbol("m"));
}

TEST_CASE("exponential series reproduces the BCH formula", "[engine]") {
  // X, Y with central [X, Y] = k; O puts X left of Y, O' is Weyl ordering
  auto reg = std::make_shared<Registry>();
  SymbolId x = reg->add({"X", Statistics::boson});
  SymbolId y = reg->add({"Y", Statistics::boson});
  CommutationTable t(reg);
  t.set(x, y, ScalarPoly::symbol("k"));
  Ordering o = Ordering::ranked("XY", {x, y}), w = Ordering::weyl({x, y});
  BasisChange id = BasisChange::identity({x, y});
  ContractionMatrix c = contraction_def(o, w, id, t);
  CHECK(c.at(x, y) == half() * ScalarPoly::symbol("k"));
  ScalarPoly l = ScalarPoly::symbol("l"), mu = ScalarPoly::symbol("m");
  auto s = gwt_exponential_series(o, w, id, c, {{x, l}, {y, mu}}, 4);
  CHECK(canonical_reduce(s.lhs - s.rhs, t).is_zero());
}
