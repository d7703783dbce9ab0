#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "fixtures.hpp"
#include "gwt/ordering.hpp"

using namespace gwt;
using namespace fixtures;

TEST_CASE("normal ordering of bosons", "[ordering]") {
  Bosons m(1);
  Ordering n = Ordering::normal(*m.reg, m.all());
  CHECK(order_word(n, m.reg, {m.a[0], m.ad[0]}) == m.w({m.ad[0], m.a[0]}));
  CHECK(order_poly(n, m.w({m.a[0], m.ad[0]}) + m.one()) == m.w({m.ad[0], m.a[0]}) + m.one());
  CHECK(order_poly(n, m.one()) == m.one());
}

TEST_CASE("time ordering of fermions carries the permutation sign", "[ordering]") {
  TimedFermions f({1}, {2});
  Ordering t = Ordering::time_desc(*f.reg, f.all());
  SymbolId c1 = f.c[0], cd2 = f.cd[0];
  CHECK(order_word(t, f.reg, {c1, cd2}) == -f.w({cd2, c1}));
  CHECK(order_poly(t, f.w({c1, cd2}) - f.w({cd2, c1})) == ScalarPoly(-2) * f.w({cd2, c1}));
}

TEST_CASE("equal-time fermions stay put and warn", "[ordering]") {
  TimedFermions f({1, 1}, {});
  Ordering t = Ordering::time_desc(*f.reg, f.all());
  Diagnostics diag;
  CHECK(order_word(t, f.reg, {f.c[1], f.c[0]}, &diag) == f.w({f.c[1], f.c[0]}));
  CHECK(diag.warnings.size() == 1);
}

TEST_CASE("weyl ordering symmetrizes", "[ordering]") {
  Bosons m(1);
  Ordering w = Ordering::weyl(m.all());
  OperatorPoly got = order_word(w, m.reg, {m.a[0], m.ad[0]});
  CHECK(got == half() * m.w({m.a[0], m.ad[0]}) + half() * m.w({m.ad[0], m.a[0]}));
  OperatorPoly three = order_word(w, m.reg, {m.a[0], m.a[0], m.ad[0]});
  ScalarPoly total;
  for (const auto& [_, c] : three.terms()) total += c;
  CHECK(total == ScalarPoly(1));
  CHECK(three.size() == 3);

  TimedFermions f({1}, {2});
  CHECK_THROWS_AS(order_word(Ordering::weyl(f.all()), f.reg, {f.c[0]}), Error);
}

TEST_CASE("out-of-domain symbols are rejected", "[ordering]") {
  Bosons m(2);
  Ordering n = Ordering::normal(*m.reg, {m.a[0], m.ad[0]});
  try {
    order_word(n, m.reg, {m.a[1]});
    FAIL("expected IncomparableKeys");
  } catch (const Error& e) {
    CHECK(e.kind() == "IncomparableKeys");
  }
}

TEST_CASE("foreign ordering through quadratures", "[ordering]") {
  Quadratures qp;
  BasisChange b = qp.basis();
  Ordering n = Ordering::normal(*qp.reg, {qp.a, qp.ad});
  OperatorPoly got = order_word_foreign(n, qp.reg, {qp.q, qp.q}, b);
  ScalarPoly s2 = ScalarPoly::symbol("s").pow(2);
  auto w = [&](Word x) { return OperatorPoly::word(qp.reg, std::move(x)); };
  CHECK(got == s2 * (w({qp.a, qp.a}) + ScalarPoly(2) * w({qp.ad, qp.a}) + w({qp.ad, qp.ad})));
  OperatorPoly diff = canonical_reduce(w({qp.q, qp.q}) - got, *qp.table);
  CHECK(diff == OperatorPoly::scalar(qp.reg, half()));
  CHECK(order_word_foreign(n, qp.reg, {qp.q}, b) ==
        ScalarPoly::symbol("s") * (w({qp.a}) + w({qp.ad})));

  Bosons m(1);
  Ordering nm = Ordering::normal(*m.reg, m.all());
  CHECK(order_word_foreign(nm, m.reg, {m.a[0], m.ad[0], m.a[0]}, BasisChange::identity(m.all())) ==
        order_word(nm, m.reg, {m.a[0], m.ad[0], m.a[0]}));
  CHECK_THROWS_AS(order_word_foreign(nm, m.reg, {qp.q}, BasisChange::identity(m.all())), Error);
}

TEST_CASE("ordering properties on all short words", "[ordering][property]") {
  TimedFermions f({1, 3}, {2, 4});
  std::vector<SymbolId> ids = f.all();
  Ordering t = Ordering::time_desc(*f.reg, ids);
  Ordering n = Ordering::normal(*f.reg, ids);
  Ordering r = Ordering::ranked("ranked", {ids[3], ids[0], ids[2], ids[1]});
  // all words of length <= 4 without repeats
  std::vector<Word> words;
  for (unsigned mask = 1; mask < 16; ++mask) {
    Word w;
    for (unsigned k = 0; k < 4; ++k)
      if (mask >> k & 1) w.push_back(ids[k]);
    do words.push_back(w);
    while (std::next_permutation(w.begin(), w.end()));
  }
  auto single = [](const OperatorPoly& p) {
    REQUIRE(p.size() == 1);
    return *p.terms().begin();
  };
  for (const Word& w : words) {
    for (const Ordering* o : {&t, &n, &r}) {
      auto [v, c] = single(order_word(*o, f.reg, w));
      auto [v2, c2] = single(order_word(*o, f.reg, v));
      CHECK(v2 == v);
      CHECK(c2 == ScalarPoly(1));
      // composition: applying r after o multiplies signs like permutations
      auto [u, cu] = single(order_word(r, f.reg, v));
      auto [u0, c0] = single(order_word(r, f.reg, w));
      CHECK(u == u0);
      CHECK(c * cu == c0);
    }
  }
}
