#include <catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"
#include "gwt/fock.hpp"

using namespace gwt;
using namespace fixtures;

TEST_CASE("ladder matrices", "[fock]") {
  ModeRegistry modes;
  modes.add_boson("a", 4);
  CMatrix a = modes.ladder(0, false);
  CHECK(std::abs(a(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(a(1, 2) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(a(2, 3) - std::sqrt(3.0)) < 1e-15);
  CHECK((a.cwiseAbs().sum() - (1 + std::sqrt(2.0) + std::sqrt(3.0))) < 1e-14);

  ModeRegistry f;
  f.add_fermion("c");
  CMatrix c = f.ladder(0, false);
  CHECK(c(0, 1) == Complex(1));
  CHECK(c.cwiseAbs().sum() == 1.0);
  CHECK_THROWS_AS(modes.add_boson("x", 1), Error);
}

TEST_CASE("commutator exposes the truncation edge", "[fock]") {
  Bosons m(1);
  ModeRegistry modes;
  modes.add_boson("a", 20);
  modes.bind(m.a[0], 0, false);
  modes.bind(m.ad[0], 0, true);
  CMatrix comm = represent(m.w({m.a[0], m.ad[0]}) - m.w({m.ad[0], m.a[0]}), modes);
  CMatrix expected = CMatrix::Identity(20, 20);
  expected(19, 19) = -19;
  CHECK((comm - expected).norm() < 1e-12);

  CMatrix lhs = represent(m.w({m.a[0], m.ad[0]}), modes);
  CMatrix rhs = represent(m.w({m.ad[0], m.a[0]}) + m.one(), modes);
  CHECK(block_compare(lhs, lhs, modes, 19) == 0.0);
  CHECK(block_compare(lhs, rhs, modes, 10) <= 1e-14);
  CHECK(block_compare(lhs, rhs, modes, 19) > 1.0);
  CHECK_THROWS_AS(block_compare(lhs, CMatrix::Zero(3, 3), modes, 2), Error);
}

TEST_CASE("fermion representation satisfies the anticommutators", "[fock]") {
  auto reg = std::make_shared<Registry>();
  ModeRegistry modes;
  std::vector<SymbolId> c, cd;
  for (int k = 0; k < 3; ++k) {
    c.push_back(reg->add({"c" + std::to_string(k), Statistics::fermion, 0, false}));
    cd.push_back(reg->add({"c" + std::to_string(k) + "†", Statistics::fermion, 0, true}));
    modes.add_fermion("c" + std::to_string(k));
    modes.bind(c[k], k, false);
    modes.bind(cd[k], k, true);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      ExactMatrix ac = represent_exact(OperatorPoly::word(reg, {c[i], cd[j]}) + OperatorPoly::word(reg, {cd[j], c[i]}),
                                       modes);
      CHECK(ac == (i == j ? ExactMatrix::identity(8) : ExactMatrix(8, 8)));
      CHECK(represent_exact(OperatorPoly::word(reg, {c[i], c[j]}) + OperatorPoly::word(reg, {c[j], c[i]}), modes)
                .is_zero());
    }
  CHECK_THROWS_AS(represent(OperatorPoly::symbol(reg, reg->add({"u", Statistics::fermion})), modes), Error);
}

TEST_CASE("composites and scalar symbols are evaluated", "[fock]") {
  Quadratures qp;
  ModeRegistry modes;
  modes.add_boson("a", 30);
  modes.bind(qp.a, 0, false);
  modes.bind(qp.ad, 0, true);
  auto w = [&](Word x) { return OperatorPoly::word(qp.reg, std::move(x)); };
  CMatrix comm = represent(w({qp.q, qp.p}) - w({qp.p, qp.q}), modes);
  CHECK(block_compare(comm, Complex(0, 1) * CMatrix::Identity(30, 30), modes, 28) < 1e-13);
  CHECK_THROWS_AS(represent(ScalarPoly::symbol("g") * w({qp.q}), modes), Error);
  NumericContext ctx{{{"g", 2.0}}};
  CHECK(block_compare(represent(ScalarPoly::symbol("g") * w({qp.q}), modes, ctx), 2.0 * represent(w({qp.q}), modes),
                      modes, 29) < 1e-14);
}

TEST_CASE("canonical form and representation agree on the safe block", "[fock][property]") {
  Bosons m(2);
  ModeRegistry modes;
  modes.add_boson("a", 8);
  modes.add_boson("b", 8);
  for (int k = 0; k < 2; ++k) {
    modes.bind(m.a[k], k, false);
    modes.bind(m.ad[k], k, true);
  }
  auto ids = m.all();
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    Word w;
    for (int k = 0; k < 4; ++k) w.push_back(ids[pick(rng)]);
    OperatorPoly p = m.w(w);
    CHECK(block_compare(represent(p, modes), represent(canonical_reduce(p, *m.table), modes), modes, 8 - 1 - 4) <
          1e-12);
  }
}

TEST_CASE("matrix exponential", "[fock]") {
  CMatrix z = CMatrix::Zero(5, 5);
  CHECK((matexp(z) - CMatrix::Identity(5, 5)).norm() == 0.0);
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 0.5;
  d(1, 1) = -1.0;
  d(2, 2) = 2.0;
  CMatrix e = matexp(d);
  CHECK(std::abs(e(1, 1) - std::exp(-1.0)) < 1e-14);
  CHECK(std::abs(e(2, 2) - std::exp(2.0)) < 1e-13);
  CHECK_THROWS_AS(matexp(CMatrix::Zero(2001, 2001)), Error);

  ModeRegistry modes;
  modes.add_boson("a", 20);
  modes.add_boson("b", 20);
  CMatrix a = modes.ladder(0, false), b = modes.ladder(1, false);
  CMatrix u = matexp(0.3 * (a * b - a.adjoint() * b.adjoint()));
  CHECK(unitarity_defect(u, modes, 8) <= 1e-8);
}

TEST_CASE("normal-ordered gaussian matrices", "[fock]") {
  ModeRegistry modes;
  modes.add_boson("a", 12);
  CMatrix a = modes.ladder(0, false);
  // N[exp(x a†a)] = exp(log(1 + x) a†a)
  double x = 0.4;
  CMatrix k = CMatrix::Zero(2, 2);
  k(0, 1) = k(1, 0) = x;
  CMatrix got = normal_gaussian_matrix(modes, {{0, false}, {0, true}}, k, 1.0, 8);
  CMatrix want = matexp(std::log1p(x) * a.adjoint() * a);
  CHECK(block_compare(got, want, modes, 8) < 1e-13);
  // N[exp(y a†^2 / 2)] acting on the vacuum
  CMatrix k2 = CMatrix::Zero(1, 1);
  k2(0, 0) = 0.6;
  CMatrix sq = normal_gaussian_matrix(modes, {{0, true}}, k2, 1.0, 8);
  CHECK(std::abs(sq(2, 0) - 0.3 * std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(sq(4, 0) - 0.09 / 2 * std::sqrt(24.0)) < 1e-15);
}

TEST_CASE("gaussian position elements", "[fock]") {
  auto f = gaussian_position_elements(BigFloat(0), 5, 5);
  for (int m = 0; m < 5; ++m)
    for (int n = 0; n < 5; ++n) CHECK(double(f[m][n]) == Catch::Approx(m == n ? 1.0 : 0.0).margin(1e-30));
  // <0|exp(alpha x^2)|0> = (1 - alpha)^{-1/2}; <0|x^2|0> term: d/dalpha at 0 is 1/2
  auto g = gaussian_position_elements(BigFloat("0.25"), 3, 3);
  CHECK(double(g[0][0]) == Catch::Approx(1 / std::sqrt(0.75)).epsilon(1e-15));
  CHECK(double(g[0][1]) == 0.0);
  CHECK_THROWS_AS(gaussian_position_elements(BigFloat("0.5"), 2, 2), Error);
  // compare with the truncated matrix of x at small alpha: exp(alpha x^2) ~ 1 + alpha x^2
  ModeRegistry modes;
  modes.add_boson("a", 40);
  CMatrix a = modes.ladder(0, false);
  CMatrix xm = (a + a.adjoint()) / std::sqrt(2.0);
  CMatrix e = matexp(1e-3 * xm * xm);
  auto h = gaussian_position_elements(BigFloat("0.001"), 6, 6);
  for (int m = 0; m < 6; ++m)
    for (int n = 0; n < 6; ++n) CHECK(std::abs(e(m, n) - double(h[m][n])) < 1e-12);
}
