#include <catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "gwt/operator.hpp"

using namespace gwt;

namespace {

struct OneMode {
  std::shared_ptr<Registry> reg = std::make_shared<Registry>();
  SymbolId a, ad;
  OneMode(Statistics st) {
    a = reg->add({"a", st, 0, false});
    ad = reg->add({"a†", st, 0, true});
  }
  OperatorPoly w(Word word) const { return OperatorPoly::word(reg, std::move(word)); }
};

// Truncated ladder matrices; entries away from the cutoff are exact.
Eigen::MatrixXd ladder(int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) m(k - 1, k) = std::sqrt(double(k));
  return m;
}

Eigen::MatrixXcd as_matrix(const OperatorPoly& p, SymbolId a, int n) {
  Eigen::MatrixXd lo = ladder(n);
  Eigen::MatrixXd hi = lo.transpose();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [w, c] : p.terms()) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (SymbolId s : w) m = m * (s == a ? lo : hi);
    out += c.constant().to_complex() * m.cast<std::complex<double>>();
  }
  return out;
}

}  // namespace

TEST_CASE("boson words reduce to normal form", "[operator]") {
  OneMode m(Statistics::boson);
  CommutationTable t(m.reg);
  t.set(m.a, m.ad, 1);
  OperatorPoly lhs = m.w({m.a, m.ad, m.a});
  OperatorPoly got = canonical_reduce(lhs, t);
  OperatorPoly want = m.w({m.ad, m.a, m.a}) + m.w({m.a});
  CHECK(got == want);
  CHECK(got.str() == "a†*a*a + a");

  // matrix oracle on the block unaffected by truncation
  auto x = as_matrix(lhs, m.a, 10);
  auto y = as_matrix(got, m.a, 10);
  CHECK((x.topLeftCorner(6, 6) - y.topLeftCorner(6, 6)).norm() < 1e-12);
}

TEST_CASE("fermion words reduce with signs", "[operator]") {
  OneMode m(Statistics::fermion);
  CommutationTable t(m.reg);
  t.set(m.a, m.ad, 1);
  t.set(m.a, m.a, 0);
  t.set(m.ad, m.ad, 0);
  CHECK(canonical_reduce(m.w({m.a, m.ad}), t) == -m.w({m.ad, m.a}) + OperatorPoly::scalar(m.reg, 1));
  CHECK(canonical_reduce(m.w({m.a, m.a}), t).is_zero());
  CHECK(canonical_reduce(m.w({m.ad, m.a, m.ad, m.a}), t) == m.w({m.ad, m.a}));
}

TEST_CASE("missing entries and table validation", "[operator]") {
  auto reg = std::make_shared<Registry>();
  SymbolId x = reg->add({"x", Statistics::boson});
  SymbolId y = reg->add({"y", Statistics::boson});
  CommutationTable strict(reg);
  CHECK_THROWS_MATCHES(canonical_reduce(OperatorPoly::word(reg, {y, x}), strict), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == "MissingEntry"; }));
  CommutationTable lax(reg, MissingRule::zero);
  CHECK(canonical_reduce(OperatorPoly::word(reg, {y, x}), lax) == OperatorPoly::word(reg, {x, y}));
  CHECK_THROWS_AS(strict.set(x, x, 1), Error);
  strict.set(x, y, 2);
  CHECK(strict.bracket(y, x) == ScalarPoly(-2));
  CHECK_THROWS_AS(strict.set(y, x, 2), Error);
}

TEST_CASE("composite symbols expand bilinearly", "[operator]") {
  auto reg = std::make_shared<Registry>();
  SymbolId a = reg->add({"a", Statistics::boson, 0, false});
  SymbolId ad = reg->add({"a†", Statistics::boson, 0, true});
  reg->set_square("s", GaussianRational(Rational(1, 2)));
  ScalarPoly s = ScalarPoly::symbol("s");
  ScalarPoly i = ScalarPoly(GaussianRational::i());
  SymbolId q = reg->add_composite({"q", Statistics::boson}, {{a, s}, {ad, s}});
  SymbolId p = reg->add_composite({"p", Statistics::boson}, {{a, -i * s}, {ad, i * s}});
  CommutationTable t(reg);
  t.set(a, ad, 1);
  CHECK(t.bracket(q, p) == i);
  CHECK(t.bracket(p, q) == -i);
  OperatorPoly qp = OperatorPoly::word(reg, {q, p}) - OperatorPoly::word(reg, {p, q});
  CHECK(canonical_reduce(qp, t) == OperatorPoly::scalar(reg, i));
  CHECK_THROWS_AS(reg->add({"a", Statistics::boson}), Error);
}

TEST_CASE("reduction is idempotent and respects equality", "[operator][property]") {
  OneMode m(Statistics::boson);
  CommutationTable t(m.reg);
  t.set(m.a, m.ad, 1);
  Reducer r(t);
  for (unsigned bits = 0; bits < 64; ++bits) {
    Word w;
    for (int k = 0; k < 6; ++k) w.push_back((bits >> k) & 1 ? m.ad : m.a);
    OperatorPoly once = r.reduce(m.w(w));
    CHECK(r.reduce(once) == once);
    auto x = as_matrix(m.w(w), m.a, 14);
    auto y = as_matrix(once, m.a, 14);
    CHECK((x.topLeftCorner(7, 7) - y.topLeftCorner(7, 7)).norm() < 1e-9 * (1 + x.norm()));
  }
}
