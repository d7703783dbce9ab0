#pragma once
// Brute-force verifier: orders words by enumerating every arrangement,
// then checks the definitional side against both forms of the theorem.

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gwt/contraction.hpp"
#include "gwt/engine.hpp"
#include "gwt/errors.hpp"
#include "gwt/operator.hpp"
#include "gwt/ordering.hpp"

namespace gwt {

/// Orders a word by searching all arrangements of its positions for the one
/// that is sorted by precedence with ties in input order, and counts the
/// transposed fermion pairs directly. Symmetric orderings average over all
/// arrangements.
inline OperatorPoly definitional_order(const Ordering& o, const RegistryPtr& reg, const Word& w) {
  for (SymbolId s : w)
    if (!o.in_domain(s)) detail::fail("IncomparableKeys", reg->name(s) + " is outside the domain of " + o.name());
  const std::size_t n = w.size();
  std::vector<std::size_t> pos(n);
  for (std::size_t k = 0; k < n; ++k) pos[k] = k;

  OperatorPoly out(reg);
  if (o.kind() == OrderingKind::symmetric) {
    for (SymbolId s : w)
      if (reg->is_fermion(s)) detail::fail("SymmetricOnFermions", reg->name(s));
    std::vector<Word> all;
    do {
      Word v;
      for (std::size_t k : pos) v.push_back(w[k]);
      all.push_back(v);
    } while (std::next_permutation(pos.begin(), pos.end()));
    Rational weight(1, static_cast<long long>(all.size()));
    for (const Word& v : all) out.add_term(v, ScalarPoly(GaussianRational(weight)));
    return out;
  }

  do {
    bool ordered = true;
    for (std::size_t k = 0; k + 1 < n && ordered; ++k) {
      const Rational& x = o.precedence(w[pos[k]]);
      const Rational& y = o.precedence(w[pos[k + 1]]);
      if (y < x || (x == y && pos[k + 1] < pos[k])) ordered = false;
    }
    if (!ordered) continue;
    int swaps = 0;
    if (o.signature() == Signature::fermionic)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (pos[i] > pos[j] && reg->is_fermion(w[pos[i]]) && reg->is_fermion(w[pos[j]])) ++swaps;
    Word v;
    for (std::size_t k : pos) v.push_back(w[k]);
    out.add_term(v, ScalarPoly(swaps % 2 ? -1 : 1));
    return out;
  } while (std::next_permutation(pos.begin(), pos.end()));
  detail::fail("IncomparableKeys", "no ordered arrangement found");
}

struct VerificationReport {
  std::string word;
  std::string from, to;
  std::uint64_t seed = 0;
  std::string definitional, substitution, exponential;
  bool pass = false;
  std::string first_difference;

  nlohmann::json to_json() const {
    nlohmann::json j{{"word", word},
                     {"from", from},
                     {"to", to},
                     {"seed", seed},
                     {"definitional", definitional},
                     {"substitution", substitution},
                     {"exponential", exponential},
                     {"pass", pass}};
    if (!pass) j["first_difference"] = first_difference;
    return j;
  }
};

/// A verification context: one contraction, one Gamma, one memoizing reducer.
class GwtVerifier {
 public:
  GwtVerifier(Ordering o, Ordering oprime, BasisChange basis, const CommutationTable& table, std::uint64_t seed = 0)
      : o_(std::move(o)),
        oprime_(std::move(oprime)),
        basis_(std::move(basis)),
        table_(table),
        c_(contraction_def(o_, oprime_, basis_, table)),
        gamma_(c_),
        reducer_(table),
        seed_(seed) {}

  const ContractionMatrix& contraction() const { return c_; }

  VerificationReport verify(const Word& w) {
    const RegistryPtr& reg = table_.registry();
    OperatorPoly f = OperatorPoly::word(reg, w);
    OperatorPoly lhs = reducer_.reduce(definitional_order(o_, reg, w));
    OperatorPoly subst = reducer_.reduce(gwt_substitution(o_, oprime_, basis_, c_, f));
    OperatorPoly expo = reducer_.reduce(gwt_exponential_form(oprime_, basis_, gamma_, f));
    VerificationReport r;
    r.word = f.word_str(w);
    if (r.word.empty()) r.word = "1";
    r.from = o_.name();
    r.to = oprime_.name();
    r.seed = seed_;
    r.definitional = lhs.str();
    r.substitution = subst.str();
    r.exponential = expo.str();
    r.pass = lhs == subst && lhs == expo;
    if (!r.pass) r.first_difference = first_difference(lhs, lhs == subst ? expo : subst);
    return r;
  }

 private:
  static std::string first_difference(const OperatorPoly& a, const OperatorPoly& b) {
    OperatorPoly d = a - b;
    if (d.is_zero()) return "";
    const auto& [w, c] = *d.terms().begin();
    return "(" + c.str() + ")*" + (w.empty() ? std::string("1") : d.word_str(w));
  }

  Ordering o_, oprime_;
  BasisChange basis_;
  const CommutationTable& table_;
  ContractionMatrix c_;
  GammaOperator gamma_;
  Reducer reducer_;
  std::uint64_t seed_;
};

inline VerificationReport verify_gwt_instance(const Ordering& o, const Ordering& oprime, const BasisChange& basis,
                                              const CommutationTable& table, const Word& w) {
  GwtVerifier v(o, oprime, basis, table);
  return v.verify(w);
}

struct SweepReport {
  std::size_t total = 0, passed = 0, failed = 0;
  std::vector<VerificationReport> failures;
  bool ok() const { return failed == 0; }
};

/// Every word with repetition of length 1..max_len over the pool, in
/// lexicographic order of pool positions. The callback sees each report.
inline SweepReport sweep(const Ordering& o, const Ordering& oprime, const BasisChange& basis,
                         const CommutationTable& table, int max_len, const std::vector<SymbolId>& pool,
                         const std::function<void(const VerificationReport&)>& on_report = {},
                         std::uint64_t seed = 0) {
  if (max_len < 1) detail::fail("InvalidArgument", "max_len must be at least 1");
  GwtVerifier v(o, oprime, basis, table, seed);
  SweepReport out;
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::size_t> digits(len, 0);
    while (true) {
      Word w;
      for (std::size_t d : digits) w.push_back(pool[d]);
      VerificationReport r = v.verify(w);
      ++out.total;
      if (r.pass) ++out.passed;
      else {
        ++out.failed;
        out.failures.push_back(r);
      }
      if (on_report) on_report(r);
      int k = len - 1;
      while (k >= 0 && ++digits[k] == pool.size()) digits[k--] = 0;
      if (k < 0) break;
    }
  }
  return out;
}

/// Random small rational (anti)commutators on the given elementary symbols,
/// drawn from a seeded generator. Symbols equal under `tie` get zero.
inline CommutationTable random_table(const RegistryPtr& reg, const std::vector<SymbolId>& ids, std::uint64_t seed,
                                     const std::function<bool(SymbolId, SymbolId)>& tie = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  CommutationTable t(reg, MissingRule::error);
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i; j < ids.size(); ++j) {
      bool fermion_pair = reg->is_fermion(ids[i]) && reg->is_fermion(ids[j]);
      if (reg->is_fermion(ids[i]) != reg->is_fermion(ids[j])) continue;
      if (i == j && !fermion_pair) continue;
      int p = num(rng), q = den(rng);
      bool zero = tie && tie(ids[i], ids[j]);
      t.set(ids[i], ids[j], zero ? ScalarPoly(0) : ScalarPoly(GaussianRational(Rational(p, q))));
    }
  return t;
}

}  // namespace gwt
