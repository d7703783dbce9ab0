#pragma once
// Operator words, operator polynomials, c-number (anti)commutation data and
// the rewriting normal form used to decide operator equality.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gwt/errors.hpp"
#include "gwt/scalar.hpp"

namespace gwt {

enum class Statistics { boson, fermion };

inline const char* to_string(Statistics s) { return s == Statistics::boson ? "boson" : "fermion"; }

struct OperatorSymbol {
  std::string name;
  Statistics statistics = Statistics::boson;
  Rational key = 0;  // ordering label, e.g. a time
  bool dagger = false;
};

using SymbolId = std::uint32_t;
using Word = std::vector<SymbolId>;

/// Linear expansion of a composite symbol over elementary symbols.
using Expansion = std::vector<std::pair<SymbolId, ScalarPoly>>;

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (SymbolId s : w) {
      h ^= s + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// Owns the operator symbols of a problem. Elementary symbols carry the
/// commutation data; composite symbols (q = s a + s a†, timed fields, ...)
/// are fixed linear combinations of elementary ones.
class Registry {
 public:
  SymbolId add(OperatorSymbol symbol) { return insert(std::move(symbol), std::nullopt); }

  SymbolId add_composite(OperatorSymbol symbol, Expansion expansion) {
    for (const auto& [id, coeff] : expansion) {
      if (id >= symbols_.size() || expansions_[id])
        detail::fail("InvalidExpansion", symbol.name + " must expand over elementary symbols");
      if (symbols_[id].statistics != symbol.statistics)
        detail::fail("StatisticsMismatch", symbol.name + " mixes statistics in its expansion");
    }
    return insert(std::move(symbol), std::move(expansion));
  }

  void declare_scalar(const std::string& name) {
    if (index_.count(name)) detail::fail("DuplicateSymbol", name + " is already an operator symbol");
    scalars_.insert(name);
  }
  /// Declares the relation name^2 = value (the symbol becomes a scalar).
  void set_square(const std::string& name, GaussianRational value) {
    declare_scalar(name);
    squares_[name] = std::move(value);
  }

  std::size_t size() const { return symbols_.size(); }
  const OperatorSymbol& at(SymbolId id) const { return symbols_.at(id); }
  bool is_fermion(SymbolId id) const { return symbols_[id].statistics == Statistics::fermion; }
  bool is_elementary(SymbolId id) const { return !expansions_.at(id).has_value(); }
  const Expansion& expansion(SymbolId id) const {
    if (!expansions_.at(id)) detail::fail("InvalidExpansion", symbols_[id].name + " is elementary");
    return *expansions_[id];
  }
  std::optional<SymbolId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  SymbolId id(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) detail::fail("UnknownSymbol", name);
    return it->second;
  }
  const std::string& name(SymbolId id) const { return symbols_.at(id).name; }
  bool is_scalar(const std::string& name) const { return scalars_.count(name) > 0; }
  const std::set<std::string>& scalars() const { return scalars_; }
  const std::map<std::string, GaussianRational>& squares() const { return squares_; }

  std::vector<SymbolId> elementary_ids() const {
    std::vector<SymbolId> out;
    for (SymbolId k = 0; k < symbols_.size(); ++k)
      if (!expansions_[k]) out.push_back(k);
    return out;
  }

 private:
  SymbolId insert(OperatorSymbol symbol, std::optional<Expansion> expansion) {
    if (index_.count(symbol.name) || scalars_.count(symbol.name))
      detail::fail("DuplicateSymbol", symbol.name);
    auto id = static_cast<SymbolId>(symbols_.size());
    index_.emplace(symbol.name, id);
    symbols_.push_back(std::move(symbol));
    expansions_.push_back(std::move(expansion));
    return id;
  }

  std::vector<OperatorSymbol> symbols_;
  std::vector<std::optional<Expansion>> expansions_;
  std::unordered_map<std::string, SymbolId> index_;
  std::set<std::string> scalars_;
  std::map<std::string, GaussianRational> squares_;
};

using RegistryPtr = std::shared_ptr<const Registry>;

/// Scalar-weighted sum of words. The empty word is the identity operator.
class OperatorPoly {
 public:
  using TermMap = std::map<Word, ScalarPoly>;

  OperatorPoly() = default;
  explicit OperatorPoly(RegistryPtr reg) : reg_(std::move(reg)) {}

  static OperatorPoly scalar(RegistryPtr reg, const ScalarPoly& c) {
    OperatorPoly p(std::move(reg));
    p.add_term({}, c);
    return p;
  }
  static OperatorPoly word(RegistryPtr reg, Word w, const ScalarPoly& c = ScalarPoly(1)) {
    OperatorPoly p(std::move(reg));
    p.add_term(std::move(w), c);
    return p;
  }
  static OperatorPoly symbol(RegistryPtr reg, SymbolId id) { return word(std::move(reg), {id}); }

  const RegistryPtr& registry() const { return reg_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(Word w, const ScalarPoly& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(std::move(w), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  ScalarPoly coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? ScalarPoly{} : it->second;
  }

  /// True if only the identity word is present.
  bool is_scalar() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
  ScalarPoly scalar_part() const { return coefficient({}); }

  std::size_t degree() const {
    std::size_t d = 0;
    for (const auto& [w, _] : terms_) d = std::max(d, w.size());
    return d;
  }

  OperatorPoly operator-() const {
    OperatorPoly out = *this;
    for (auto& [_, c] : out.terms_) c = -c;
    return out;
  }
  OperatorPoly& operator+=(const OperatorPoly& o) {
    adopt(o);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  OperatorPoly& operator-=(const OperatorPoly& o) {
    adopt(o);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  friend OperatorPoly operator+(OperatorPoly a, const OperatorPoly& b) { return a += b; }
  friend OperatorPoly operator-(OperatorPoly a, const OperatorPoly& b) { return a -= b; }

  /// Concatenation product, bilinear in the coefficients; no reordering.
  friend OperatorPoly operator*(const OperatorPoly& a, const OperatorPoly& b) {
    OperatorPoly out(a.reg_);
    out.adopt(b);
    for (const auto& [wa, ca] : a.terms_)
      for (const auto& [wb, cb] : b.terms_) {
        Word w = wa;
        w.insert(w.end(), wb.begin(), wb.end());
        out.add_term(std::move(w), ca * cb);
      }
    return out;
  }
  friend OperatorPoly operator*(const ScalarPoly& c, const OperatorPoly& p) {
    OperatorPoly out(p.reg_);
    if (c.is_zero()) return out;
    for (const auto& [w, v] : p.terms_) out.add_term(w, c * v);
    return out;
  }

  friend bool operator==(const OperatorPoly& a, const OperatorPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const OperatorPoly& a, const OperatorPoly& b) { return !(a == b); }

  template <typename F>
  OperatorPoly map_coefficients(F&& f) const {
    OperatorPoly out(reg_);
    for (const auto& [w, c] : terms_) out.add_term(w, f(c));
    return out;
  }

  std::string word_str(const Word& w) const {
    std::string out;
    for (SymbolId s : w) {
      if (!out.empty()) out += "*";
      out += reg_ ? reg_->name(s) : "#" + std::to_string(s);
    }
    return out;
  }

  /// "a†*a + 1": higher-degree words first.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::vector<const TermMap::value_type*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(),
                     [](auto* x, auto* y) { return x->first.size() > y->first.size(); });
    std::string out;
    for (const auto* t : order) {
      const auto& [w, c] = *t;
      std::string s;
      if (w.empty()) {
        s = c.str();
        if (c.terms().size() > 1 && !out.empty()) s = "(" + s + ")";
      } else if (c == ScalarPoly(1)) {
        s = word_str(w);
      } else if (c == ScalarPoly(-1)) {
        s = "-" + word_str(w);
      } else {
        std::string cs = c.str();
        bool complex_constant = c.is_constant() && c.constant().re() != 0 && c.constant().im() != 0;
        bool simple = c.terms().size() == 1 && !complex_constant;
        s = (simple ? cs : "(" + cs + ")") + "*" + word_str(w);
      }
      if (out.empty()) out = s;
      else if (s[0] == '-') out += " - " + s.substr(1);
      else out += " + " + s;
    }
    return out;
  }

 private:
  void adopt(const OperatorPoly& o) {
    if (!o.reg_) return;
    if (!reg_) reg_ = o.reg_;
    else if (reg_ != o.reg_) detail::fail("RegistryMismatch", "operands use different symbol registries");
  }

  RegistryPtr reg_;
  TermMap terms_;
};

/// Rewrites every composite symbol into its elementary expansion.
inline OperatorPoly expand_composites(const OperatorPoly& p) {
  const RegistryPtr& reg = p.registry();
  if (!reg) return p;
  OperatorPoly out(reg);
  for (const auto& [w, c] : p.terms()) {
    OperatorPoly acc = OperatorPoly::scalar(reg, c);
    for (SymbolId s : w) {
      OperatorPoly factor(reg);
      if (reg->is_elementary(s)) {
        factor.add_term({s}, ScalarPoly(1));
      } else {
        for (const auto& [e, coeff] : reg->expansion(s)) factor.add_term({e}, coeff);
      }
      acc = acc * factor;
    }
    out += acc;
  }
  return out;
}

enum class MissingRule { error, zero };
enum class MixedRule { commute, reject };

/// c-number values of [x,y] (boson pairs), {x,y} (fermion pairs) and the
/// sector rule for mixed pairs. Entries are stored for elementary symbols;
/// composite brackets follow by bilinearity.
class CommutationTable {
 public:
  explicit CommutationTable(RegistryPtr reg, MissingRule missing = MissingRule::error,
                            MixedRule mixed = MixedRule::commute)
      : reg_(std::move(reg)), missing_(missing), mixed_(mixed) {}

  const RegistryPtr& registry() const { return reg_; }
  MissingRule missing_rule() const { return missing_; }
  MixedRule mixed_rule() const { return mixed_; }

  void set(SymbolId a, SymbolId b, const ScalarPoly& value) {
    if (!reg_->is_elementary(a) || !reg_->is_elementary(b))
      detail::fail("InvalidTable", "brackets are set on elementary symbols only");
    bool fa = reg_->is_fermion(a), fb = reg_->is_fermion(b);
    if (a == b && !fa && !value.is_zero())
      detail::fail("InvalidTable", "[" + reg_->name(a) + "," + reg_->name(a) + "] must vanish");
    if (fa != fb && !value.is_zero())
      detail::fail("InvalidTable", reg_->name(a) + ", " + reg_->name(b) + " mix statistics; use the sector rule");
    if (auto it = entries_.find({b, a}); it != entries_.end() && a != b) {
      ScalarPoly implied = (fa && fb) ? it->second : -it->second;
      if (implied != value)
        detail::fail("InvalidTable", "inconsistent entries for " + reg_->name(a) + ", " + reg_->name(b));
    }
    entries_[{a, b}] = value;
  }

  /// [x,y] for boson pairs, {x,y} for fermion pairs, the sector rule for
  /// mixed pairs. Composite symbols are expanded bilinearly.
  ScalarPoly bracket(SymbolId a, SymbolId b) const {
    bool ea = reg_->is_elementary(a), eb = reg_->is_elementary(b);
    if (ea && eb) return elementary_bracket(a, b);
    ScalarPoly out;
    auto terms = [&](SymbolId s) {
      return reg_->is_elementary(s) ? Expansion{{s, ScalarPoly(1)}} : reg_->expansion(s);
    };
    for (const auto& [k, lk] : terms(a))
      for (const auto& [l, ll] : terms(b)) {
        ScalarPoly v = elementary_bracket(k, l);
        if (!v.is_zero()) out += lk * ll * v;
      }
    return out.reduce_squares(reg_->squares());
  }

  ScalarPoly elementary_bracket(SymbolId a, SymbolId b) const {
    bool fa = reg_->is_fermion(a), fb = reg_->is_fermion(b);
    if (auto it = entries_.find({a, b}); it != entries_.end()) return it->second;
    if (auto it = entries_.find({b, a}); it != entries_.end()) return fa && fb ? it->second : -it->second;
    if (!fa && !fb && a == b) return {};
    if (fa != fb && mixed_ == MixedRule::commute) return {};
    if (missing_ == MissingRule::zero && fa == fb) return {};
    detail::fail("MissingEntry", "(" + reg_->name(a) + ", " + reg_->name(b) + ")");
  }

  const std::map<std::pair<SymbolId, SymbolId>, ScalarPoly>& entries() const { return entries_; }

 private:
  RegistryPtr reg_;
  MissingRule missing_;
  MixedRule mixed_;
  std::map<std::pair<SymbolId, SymbolId>, ScalarPoly> entries_;
};

/// Total order on elementary symbols used by the normal form. The default
/// puts daggered symbols first, then sorts by key, then by registration.
class ReferenceOrder {
 public:
  explicit ReferenceOrder(const Registry& reg) {
    std::vector<SymbolId> ids(reg.size());
    for (SymbolId k = 0; k < ids.size(); ++k) ids[k] = k;
    std::stable_sort(ids.begin(), ids.end(), [&](SymbolId x, SymbolId y) {
      const auto& a = reg.at(x);
      const auto& b = reg.at(y);
      if (a.dagger != b.dagger) return a.dagger;
      return a.key < b.key;
    });
    assign(ids);
  }
  /// Explicit ranking; unlisted symbols follow in registration order.
  ReferenceOrder(const Registry& reg, const std::vector<SymbolId>& ranking) {
    std::vector<SymbolId> ids = ranking;
    std::set<SymbolId> seen(ranking.begin(), ranking.end());
    for (SymbolId k = 0; k < reg.size(); ++k)
      if (!seen.count(k)) ids.push_back(k);
    assign(ids);
  }

  std::size_t rank(SymbolId s) const { return rank_.at(s); }

 private:
  void assign(const std::vector<SymbolId>& ids) {
    rank_.assign(ids.size(), 0);
    for (std::size_t k = 0; k < ids.size(); ++k) rank_[ids[k]] = k;
  }
  std::vector<std::size_t> rank_;
};

/// Normal form by adjacent transpositions: xy -> yx + [x,y] (bosons, mixed)
/// and xy -> -yx + {x,y} (fermions); xx -> {x,x}/2 for fermions. Word
/// reductions are memoized, so one Reducer should serve a batch of calls.
class Reducer {
 public:
  explicit Reducer(const CommutationTable& table)
      : table_(table), order_(*table.registry()) {}
  Reducer(const CommutationTable& table, ReferenceOrder order)
      : table_(table), order_(std::move(order)) {}

  OperatorPoly reduce(const OperatorPoly& p) {
    const RegistryPtr& reg = table_.registry();
    if (p.registry() && p.registry() != reg)
      detail::fail("RegistryMismatch", "polynomial and table use different registries");
    OperatorPoly expanded = expand_composites(p);
    std::map<Word, ScalarPoly> acc;
    for (const auto& [w, c] : expanded.terms()) {
      for (const auto& [rw, rc] : reduce_word(w)) {
        ScalarPoly v = c * rc;
        auto [it, inserted] = acc.try_emplace(rw, v);
        if (!inserted) it->second += v;
      }
    }
    OperatorPoly out(reg);
    for (auto& [w, c] : acc) out.add_term(w, c.reduce_squares(reg->squares()));
    return out;
  }

  std::size_t cache_size() const { return cache_.size(); }

 private:
  using Terms = std::map<Word, ScalarPoly>;

  static void accumulate(Terms& into, const Terms& from, const ScalarPoly& scale) {
    for (const auto& [w, c] : from) {
      ScalarPoly v = scale * c;
      auto [it, inserted] = into.try_emplace(w, v);
      if (!inserted) {
        it->second += v;
        if (it->second.is_zero()) into.erase(it);
      }
    }
  }

  const Terms& reduce_word(const Word& w) {
    if (auto it = cache_.find(w); it != cache_.end()) return it->second;
    const Registry& reg = *table_.registry();
    Terms result;
    std::size_t i = 0;
    for (; i + 1 < w.size(); ++i) {
      if (order_.rank(w[i]) > order_.rank(w[i + 1])) break;
      if (w[i] == w[i + 1] && reg.is_fermion(w[i])) break;
    }
    if (i + 1 >= w.size()) {
      result.emplace(w, ScalarPoly(1));
    } else {
      SymbolId x = w[i], y = w[i + 1];
      Word shorter;
      shorter.reserve(w.size() - 2);
      shorter.insert(shorter.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
      shorter.insert(shorter.end(), w.begin() + static_cast<std::ptrdiff_t>(i) + 2, w.end());
      ScalarPoly br = table_.elementary_bracket(x, y);
      if (x == y) {
        // x x = {x,x}/2
        if (!br.is_zero()) {
          Terms sub = reduce_word(shorter);
          accumulate(result, sub, br * ScalarPoly(GaussianRational(Rational(1, 2))));
        }
      } else {
        bool both_fermions = reg.is_fermion(x) && reg.is_fermion(y);
        Word swapped = w;
        std::swap(swapped[i], swapped[i + 1]);
        Terms sub = reduce_word(swapped);
        accumulate(result, sub, ScalarPoly(both_fermions ? -1 : 1));
        if (!br.is_zero()) {
          Terms rest = reduce_word(shorter);
          accumulate(result, rest, br);
        }
      }
    }
    return cache_.emplace(w, std::move(result)).first->second;
  }

  const CommutationTable& table_;
  ReferenceOrder order_;
  std::unordered_map<Word, Terms, WordHash> cache_;
};

inline OperatorPoly canonical_reduce(const OperatorPoly& p, const CommutationTable& table) {
  Reducer r(table);
  return r.reduce(p);
}

inline OperatorPoly canonical_reduce(const OperatorPoly& p, const CommutationTable& table,
                                     const ReferenceOrder& order) {
  Reducer r(table, order);
  return r.reduce(p);
}

/// Operator equality under the commutation relations.
inline bool poly_equal(const OperatorPoly& a, const OperatorPoly& b, const CommutationTable& table) {
  return canonical_reduce(a - b, table).is_zero();
}

}  // namespace gwt
