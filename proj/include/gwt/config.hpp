#pragma once
// Registry configuration: one JSON document with symbols, brackets,
// orderings, ordering pairs and Fock modes. Exact values are strings
// ("1/2", "-1/2 i", "i*s") so the exact core never sees a float.

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gwt/errors.hpp"
#include "gwt/fock.hpp"
#include "gwt/operator.hpp"
#include "gwt/ordering.hpp"
#include "gwt/parser.hpp"

namespace gwt {

struct OrderingPairConfig {
  std::string from, to;  // names as written in the config
  std::vector<SymbolId> phi, varphi;
  BasisChange basis;
};

struct ModeConfig {
  std::string name;
  Statistics statistics = Statistics::boson;
  int truncation = 2;
  SymbolId annihilation = 0, creation = 0;
};

struct Config {
  std::shared_ptr<Registry> registry = std::make_shared<Registry>();
  std::shared_ptr<CommutationTable> table;
  std::map<std::string, Ordering> orderings;
  std::vector<OrderingPairConfig> pairs;
  std::vector<ModeConfig> modes;
  NumericContext assignments;

  ParseContext parse_context() const { return {registry, orderings, true}; }

  Ordering ordering(const std::string& name) const { return parse_context().ordering(name); }

  /// Fock modes with an optional truncation override for every boson.
  ModeRegistry mode_registry(std::optional<int> truncation = std::nullopt) const {
    ModeRegistry m;
    for (const auto& mc : modes) {
      int k = mc.statistics == Statistics::boson ? m.add_boson(mc.name, truncation.value_or(mc.truncation))
                                                   : m.add_fermion(mc.name);
      m.bind(mc.annihilation, k, false);
      m.bind(mc.creation, k, true);
    }
    return m;
  }

  /// The configured pair whose names (or canonical ordering names) match.
  const OrderingPairConfig* find_pair(const std::string& from, const std::string& to) const {
    auto same = [&](const std::string& cfg, const std::string& asked) {
      return cfg == asked || ordering(cfg).name() == ordering(asked).name();
    };
    for (const auto& p : pairs)
      if (same(p.from, from) && same(p.to, to)) return &p;
    return nullptr;
  }

  /// Basis for a pair: the configured one, else the identity on O's domain.
  BasisChange basis_for(const std::string& from, const std::string& to) const {
    if (const auto* p = find_pair(from, to)) return p->basis;
    return BasisChange::identity(ordering(from).domain());
  }
};

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail("ConfigError", where + ": missing '" + key + "'");
  return j.at(key);
}

inline std::string exact_string(const nlohmann::json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail("ConfigError", where + ": exact values must be strings or integers");
}

inline Statistics statistics_of(const std::string& s, const std::string& where) {
  if (s == "boson") return Statistics::boson;
  if (s == "fermion") return Statistics::fermion;
  fail("ConfigError", where + ": statistics must be 'boson' or 'fermion'");
}

inline std::vector<SymbolId> symbol_list(const Registry& reg, const nlohmann::json& j) {
  std::vector<SymbolId> out;
  for (const auto& n : j) out.push_back(reg.id(n.get<std::string>()));
  return out;
}

}  // namespace detail

inline Config load_config(const nlohmann::json& doc) {
  using detail::exact_string;
  using detail::require;
  Config cfg;
  Registry& reg = *cfg.registry;
  if (!doc.is_object()) detail::fail("ConfigError", "configuration must be a JSON object");

  for (const auto& s : doc.value("scalars", nlohmann::json::array())) reg.declare_scalar(s.get<std::string>());
  ParseContext ctx{cfg.registry, {}, false};
  for (const auto& r : doc.value("scalar_relations", nlohmann::json::array())) {
    std::string sym = require(r, "symbol", "scalar_relations").get<std::string>();
    ScalarPoly sq = parse_scalar(exact_string(require(r, "square", sym), sym), ctx);
    if (!sq.is_constant()) detail::fail("ConfigError", sym + ": square must be a number");
    reg.set_square(sym, sq.constant());
  }

  for (const auto& s : require(doc, "symbols", "config")) {
    std::string name = require(s, "name", "symbol").get<std::string>();
    OperatorSymbol sym{name, detail::statistics_of(s.value("statistics", "boson"), name),
                       parse_rational(exact_string(s.value("key", nlohmann::json(0)), name)), s.value("dagger", false)};
    if (s.contains("expansion")) {
      Expansion e;
      for (const auto& [target, value] : s.at("expansion").items())
        e.emplace_back(reg.id(target), parse_scalar(exact_string(value, name), ctx));
      reg.add_composite(sym, std::move(e));
    } else {
      reg.add(sym);
    }
  }

  std::string missing = doc.value("missing_brackets", "error");
  std::string mixed = doc.value("mixed_sector", "commute");
  if (missing != "error" && missing != "zero") detail::fail("ConfigError", "missing_brackets must be error|zero");
  if (mixed != "commute" && mixed != "reject") detail::fail("ConfigError", "mixed_sector must be commute|reject");
  cfg.table = std::make_shared<CommutationTable>(cfg.registry, missing == "zero" ? MissingRule::zero : MissingRule::error,
                                                 mixed == "commute" ? MixedRule::commute : MixedRule::reject);
  for (const auto& c : doc.value("commutators", nlohmann::json::array())) {
    std::string lhs = require(c, "lhs", "commutator").get<std::string>();
    std::string rhs = require(c, "rhs", "commutator").get<std::string>();
    cfg.table->set(reg.id(lhs), reg.id(rhs), parse_scalar(exact_string(require(c, "value", lhs), lhs), ctx));
  }

  for (const auto& o : doc.value("orderings", nlohmann::json::array())) {
    std::string name = require(o, "name", "ordering").get<std::string>();
    std::string kind = require(o, "kind", name).get<std::string>();
    std::vector<SymbolId> domain =
        o.contains("domain") ? detail::symbol_list(reg, o.at("domain")) : reg.elementary_ids();
    Ordering ord = [&] {
      if (kind == "ranked") return Ordering::ranked(name, detail::symbol_list(reg, require(o, "ranking", name)));
      if (kind == "permutation") {
        std::map<SymbolId, Rational> prec;
        for (const auto& [sym, v] : require(o, "precedence", name).items())
          prec.emplace(reg.id(sym), parse_rational(exact_string(v, name)));
        Signature sig = o.value("signature", "fermionic") == "bosonic" ? Signature::bosonic : Signature::fermionic;
        return Ordering::permutation(name, std::move(prec), sig);
      }
      return Ordering::named(kind, reg, domain);
    }();
    cfg.orderings.emplace(name, std::move(ord));
  }

  for (const auto& p : doc.value("pairs", nlohmann::json::array())) {
    OrderingPairConfig pair;
    pair.from = require(p, "from", "pair").get<std::string>();
    pair.to = require(p, "to", "pair").get<std::string>();
    Ordering o = cfg.ordering(pair.from), op = cfg.ordering(pair.to);
    pair.phi = p.contains("phi") ? detail::symbol_list(reg, p.at("phi")) : o.domain();
    pair.varphi = p.contains("varphi") ? detail::symbol_list(reg, p.at("varphi")) : op.domain();
    pair.basis = BasisChange::from_registry(reg, pair.phi, pair.varphi);
    if (p.contains("inverse")) {
      std::map<SymbolId, Expansion> inv;
      for (const auto& [target, row] : p.at("inverse").items()) {
        Expansion e;
        for (const auto& [src, value] : row.items())
          e.emplace_back(reg.id(src), parse_scalar(exact_string(value, target), ctx));
        inv.emplace(reg.id(target), std::move(e));
      }
      pair.basis.set_inverse(std::move(inv));
    }
    cfg.pairs.push_back(std::move(pair));
  }

  for (const auto& m : doc.value("modes", nlohmann::json::array())) {
    ModeConfig mc;
    mc.name = require(m, "name", "mode").get<std::string>();
    mc.statistics = detail::statistics_of(m.value("statistics", "boson"), mc.name);
    mc.truncation = m.value("truncation", 2);
    mc.annihilation = reg.id(require(m, "annihilation", mc.name).get<std::string>());
    mc.creation = reg.id(require(m, "creation", mc.name).get<std::string>());
    cfg.modes.push_back(mc);
  }

  const nlohmann::json assignments = doc.value("assignments", nlohmann::json::object());
  for (const auto& [name, value] : assignments.items()) {
    if (value.is_number()) cfg.assignments.assignments[name] = value.get<double>();
    else cfg.assignments.assignments[name] = GaussianRational::parse(value.get<std::string>()).to_complex();
  }
  return cfg;
}

inline Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::fail("ConfigError", "cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    detail::fail("ConfigError", path + ": " + e.what());
  }
  try {
    return load_config(doc);
  } catch (const nlohmann::json::exception& e) {
    detail::fail("ConfigError", path + ": " + e.what());
  }
}

/// Explicit path, else $GWT_CONFIG.
inline std::string config_path(const std::string& given) {
  if (!given.empty()) return given;
  if (const char* env = std::getenv("GWT_CONFIG")) return env;
  detail::fail("ConfigError", "no configuration given (use --config or GWT_CONFIG)");
}

}  // namespace gwt
