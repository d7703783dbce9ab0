#pragma once
// Command dispatch for the gwt_cli tool. run_command is a plain function of
// the argument list and two streams so it can be driven from tests.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gwt/config.hpp"
#include "gwt/contraction.hpp"
#include "gwt/engine.hpp"
#include "gwt/errors.hpp"
#include "gwt/fock.hpp"
#include "gwt/gaussian.hpp"
#include "gwt/oracle.hpp"
#include "gwt/parser.hpp"
#include "gwt/render.hpp"

namespace gwt {

namespace detail {

inline nlohmann::json complex_json(const Complex& z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline std::string complex_text(const Complex& z) {
  std::ostringstream s;
  s << std::setprecision(15) << z.real();
  if (z.imag() != 0) s << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return s.str();
}

inline Eigen::MatrixXd read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("ConfigError", "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail("ConfigError", path + ": " + e.what());
  }
  if (j.is_object()) j = require(j, "D", path);
  if (!j.is_array() || j.empty()) fail("ConfigError", path + ": D must be a non-empty array of rows");
  Eigen::MatrixXd d(j.size(), j[0].size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != j[0].size()) fail("ConfigError", path + ": ragged matrix");
    for (std::size_t c = 0; c < j[r].size(); ++c) d(r, c) = j[r][c].get<double>();
  }
  return d;
}

/// O'-form of a reduced result: canonical with O''s precedence as reference
/// when O' is a permutation ordering.
inline OperatorPoly reduce_in(const Ordering& oprime, const CommutationTable& table, const OperatorPoly& p) {
  if (oprime.kind() != OrderingKind::permutation) return canonical_reduce(p, table);
  std::vector<SymbolId> ranking = oprime.domain();
  std::stable_sort(ranking.begin(), ranking.end(),
                   [&](SymbolId x, SymbolId y) { return oprime.precedence(x) < oprime.precedence(y); });
  return canonical_reduce(p, table, ReferenceOrder(*table.registry(), ranking));
}

struct Session {
  std::string config_file;
  std::string format = "text";
  std::ostream& out;
  std::ostream& err;

  Config config() const { return load_config_file(config_path(config_file)); }
  Format fmt() const { return parse_format(format); }
};

inline int cmd_contract(const Session& s, const std::string& from, const std::string& to) {
  Config cfg = s.config();
  Ordering o = cfg.ordering(from), op = cfg.ordering(to);
  ContractionMatrix c = contraction_def(o, op, cfg.basis_for(from, to), *cfg.table);
  switch (s.fmt()) {
    case Format::text:
      s.out << contraction_text(c);
      break;
    case Format::json:
      s.out << contraction_json(c).dump() << "\n";
      break;
    case Format::latex:
      s.out << contraction_latex(c) << "\n";
      break;
  }
  return 0;
}

inline int cmd_reorder(const Session& s, const std::string& from, const std::string& to, const std::string& src) {
  Config cfg = s.config();
  ParseContext ctx = cfg.parse_context();
  Ordering o = cfg.ordering(from), op = cfg.ordering(to);
  BasisChange basis = cfg.basis_for(from, to);
  Ast ast = parse_expression(src, ctx);
  Diagnostics diag;
  OperatorPoly f = evaluate_expression(ast, ctx, &diag);
  ContractionMatrix c = contraction_def(o, op, basis, *cfg.table);
  OperatorPoly subst = reduce_in(op, *cfg.table, gwt_substitution(o, op, basis, c, f));
  OperatorPoly expo = reduce_in(op, *cfg.table, gwt_exponential_form(op, basis, GammaOperator(c), f));
  if (subst != expo) fail("FormsDisagree", "substitution form " + subst.str() + " vs exponential form " + expo.str());
  for (const auto& w : diag.warnings) s.err << "warning: " << w << "\n";
  switch (s.fmt()) {
    case Format::text:
      s.out << subst.str() << "\n";
      break;
    case Format::json: {
      nlohmann::json j = poly_json(subst);
      j["from"] = o.name();
      j["to"] = op.name();
      j["input"] = print_expression(ast);
      j["warnings"] = diag.warnings;
      s.out << j.dump() << "\n";
      break;
    }
    case Format::latex: {
      Ast lhs = Ast::node(Ast::Kind::order, {ast}, from);
      s.out << latex_expression(lhs) << " = " << latex_poly(subst) << "\n";
      break;
    }
  }
  return 0;
}

inline int cmd_verify(const Session& s, int max_len, const std::string& from, const std::string& to,
                      std::uint64_t seed) {
  Config cfg = s.config();
  Format f = s.fmt();
  std::size_t failures = 0, selected = 0;
  nlohmann::json summaries = nlohmann::json::array();
  for (const auto& pair : cfg.pairs) {
    if ((!from.empty() && pair.from != from) || (!to.empty() && pair.to != to)) continue;
    ++selected;
    Ordering o = cfg.ordering(pair.from), op = cfg.ordering(pair.to);
    auto on_report = [&](const VerificationReport& r) {
      if (f == Format::json) s.out << r.to_json().dump() << "\n";
    };
    SweepReport rep = sweep(o, op, pair.basis, *cfg.table, max_len, pair.phi, on_report, seed);
    failures += rep.failed;
    nlohmann::json summary{{"from", pair.from},  {"to", pair.to},         {"max_len", max_len},
                           {"total", rep.total}, {"passed", rep.passed}, {"failed", rep.failed}};
    summaries.push_back(summary);
    if (f == Format::json) {
      s.out << nlohmann::json{{"summary", summary}}.dump() << "\n";
    } else if (f == Format::text) {
      s.out << pair.from << " -> " << pair.to << ": " << rep.total << " instances, " << rep.passed << " passed, "
            << rep.failed << " failed\n";
      for (const auto& r : rep.failures)
        s.out << "  FAIL " << r.word << ": " << r.definitional << " | " << r.substitution << " | " << r.exponential
              << "\n";
    } else {
      s.out << latex_ordering(pair.from) << " \\to " << latex_ordering(pair.to) << ": " << rep.passed << "/"
            << rep.total << " \\\\\n";
    }
  }
  if (selected == 0) fail("UnknownOrdering", "no configured pair matches the selection");
  return failures == 0 ? 0 : 1;
}

inline int cmd_numeric(const Session& s, int trunc, int block, const std::string& e1, const std::string& e2,
                       std::optional<double> tol) {
  Config cfg = s.config();
  ParseContext ctx = cfg.parse_context();
  ModeRegistry modes = cfg.mode_registry(trunc);
  CMatrix m1 = represent(parse_operator(e1, ctx), modes, cfg.assignments);
  CMatrix m2 = represent(parse_operator(e2, ctx), modes, cfg.assignments);
  double diff = block_compare(m1, m2, modes, block);
  switch (s.fmt()) {
    case Format::text:
      s.out << "dimension " << modes.dimension() << ", block " << block << ": max |difference| = " << std::setprecision(6)
            << diff << "\n";
      break;
    case Format::json:
      s.out << nlohmann::json{{"dimension", modes.dimension()}, {"truncation", trunc}, {"block", block},
                              {"max_abs_difference", diff}}
                   .dump()
            << "\n";
      break;
    case Format::latex:
      s.out << "\\max |\\Delta| = " << std::setprecision(6) << diff << "\n";
      break;
  }
  return tol && diff > *tol ? 1 : 0;
}

inline int cmd_quadratic(const Session& s, const std::string& dfile, const std::string& from, const std::string& to) {
  Config cfg = s.config();
  Eigen::MatrixXd d = read_matrix_file(dfile);
  Ordering o = cfg.ordering(from), op = cfg.ordering(to);
  ContractionMatrix c = contraction_def(o, op, cfg.basis_for(from, to), *cfg.table);
  if (static_cast<std::size_t>(d.rows()) != c.index().size())
    fail("InvalidArgument", "D must be " + std::to_string(c.index().size()) + " x " + std::to_string(c.index().size()));
  QuadraticReordering r = reorder_quadratic_form(d, numeric_contraction(c, cfg.assignments));
  const Registry& reg = *cfg.registry;
  switch (s.fmt()) {
    case Format::text: {
      s.out << "prefactor = " << complex_text(r.prefactor) << "\nD' =\n";
      for (int i = 0; i < r.d_prime.rows(); ++i) {
        for (int j = 0; j < r.d_prime.cols(); ++j) s.out << "  " << complex_text(r.d_prime(i, j));
        s.out << "\n";
      }
      break;
    }
    case Format::json: {
      nlohmann::json rows = nlohmann::json::array(), index = nlohmann::json::array();
      for (SymbolId a : c.index()) index.push_back(reg.name(a));
      for (int i = 0; i < r.d_prime.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < r.d_prime.cols(); ++j) row.push_back(complex_json(r.d_prime(i, j)));
        rows.push_back(row);
      }
      s.out << nlohmann::json{{"index", index}, {"prefactor", complex_json(r.prefactor)}, {"d_prime", rows}}.dump()
            << "\n";
      break;
    }
    case Format::latex: {
      s.out << latex_ordering(from) << "\\left[e^{\\frac{1}{2} D \\phi \\phi}\\right] = " << complex_text(r.prefactor)
            << "\\, " << latex_ordering(to) << "\\left[e^{\\frac{1}{2} D' \\phi \\phi}\\right], \\quad D' = "
            << "\\begin{pmatrix}";
      for (int i = 0; i < r.d_prime.rows(); ++i) {
        s.out << (i ? " \\\\ " : " ");
        for (int j = 0; j < r.d_prime.cols(); ++j) s.out << (j ? " & " : "") << complex_text(r.d_prime(i, j));
      }
      s.out << " \\end{pmatrix}\n";
      break;
    }
  }
  return 0;
}

inline int cmd_squeeze(const Session& s, double g, int trunc, int block) {
  SqueezeReport r = squeeze_normal_form(g, trunc, block);
  switch (s.fmt()) {
    case Format::text:
      s.out << std::setprecision(6) << "g = " << g << ", truncation " << trunc << ", block " << block << "\n"
            << "normal-form prefactor = " << complex_text(r.gwt_prefactor) << "\n"
            << "max |error| exact Weyl symbol route = " << r.error_gwt << "\n"
            << "max |error| Gaussian-average route = " << r.error_weyl_average << "\n"
            << "max |error| sqrt(g^2+1) closed form = " << r.error_printed << "\n"
            << "unitarity defect of the reference = " << r.unitarity << "\n";
      break;
    case Format::json:
      s.out << nlohmann::json{{"g", g},
                              {"truncation", trunc},
                              {"block", block},
                              {"prefactor", complex_json(r.gwt_prefactor)},
                              {"error_gwt", r.error_gwt},
                              {"error_weyl_average", r.error_weyl_average},
                              {"error_printed", r.error_printed},
                              {"unitarity_defect", r.unitarity}}
                   .dump()
            << "\n";
      break;
    case Format::latex:
      s.out << "\\hat S(" << g << ") = " << complex_text(r.gwt_prefactor)
            << "\\, \\mathcal{N}\\left[e^{\\dots}\\right], \\quad \\max|\\Delta| = " << r.error_gwt << "\n";
      break;
  }
  return 0;
}

}  // namespace detail

/// Runs one command. Exit status: 0 on success, 1 when a verification or
/// tolerance check fails, 2 on a module error (reported as JSON on `out`).
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"General Wick theorem engine"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  detail::Session session{"", "text", out, err};
  app.add_option("--config", session.config_file, "registry configuration (default: $GWT_CONFIG)");
  app.add_option("--format", session.format, "output format")->check(CLI::IsMember({"text", "json", "latex"}));

  std::string from, to, expr, expr2, dfile;
  int max_len = 0, trunc = 0, block = 10;
  std::uint64_t seed = 0;
  double g = 0, tol = 0;

  auto* contract = app.add_subcommand("contract", "contraction matrix of an ordering pair");
  contract->add_option("--from", from)->required();
  contract->add_option("--to", to)->required();

  auto* reorder = app.add_subcommand("reorder", "rewrite O[F] in O'-form");
  reorder->add_option("--from", from)->required();
  reorder->add_option("--to", to)->required();
  reorder->add_option("expr", expr)->required();

  auto* verify = app.add_subcommand("verify", "oracle sweep over all configured pairs");
  verify->add_option("--max-len", max_len)->required()->check(CLI::PositiveNumber);
  verify->add_option("--from", from);
  verify->add_option("--to", to);
  verify->add_option("--seed", seed);

  auto* numeric = app.add_subcommand("numeric", "compare two expressions on truncated Fock matrices");
  numeric->add_option("--trunc", trunc)->required();
  numeric->add_option("--block", block)->required();
  auto* tol_opt = numeric->add_option("--tol", tol);
  numeric->add_option("expr1", expr)->required();
  numeric->add_option("expr2", expr2)->required();

  auto* quadratic = app.add_subcommand("quadratic", "reorder a Gaussian quadratic exponential");
  quadratic->add_option("--D", dfile)->required();
  quadratic->add_option("--from", from)->required();
  quadratic->add_option("--to", to)->required();

  auto* squeeze = app.add_subcommand("squeeze", "two-mode squeezing operator in normal order");
  squeeze->add_option("--g", g)->required();
  squeeze->add_option("--trunc", trunc)->required();
  squeeze->add_option("--block", block);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*contract) return detail::cmd_contract(session, from, to);
    if (*reorder) return detail::cmd_reorder(session, from, to, expr);
    if (*verify) return detail::cmd_verify(session, max_len, from, to, seed);
    if (*numeric)
      return detail::cmd_numeric(session, trunc, block, expr, expr2,
                                 tol_opt->count() ? std::optional<double>(tol) : std::nullopt);
    if (*quadratic) return detail::cmd_quadratic(session, dfile, from, to);
    if (*squeeze) return detail::cmd_squeeze(session, g, trunc, block);
  } catch (const Error& e) {
    out << nlohmann::json{{"error", {{"kind", e.kind()}, {"message", e.what()}}}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    out << nlohmann::json{{"error", {{"kind", "InternalError"}, {"message", e.what()}}}}.dump() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace gwt
