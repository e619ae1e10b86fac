#pragma once

// Command-line front end. run() parses argv, executes one subcommand and
// returns the process exit code: 0 success, 1 invariant violation, 2 invalid
// input or usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "loopalg/bss.hpp"
#include "loopalg/catalog.hpp"
#include "loopalg/errors.hpp"
#include "loopalg/freecomm.hpp"
#include "loopalg/lie.hpp"
#include "loopalg/mod2.hpp"
#include "loopalg/models.hpp"

namespace loopalg::cli {

using json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::optional<int> p, r, n, k, j, t_max, max_deg, max_weight, pages, weight;
  std::string model = "omega2";
  bool json = false;
  bool csv = false;
  std::string out;
  unsigned threads = 1;
};

inline int need(const std::optional<int>& v, const char* flag) {
  if (!v) throw InvalidInput(std::string("missing required parameter ") + flag);
  return *v;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::string cmd_gens(const RunConfig& c) {
  const int p = need(c.p, "--p"), n = need(c.n, "--n"), D = need(c.max_deg, "--max-deg");
  if (n <= 1) throw InvalidInput("n must be > 1");
  const int W = c.max_weight.value_or(p == 2 ? 2 : std::max(1, D / (2 * n - 2)));
  const auto table = generator_table(Coefficients(p, c.r.value_or(1)), n, D, W);
  if (c.json) {
    json out;
    out["p"] = p;
    out["n"] = n;
    out["max_degree"] = D;
    out["max_weight"] = W;
    auto gens = json::array();
    for (const auto& g : table.generators)
      gens.push_back({{"term", g.name()}, {"degree", g.degree()}, {"weight", g.weight()},
                      {"parity", g.odd() ? "odd" : "even"}});
    out["generators"] = gens;
    return dump(out);
  }
  std::ostringstream os;
  os << "term degree weight parity\n";
  for (const auto& g : table.generators)
    os << g.name() << ' ' << g.degree() << ' ' << g.weight() << ' ' << (g.odd() ? "odd" : "even") << '\n';
  return os.str();
}

inline std::string cmd_dj(const RunConfig& c) {
  const int p = need(c.p, "--p"), n = need(c.n, "--n"), j = need(c.j, "--j");
  const Coefficients coeffs(p, c.r.value_or(1));
  if (j < 1) throw InvalidInput("j must be >= 1");
  const auto table = summand_table(coeffs, n, j);
  const auto h = dj_homology(table, j);
  if (c.json) return dump(summand_to_json(table, h));
  std::ostringstream os;
  os << "D_" << j << " reduced homology\n";
  for (const auto& [d, k] : h.dims) {
    os << "degree " << d << ": dim " << k << ":";
    for (const auto& m : h.bases.at(d)) os << ' ' << render_monomial(table, m);
    os << '\n';
  }
  return os.str();
}

inline std::string cmd_poincare(const RunConfig& c) {
  const int p = need(c.p, "--p"), n = need(c.n, "--n"), D = need(c.max_deg, "--max-deg");
  if (n <= 1) throw InvalidInput("n must be > 1");
  const int W = c.max_weight.value_or(p == 2 ? 2 : std::max(1, D / (2 * n - 2)));
  const auto table = generator_table(Coefficients(p, c.r.value_or(1)), n, D, W);
  const auto enumerated = poincare_series(table, D);
  const auto closed = poincare_closed_form(table, D);
  if (enumerated != closed) throw InvariantViolation("oracle mismatch: enumerated Poincare series differs from product formula");
  if (c.json) {
    json out;
    out["p"] = p;
    out["n"] = n;
    out["max_degree"] = D;
    out["coefficients"] = enumerated;
    return dump(out);
  }
  std::ostringstream os;
  os << "degree dim\n";
  for (int d = 0; d <= D; ++d) os << d << ' ' << enumerated[d] << '\n';
  return os.str();
}

inline std::string cmd_bss(const RunConfig& c) {
  const int p = need(c.p, "--p"), r = need(c.r, "--r"), n = need(c.n, "--n"), D = need(c.max_deg, "--max-deg");
  const Coefficients coeffs(p, r);
  if (n <= 1) throw InvalidInput("n must be > 1");
  if (D < 1) throw InvalidInput("max-deg must be >= 1");
  const int S = c.pages.value_or(r + 1);
  if (S < 1) throw InvalidInput("pages must be >= 1");
  StagedModel model;
  if (c.model == "omega2") {
    // page s reads chains up to s - 1 degrees above what it reports
    const int built = D + S - 1;
    const int W = c.max_weight.value_or(std::max(1, built / (2 * n - 2)));
    model = build_omega2_model(coeffs, n, built, W).model;
  } else if (c.model == "tensor") {
    model = build_tensor_model(coeffs, n, D);
  } else if (c.model == "fibre") {
    int k_max = 0;
    while (2LL * n * ipow(p, k_max + 1) - 3 < D + S - 1) ++k_max;
    model = build_fibre_page_model(coeffs, n, c.k.value_or(k_max), D);
  } else {
    throw InvalidInput("unknown model " + c.model);
  }
  BssEngine engine(model, EngineOptions{c.threads});
  std::vector<Page> pages;
  for (int s = 1; s <= S; ++s) pages.push_back(engine.compute_page(s, 0, D, c.weight));
  std::vector<std::pair<int, int>> nonzero;
  for (const auto& sl : pages.back().slices)
    if (sl.dim > 0 && sl.degree > 0) nonzero.emplace_back(sl.degree, sl.weight);
  if (c.json) {
    json out;
    out["model"] = model_to_json(model);
    auto arr = json::array();
    for (const auto& pg : pages) arr.push_back(page_to_json(model, pg));
    out["pages"] = arr;
    out["acyclic"] = nonzero.empty();
    auto nz = json::array();
    for (auto [d, w] : nonzero) nz.push_back({{"degree", d}, {"weight", w}});
    out["nonzero_slices"] = nz;
    return dump(out);
  }
  std::ostringstream os;
  os << "model " << model.label << " (" << to_string(model.kind) << "), p=" << p << " r=" << r << " n=" << n
     << ", degrees 0.." << D << '\n';
  for (const auto& pg : pages) {
    os << "page " << pg.s << ":";
    for (int d = 0; d <= D; ++d) os << ' ' << pg.dim_at(d);
    os << '\n';
  }
  os << "page " << S << " reduced homology in degrees 1.." << D << ": ";
  if (nonzero.empty()) {
    os << "zero (acyclic)\n";
  } else {
    os << "nonzero at";
    for (auto [d, w] : nonzero) os << " (" << d << "," << w << ")";
    os << '\n';
  }
  return os.str();
}

inline std::string cmd_survivor(const RunConfig& c) {
  const int p = need(c.p, "--p"), r = need(c.r, "--r"), n = need(c.n, "--n"), k = need(c.k, "--k");
  const Coefficients coeffs(p, r);
  if (!coeffs.odd()) throw InvalidInput("survivor needs odd p");
  if (k < 1) throw InvalidInput("k must be >= 1");
  const long long N = ipow(p, k);
  if (N > 120) throw InvalidInput("p^k too large (limit 120)");
  const int W = static_cast<int>(N);
  const auto om = build_omega2_model(coeffs, n, 2 * n * W - 1, W);
  BssEngine engine(om.model, EngineOptions{c.threads});
  const auto cls = sigma_tau_classes(coeffs, n, k);
  auto name = [](const Term& t) { return t.name(); };
  struct Row {
    std::string label, cls;
    SurvivorReport rep;
  };
  std::vector<Row> rows;
  rows.push_back({"tau", cls.tau.render(name), engine.survivor_check(om.chain_of(cls.tau), r + 1)});
  rows.push_back({"sigma", cls.sigma.render(name), engine.survivor_check(om.chain_of(cls.sigma), r + 1)});
  std::vector<std::string> slice;
  for (const auto& e : engine.chain_basis(2 * n * W - 2, W)) slice.push_back(om.model.render(e));
  if (c.json) {
    json out;
    out["p"] = p;
    out["r"] = r;
    out["n"] = n;
    out["k"] = k;
    out["target_page"] = r + 1;
    auto arr = json::array();
    for (const auto& row : rows) {
      json j;
      j["class"] = row.label;
      j["value"] = row.cls;
      j["page_reached"] = row.rep.page_reached;
      j["nonzero"] = row.rep.nonzero;
      j["obstruction"] = row.rep.obstruction ? json(*row.rep.obstruction) : json(nullptr);
      arr.push_back(j);
    }
    out["classes"] = arr;
    out["slice_basis"] = slice;
    return dump(out);
  }
  std::ostringstream os;
  for (const auto& row : rows) {
    os << row.label << " = " << row.cls << ": reached page " << row.rep.page_reached << " of " << r + 1 << ", "
       << (row.rep.nonzero ? "nonzero" : "dead");
    if (row.rep.obstruction) os << " (" << *row.rep.obstruction << ")";
    os << '\n';
  }
  os << "chain basis in degree " << 2 * n * W - 2 << ", weight " << W << ":";
  for (const auto& s : slice) os << ' ' << s;
  os << '\n';
  return os.str();
}

inline std::string cmd_d2(const RunConfig& c) {
  const int r = need(c.r, "--r"), n = need(c.n, "--n");
  const auto m = build_d2_module(r, n);
  const auto values = d2_value_table(m);
  const auto checks = d2_consistency(m);
  const auto decs = decomposition_search(m);
  for (const auto& ch : checks)
    if (!ch.ok) throw InvariantViolation("consistency check failed: " + ch.name);
  for (const auto& d : decs)
    if (!reconstructs(m, d)) throw InvariantViolation("decomposition does not reconstruct the module");
  if (c.json) {
    json out;
    out["r"] = r;
    out["n"] = n;
    auto basis = json::array();
    for (std::size_t i = 0; i < d2::kDim; ++i) basis.push_back({{"class", d2::kNames[i]}, {"degree", m.degrees[i]}});
    out["basis"] = basis;
    json vals = json::object();
    for (const auto& [k, v] : values) vals[k] = v;
    out["values"] = vals;
    json cons = json::object();
    for (const auto& ch : checks) cons[ch.name] = ch.ok;
    out["consistency"] = cons;
    out["decompositions"] = decompositions_to_json(decs);
    return dump(out);
  }
  std::ostringstream os;
  for (const auto& [k, v] : values) os << k << " = " << v << '\n';
  for (const auto& ch : checks) os << "check " << ch.name << ": " << (ch.ok ? "ok" : "FAILED") << '\n';
  os << decs.size() << " nontrivial decomposition(s)\n";
  for (const auto& d : decs) {
    os << "  {";
    const auto a = d.first_names(), b = d.second_names();
    for (std::size_t i = 0; i < a.size(); ++i) os << (i ? ", " : "") << a[i];
    os << "} + {";
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? ", " : "") << b[i];
    os << "}\n";
  }
  return os.str();
}

inline std::string cmd_chain(const RunConfig& c) {
  const int r = need(c.r, "--r");
  const auto rep = verify_chain_identity(r);
  const long long expected = -(1LL << (r + 1));
  if (rep.coefficient != expected || !rep.alpha_square_term_vanishes)
    throw InvariantViolation("chain identity produced coefficient " + std::to_string(rep.coefficient));
  if (c.json) {
    json out;
    out["r"] = r;
    out["unreduced"] = rep.unreduced;
    out["alpha_square_term_vanishes"] = rep.alpha_square_term_vanishes;
    out["coefficient"] = rep.coefficient;
    return dump(out);
  }
  std::ostringstream os;
  os << "d((alpha+1) e1@a@b) before alpha^2 = 1:";
  for (const auto& t : rep.unreduced) os << ' ' << t << ';';
  os << "\nalpha^2 - 1 term vanishes: " << (rep.alpha_square_term_vanishes ? "yes" : "no") << '\n';
  os << "coefficient on e1@b@b: " << rep.coefficient << '\n';
  return os.str();
}

inline std::string cmd_families(const RunConfig& c) {
  const int p = need(c.p, "--p"), r = need(c.r, "--r");
  const int t_max = c.t_max.value_or(0);
  std::vector<FamilyEntry> entries;
  if (p == 2) {
    entries = even_families(r, t_max);
  } else {
    const int n = need(c.n, "--n"), k = need(c.k, "--k");
    entries = odd_families(p, r, n, k, t_max);
    const auto cmn = cmn_summands(p, r, n, k);
    entries.insert(entries.end(), cmn.begin(), cmn.end());
  }
  if (c.json) {
    json out;
    out["adams_period"] = adams_period(p, r);
    out["entries"] = families_to_json(entries);
    return dump(out);
  }
  if (c.csv) return families_to_csv(entries);
  std::ostringstream os;
  os << "adams period q_" << r << " = " << adams_period(p, r) << '\n';
  for (const auto& e : entries) {
    os << "Z/" << e.order << " in pi_" << e.degree << "(" << e.space << ")";
    if (e.k) os << " k=" << *e.k;
    if (e.t) os << " t=" << *e.t;
    os << " [" << e.provenance << "]\n";
  }
  return os.str();
}

inline std::string cmd_oracle(const RunConfig& c) {
  const int p = need(c.p, "--p"), n = need(c.n, "--n");
  const int D = c.max_deg.value_or(16);
  const int W = c.max_weight.value_or(4);
  const Coefficients coeffs(p, c.r.value_or(1));
  struct Check {
    std::string name;
    std::size_t cases = 0;
    std::vector<std::string> mismatches;
  };
  std::vector<Check> checks;

  Check prim{"primitives of T(a,b) vs Lie basis and restricted powers", 0, {}};
  const auto oracle = primitive_dims_oracle(coeffs, n, D);
  const auto basis_side = restricted_lie_dims(coeffs, n, D);
  for (int d = 1; d <= D; ++d) {
    ++prim.cases;
    if (oracle.at(d) != basis_side.at(d))
      prim.mismatches.push_back("degree " + std::to_string(d) + ": " + std::to_string(oracle.at(d)) + " vs " +
                                std::to_string(basis_side.at(d)));
  }
  checks.push_back(prim);

  Check straight{"straightening preserves the tensor embedding", 0, {}};
  for (const auto& e : bracket_expressions(n, W)) {
    ++straight.cases;
    const LieComb nf = lie_normal_form(e, coeffs, n);
    if (!(tensor_embedding(e, coeffs.p()) == tensor_embedding(nf))) straight.mismatches.push_back(e.name());
  }
  checks.push_back(straight);

  if (coeffs.odd()) {
    Check bock{"bracket Bockstein commutes with the tensor embedding", 0, {}};
    const auto table = generator_table(coeffs, n, D, std::max(1, D / (2 * n - 2)));
    for (const auto& g : table.generators) bock.cases += g.is_lie();
    if (auto bad = bockstein_embedding_mismatch(table)) bock.mismatches.push_back(*bad);
    checks.push_back(bock);
  }

  Check pages{"page dimensions vs rank formula on T(u,v)", 0, {}};
  {
    const int r = coeffs.r();
    BssEngine engine(build_tensor_model(coeffs, n, D), EngineOptions{c.threads});
    const auto page = engine.compute_page(r + 1, 1, D);
    for (int w = 1; w * (2 * n - 1) <= D; ++w)
      for (int d = 1; d <= D; ++d) {
        const std::size_t cd = engine.chain_basis(d, w).size();
        if (!cd) continue;
        ++pages.cases;
        const std::size_t out_rank = engine.derivation_matrix(r, d, w).rank();
        const std::size_t in_rank = engine.derivation_matrix(r, d + 1, w).rank();
        const auto* sl = page.find(d, w);
        const std::size_t dim = sl ? sl->dim : 0;
        if (dim != cd - out_rank - in_rank)
          pages.mismatches.push_back("(" + std::to_string(d) + "," + std::to_string(w) + ")");
      }
  }
  checks.push_back(pages);

  bool ok = true;
  std::ostringstream os;
  json out = json::array();
  for (const auto& ch : checks) {
    ok = ok && ch.mismatches.empty();
    os << ch.name << ": " << ch.cases << " cases, " << ch.mismatches.size() << " mismatches";
    for (const auto& m : ch.mismatches) os << ' ' << m;
    os << '\n';
    out.push_back({{"check", ch.name}, {"cases", ch.cases}, {"mismatches", ch.mismatches}});
  }
  if (!ok) throw InvariantViolation("oracle mismatch\n" + os.str());
  return c.json ? dump(out) : os.str();
}

inline std::string execute(const RunConfig& c) {
  if (c.command == "gens") return cmd_gens(c);
  if (c.command == "dj") return cmd_dj(c);
  if (c.command == "poincare") return cmd_poincare(c);
  if (c.command == "bss") return cmd_bss(c);
  if (c.command == "survivor") return cmd_survivor(c);
  if (c.command == "d2") return cmd_d2(c);
  if (c.command == "chain") return cmd_chain(c);
  if (c.command == "families") return cmd_families(c);
  if (c.command == "oracle") return cmd_oracle(c);
  throw InvalidInput("unknown command " + c.command);
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Exact mod-p homology and Bockstein spectral sequences for double loop spaces of Moore spaces",
               "loopalg"};
  app.require_subcommand(1);
  app.set_config("--config", "", "file of key = value lines presetting flags; the command line wins");
  app.add_option("--p", cfg.p, "prime");
  app.add_option("--r", cfg.r, "Moore space exponent, r >= 1");
  app.add_option("--n", cfg.n, "sphere index, n >= 2");
  app.add_option("--k", cfg.k, "Dyer-Lashof exponent / family index, k >= 0");
  app.add_option("--j", cfg.j, "Snaith summand weight, j >= 1");
  app.add_option("--t-max", cfg.t_max, "largest family parameter t");
  app.add_option("--max-deg", cfg.max_deg, "largest degree computed");
  app.add_option("--max-weight", cfg.max_weight, "largest weight computed");
  app.add_option("--pages", cfg.pages, "last spectral sequence page computed");
  app.add_option("--weight", cfg.weight, "restrict to one weight");
  app.add_option("--model", cfg.model, "omega2 | tensor | fibre")->check(CLI::IsMember({"omega2", "tensor", "fibre"}));
  app.add_flag("--json", cfg.json, "JSON output");
  app.add_flag("--csv", cfg.csv, "CSV output (families)");
  app.add_option("--out", cfg.out, "write output to this file");
  app.add_option("--threads", cfg.threads, "worker threads for page computation")->check(CLI::Range(1u, 256u));
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gens", "generator table"},
      {"dj", "homology of one Snaith summand"},
      {"poincare", "Poincare series by enumeration and product formula"},
      {"bss", "Bockstein spectral sequence pages of a model"},
      {"survivor", "follow tau_k and sigma_k through the pages"},
      {"d2", "p = 2 weight-2 module: operations and decompositions"},
      {"chain", "chain-level identity for the higher Bockstein on lambda(u,v)"},
      {"families", "catalog of higher-torsion summands"},
      {"oracle", "brute-force cross-checks"}};
  for (const auto& [name, help] : commands)
    app.add_subcommand(name, help)->fallthrough()->callback([&cfg, name = name] { cfg.command = name; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    const std::string text = execute(cfg);
    if (cfg.out.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw InvalidInput("cannot write " + cfg.out);
      f << text;
    }
    return 0;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return 1;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace loopalg::cli
