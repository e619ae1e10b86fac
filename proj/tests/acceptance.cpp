// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "loopalg/bss.hpp"
#include "loopalg/catalog.hpp"
#include "loopalg/freecomm.hpp"
#include "loopalg/lie.hpp"
#include "loopalg/mod2.hpp"
#include "loopalg/models.hpp"

using namespace loopalg;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int run_criterion(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.ok && secs >= limit_s) {
    o.ok = false;
    o.detail = "over the time limit";
  }
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(3);
  line << (o.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << secs << " s, limit " << limit_s
       << " s)";
  if (!o.ok) line << " -- " << o.detail;
  std::cout << line.str() << std::endl;
  return o.ok ? 0 : 1;
}

std::string cli(const std::string& args, int* code = nullptr) {
  FILE* pipe = popen((std::string(LOOPALG_CLI_PATH) + " " + args + " 2>&1").c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  if (code) *code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

void top_groups(Outcome& o) {
  struct Case {
    int p, n, k;
  };
  for (auto [p, n, k] : {Case{3, 2, 1}, Case{3, 2, 2}, Case{5, 2, 1}, Case{3, 3, 1}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto g = dpk_top_groups(Coefficients(p, 1), n, k);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int pk = static_cast<int>(ipow(p, k));
    const std::string tag = "(" + std::to_string(p) + "," + std::to_string(n) + "," + std::to_string(k) + ")";
    const std::string ks = std::to_string(k);
    std::vector<std::string> subtop{ad_power(Term::v(n), pk - 1, Term::u(n)).name() + "^1", "bQ1^" + ks + "[v]^1"};
    std::sort(subtop.begin(), subtop.end());
    o.require(g.connectivity == 2 * n * pk - 2 * pk - 1, tag + " connectivity");
    o.require(g.top_dimension == 2 * n * pk - 1, tag + " top dimension");
    o.require(g.top_basis == std::vector<std::string>{"Q1^" + ks + "[v]^1"}, tag + " top basis");
    o.require(g.subtop_basis == subtop, tag + " subtop basis");
    o.require(secs < 10.0, tag + " over 10 s");
  }
}

void primitives(Outcome& o) {
  for (int p : {3, 5}) {
    const Coefficients c(p, 1);
    const auto oracle = primitive_dims_oracle(c, 2, 16);
    const auto formula = restricted_lie_dims(c, 2, 16);
    o.require(oracle.size() == 16 && oracle.rbegin()->first == 16 && oracle == formula, "dimension mismatch at p = " + std::to_string(p));
  }
}

void tensor_collapse(Outcome& o) {
  for (auto [p, r] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {5, 1}}) {
    const auto m = build_tensor_model(Coefficients(p, r), 2, 14);
    BssEngine e(m);
    const auto free_dims = free_algebra_dims(m.generators, AlgebraKind::Associative, m.p, 14);
    const std::string tag = "(" + std::to_string(p) + "," + std::to_string(r) + ")";
    for (int s = 1; s <= r; ++s) {
      const auto pg = e.compute_page(s, 0, 14);
      for (int d = 0; d <= 14; ++d) o.require(pg.dim_at(d) == free_dims[d], tag + " page " + std::to_string(s));
    }
    o.require(e.check_acyclic(r, 1, 14).acyclic, tag + " page r+1 not acyclic");
  }
}

void fibre(Outcome& o) {
  const Coefficients c(3, 1);
  BssEngine e(build_fibre_page_model(c, 2, 2, 24));
  const auto rep = e.check_acyclic(2, 1, 24);  // page r+2
  o.require(rep.nonzero_slices == std::vector<std::pair<int, int>>{{3, 1}}, "unexpected surviving slices");
  const auto* line = rep.page.find(3, 1);
  o.require(line && line->dim == 1, "tau'_0 line is not one-dimensional");
}

void survivors(Outcome& o) {
  for (int r : {1, 2}) {
    const Coefficients c(3, r);
    const auto om = build_omega2_model(c, 2, 11, 3);
    BssEngine e(om.model);
    const auto cls = sigma_tau_classes(c, 2, 1);
    const std::string tag = "r = " + std::to_string(r);
    for (const auto* x : {&cls.tau, &cls.sigma}) {
      const auto rep = e.survivor_check(om.chain_of(*x), r + 1);
      o.require(rep.nonzero && rep.page_reached == r + 1, tag + " class dies early");
    }
    std::vector<std::string> names;
    for (const auto& el : e.chain_basis(10, 3)) names.push_back(om.model.render(el));
    o.require(names == std::vector<std::string>{"L[v,L[v,u]]^1", "bQ1^1[v]^1"}, tag + " degree-10 slice basis");
  }
}

void d2_table(Outcome& o) {
  for (int r : {1, 2})
    for (int n : {2, 3}) {
      const auto m = build_d2_module(r, n);
      const auto t = d2_value_table(m);
      const bool r1 = r == 1;
      const std::vector<std::pair<std::string, std::string>> expected = {
          {"Sq1 Q1v", r1 ? "v^2 + lambda(u,v)" : "v^2"},
          {"Sq2 Q1v", r1 ? "Q1u" : "0"},
          {"Sq2 v^2", r1 ? "u^2" : "0"},
          {"Sq1 uv", r1 ? "u^2" : "0"},
          {"Sq1 lambda(u,v)", "0"},
          {"Sq2 lambda(u,v)", "0"},
          {"beta(1) Q1v", r1 ? "v^2 + lambda(u,v)" : "v^2"},
          {"beta(" + std::to_string(r) + ") uv", "u^2"},
          {"beta(" + std::to_string(r + 1) + ") lambda(u,v)", "Q1u"}};
      const std::string tag = "r = " + std::to_string(r) + ", n = " + std::to_string(n);
      o.require(t == expected, tag + " values");
      for (const auto& c : d2_consistency(m)) o.require(c.ok, tag + " " + c.name);
    }
}

void decompositions(Outcome& o) {
  o.require(decomposition_search(build_d2_module(1, 2)).empty(), "r = 1 splits");
  for (int r : {2, 3}) {
    const auto m = build_d2_module(r, 2);
    bool isolated = false;
    for (const auto& d : decomposition_search(m))
      isolated |= d.first_names() == std::vector<std::string>{"lambda(u,v)", "Q1u"} && reconstructs(m, d);
    o.require(isolated, "r = " + std::to_string(r) + " has no splitting isolating lambda(u,v), Q1u");
  }
}

void chain_identity(Outcome& o) {
  for (int r = 1; r <= 4; ++r) {
    const auto rep = verify_chain_identity(r);
    o.require(rep.coefficient == -(1LL << (r + 1)) && rep.alpha_square_term_vanishes,
              "r = " + std::to_string(r) + " gives " + std::to_string(rep.coefficient));
  }
}

void catalog(Outcome& o) {
  const auto odd = odd_families(3, 1, 2, 1, 4);
  std::vector<long long> odd_space;
  for (const auto& e : odd) {
    if (e.provenance != "odd-family") continue;
    odd_space.push_back(e.degree);
    o.require(e.order == 9, "odd family order");
  }
  o.require(odd_space == std::vector<long long>{11, 23, 35, 47, 59}, "odd family degrees");
  std::vector<long long> cmn;
  for (const auto& e : cmn_summands(3, 1, 2, 2)) cmn.push_back(e.degree);
  o.require(cmn == std::vector<long long>{11, 35}, "summand degrees");
  std::vector<long long> p5, p9;
  for (const auto& e : even_families(2, 2)) {
    if (e.provenance == "p2-P5-family") {
      p5.push_back(e.degree);
      o.require(e.space == "P^5(4)" && e.order == 8, "P^5(4) family order");
    } else {
      p9.push_back(e.degree);
      o.require(e.space == "P^9(4)", "P^9(4) family space");
    }
  }
  o.require(p5 == std::vector<long long>{11, 19}, "P^5(4) degrees");
  o.require(p9 == std::vector<long long>{15, 23}, "P^9(4) degrees");
  o.require(adams_period(2, 5) == 16, "adams_period(2,5)");
}

void determinism(Outcome& o) {
  const std::vector<std::string> golden = {
      "gens --p 3 --r 1 --n 2 --max-deg 11 --max-weight 3",
      "dj --p 3 --r 1 --n 2 --j 3 --json",
      "poincare --p 3 --r 1 --n 2 --max-deg 16",
      "bss --p 3 --r 1 --n 2 --model tensor --max-deg 14 --json",
      "bss --p 3 --r 2 --n 2 --model tensor --max-deg 14 --json",
      "bss --p 5 --r 1 --n 2 --model tensor --max-deg 14 --json",
      "bss --p 3 --r 1 --n 2 --model fibre --max-deg 24 --pages 3 --json",
      "bss --p 3 --r 2 --n 2 --model omega2 --max-deg 15 --json",
      "survivor --p 3 --r 1 --n 2 --k 1",
      "survivor --p 3 --r 2 --n 2 --k 1",
      "d2 --r 1 --n 2",
      "d2 --r 2 --n 2",
      "d2 --r 3 --n 2 --json",
      "chain --r 4",
      "families --p 3 --r 1 --n 2 --k 1 --t-max 4 --csv",
      "families --p 2 --r 2 --n 2 --t-max 2 --json",
      "oracle --p 3 --r 1 --n 2 --max-deg 12"};
  for (const auto& args : golden) {
    int c1 = -1, c2 = -1, c4 = -1;
    const std::string a = cli(args + " --threads 1", &c1);
    const std::string b = cli(args + " --threads 1", &c2);
    const std::string c = cli(args + " --threads 4", &c4);
    o.require(c1 == 0 && c2 == 0 && c4 == 0, "nonzero exit: " + args);
    o.require(a == b, "runs differ: " + args);
    o.require(a == c, "thread counts differ: " + args);
  }
}

}  // namespace

int main() {
  int failures = 0;
  failures += run_criterion(1, "top homology of D_{p^k}", 40.0, top_groups);
  failures += run_criterion(2, "Lie basis plus restricted powers vs tensor primitives", 60.0, primitives);
  failures += run_criterion(3, "tensor model collapses at page r+1", 30.0, tensor_collapse);
  failures += run_criterion(4, "fibre page model leaves only the tau'_0 line", 30.0, fibre);
  failures += run_criterion(5, "tau and sigma survive to page r+1", 30.0, survivors);
  failures += run_criterion(6, "mod-2 operation table and consistency", 1.0, d2_table);
  failures += run_criterion(7, "mod-2 module decompositions", 10.0, decompositions);
  failures += run_criterion(8, "chain identity coefficient", 1.0, chain_identity);
  failures += run_criterion(9, "catalog golden table", 1.0, catalog);
  failures += run_criterion(10, "CLI output is deterministic", 120.0, determinism);
  return failures == 0 ? 0 : 1;
}
