#pragma once

// Generator tables for the mod-p homology of the double loop space of an
// odd-dimensional Moore space, its monomial bases by (degree, weight), and the
// weight-j Snaith summands.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "loopalg/errors.hpp"
#include "loopalg/field.hpp"
#include "loopalg/lie.hpp"
#include "loopalg/term.hpp"

namespace loopalg {

struct GeneratorTable {
  Coefficients coeffs;
  int n;
  std::vector<Term> generators;  // sorted by (degree, weight, name)
  int max_degree;
  int max_weight;

  /// Odd generators square to zero (odd p only).
  bool exterior(int idx) const { return coeffs.odd() && generators[idx].odd(); }

  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (generators[i].name() == name) return static_cast<int>(i);
    throw InvalidInput("no generator named " + name + " within the table cutoffs");
  }
};

/// Nondecreasing list of generator indices into a table; repeats encode powers.
struct Monomial {
  std::vector<int> factors;
  int degree = 0;
  int weight = 0;

  std::vector<std::pair<int, int>> exponents() const {
    std::vector<std::pair<int, int>> out;
    for (int f : factors) {
      if (!out.empty() && out.back().first == f)
        ++out.back().second;
      else
        out.emplace_back(f, 1);
    }
    return out;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors == b.factors; }
};

/// "g1^e1*g2^e2*..." in table order; the empty monomial is "1".
inline std::string render_monomial(const GeneratorTable& table, const Monomial& m) {
  if (m.factors.empty()) return "1";
  std::string out;
  for (auto [g, e] : m.exponents()) {
    if (!out.empty()) out += "*";
    out += table.generators[g].name() + "^" + std::to_string(e);
  }
  return out;
}

inline void sort_generators(std::vector<Term>& gens) {
  std::sort(gens.begin(), gens.end(), [](const Term& a, const Term& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    return a.name() < b.name();
  });
}

inline GeneratorTable generator_table(const Coefficients& coeffs, int n, int max_degree, int max_weight) {
  if (n <= 1) throw InvalidInput("n must be > 1");
  if (max_weight < 1) throw InvalidInput("max_weight must be >= 1");
  if (!coeffs.odd() && max_weight > 2)
    throw InvalidInput("p = 2 generator tables are supported only through weight 2");
  GeneratorTable table{coeffs, n, {}, max_degree, max_weight};
  if (max_degree < 2 * n - 2) return table;

  const auto lie = lyndon_basis(coeffs, n, max_degree);
  for (const auto& c : lie.elements) {
    if (c.weight() <= max_weight) table.generators.push_back(c);
    if (coeffs.odd() && !c.odd()) continue;
    if (!coeffs.odd() && c.weight() != 1) continue;
    for (int k = 1;; ++k) {
      const long long pk = ipow(coeffs.p(), k);
      if (pk * c.weight() > max_weight || pk * (c.degree() + 1) - 2 > max_degree) break;
      const Term q = Term::q(coeffs.p(), k, c);
      if (q.degree() <= max_degree) table.generators.push_back(q);
      if (coeffs.odd()) table.generators.push_back(Term::beta_q(coeffs.p(), k, c));
    }
  }
  sort_generators(table.generators);
  return table;
}

/// Largest possible degree of a weight-w monomial: every generator has degree
/// at most 2n * weight - 1.
inline int weight_top_degree(int n, int w) { return 2 * n * w - 1; }
/// Smallest possible degree of a weight-w monomial (u^w).
inline int weight_bottom_degree(int n, int w) { return (2 * n - 2) * w; }

namespace detail {

inline void enumerate_monomials(const GeneratorTable& table, int degree, std::optional<int> weight,
                                std::vector<Monomial>& out) {
  Monomial cur;
  const int G = static_cast<int>(table.generators.size());
  auto rec = [&](auto&& self, int start, int rem_deg) -> void {
    if (rem_deg == 0) {
      if (!weight || cur.weight == *weight) out.push_back(cur);
      return;
    }
    for (int g = start; g < G; ++g) {
      const Term& t = table.generators[g];
      if (t.degree() > rem_deg) break;  // sorted by degree
      if (weight && cur.weight + t.weight() > *weight) continue;
      if (table.exterior(g) && !cur.factors.empty() && cur.factors.back() == g) continue;
      cur.factors.push_back(g);
      cur.degree += t.degree();
      cur.weight += t.weight();
      self(self, g, rem_deg - t.degree());
      cur.factors.pop_back();
      cur.degree -= t.degree();
      cur.weight -= t.weight();
    }
  };
  rec(rec, 0, degree);
}

}  // namespace detail

/// Every monomial of the given degree (and weight). Requests beyond the table
/// cutoffs are rejected rather than silently truncated.
inline std::vector<Monomial> monomial_basis(const GeneratorTable& table, int degree,
                                            std::optional<int> weight = std::nullopt) {
  if (degree < 0) throw InvalidInput("negative degree");
  if (degree > table.max_degree)
    throw RangeIncomplete("degree " + std::to_string(degree) + " exceeds table max_degree " +
                          std::to_string(table.max_degree));
  if (weight && *weight > table.max_weight)
    throw RangeIncomplete("weight " + std::to_string(*weight) + " exceeds table max_weight " +
                          std::to_string(table.max_weight));
  if (!weight && degree / (2 * table.n - 2) > table.max_weight)
    throw RangeIncomplete("degree " + std::to_string(degree) + " admits weights up to " +
                          std::to_string(degree / (2 * table.n - 2)) + " but the table stops at weight " +
                          std::to_string(table.max_weight));
  std::vector<Monomial> out;
  detail::enumerate_monomials(table, degree, weight, out);
  std::vector<std::pair<std::string, Monomial>> keyed;
  keyed.reserve(out.size());
  for (auto& m : out) keyed.emplace_back(render_monomial(table, m), std::move(m));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  out.clear();
  for (auto& [k, m] : keyed) out.push_back(std::move(m));
  return out;
}

/// Monomial counts in degrees 0..max_degree by enumeration.
inline std::vector<long long> poincare_series(const GeneratorTable& table, int max_degree) {
  std::vector<long long> out;
  for (int d = 0; d <= max_degree; ++d) out.push_back(static_cast<long long>(monomial_basis(table, d).size()));
  return out;
}

/// prod_{even g} 1/(1-t^|g|) * prod_{odd g} (1+t^|g|), truncated.
inline std::vector<long long> poincare_closed_form(const GeneratorTable& table, int max_degree) {
  std::vector<long long> series(static_cast<std::size_t>(max_degree) + 1, 0);
  series[0] = 1;
  for (std::size_t g = 0; g < table.generators.size(); ++g) {
    const int d = table.generators[g].degree();
    if (d > max_degree) continue;
    if (table.exterior(static_cast<int>(g))) {
      for (int i = max_degree; i >= d; --i) series[i] += series[i - d];
    } else {
      for (int i = d; i <= max_degree; ++i) series[i] += series[i - d];
    }
  }
  return series;
}

struct SummandHomology {
  int j = 0;
  std::map<int, int> dims;
  std::map<int, std::vector<Monomial>> bases;
};

/// Reduced homology of the weight-j Snaith summand D_j.
inline SummandHomology dj_homology(const GeneratorTable& table, int j) {
  if (j < 1) throw InvalidInput("j must be >= 1");
  if (j > table.max_weight)
    throw RangeIncomplete("weight " + std::to_string(j) + " exceeds table max_weight " +
                          std::to_string(table.max_weight));
  const int top = weight_top_degree(table.n, j);
  if (top > table.max_degree)
    throw RangeIncomplete("weight " + std::to_string(j) + " needs degrees through " + std::to_string(top) +
                          " but the table stops at " + std::to_string(table.max_degree));
  SummandHomology out;
  out.j = j;
  for (int d = weight_bottom_degree(table.n, j); d <= top; ++d) {
    auto basis = monomial_basis(table, d, j);
    if (basis.empty()) continue;
    out.dims[d] = static_cast<int>(basis.size());
    out.bases[d] = std::move(basis);
  }
  return out;
}

/// A table sized exactly for the weight-j summand.
inline GeneratorTable summand_table(const Coefficients& coeffs, int n, int j) {
  return generator_table(coeffs, n, weight_top_degree(n, j), j);
}

inline nlohmann::ordered_json summand_to_json(const GeneratorTable& table, const SummandHomology& h) {
  nlohmann::ordered_json dims = nlohmann::ordered_json::object();
  nlohmann::ordered_json basis = nlohmann::ordered_json::object();
  for (const auto& [d, k] : h.dims) dims[std::to_string(d)] = k;
  for (const auto& [d, ms] : h.bases) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& m : ms) arr.push_back(render_monomial(table, m));
    basis[std::to_string(d)] = arr;
  }
  nlohmann::ordered_json out;
  out["j"] = h.j;
  out["dims"] = dims;
  out["basis"] = basis;
  return out;
}

struct DpkTopGroups {
  int connectivity = 0;
  int top_dimension = 0;
  std::vector<std::string> top_basis;
  std::vector<std::string> subtop_basis;
};

/// Connectivity and the top two homology groups of D_{p^k}. For k = 0 this is
/// the Moore space itself, with a one-dimensional subtop group.
inline DpkTopGroups dpk_top_groups(const Coefficients& coeffs, int n, int k) {
  if (!coeffs.odd()) throw InvalidInput("dpk_top_groups needs odd p");
  if (k < 0) throw InvalidInput("k must be >= 0");
  const int w = static_cast<int>(ipow(coeffs.p(), k));
  const auto table = summand_table(coeffs, n, w);
  auto names = [&](const std::vector<Monomial>& ms) {
    std::vector<std::string> out;
    for (const auto& m : ms) out.push_back(render_monomial(table, m));
    return out;
  };
  DpkTopGroups out;
  int bottom = weight_bottom_degree(n, w);
  while (bottom <= table.max_degree && monomial_basis(table, bottom, w).empty()) ++bottom;
  int top = weight_top_degree(n, w);
  while (top >= bottom && monomial_basis(table, top, w).empty()) --top;
  if (bottom > top) throw InvariantViolation("empty summand");
  out.connectivity = bottom - 1;
  out.top_dimension = top;
  out.top_basis = names(monomial_basis(table, top, w));
  out.subtop_basis = names(monomial_basis(table, top - 1, w));
  return out;
}

}  // namespace loopalg
