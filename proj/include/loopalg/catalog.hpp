#pragma once

// Degrees and orders of the higher-torsion summands in homotopy groups of
// Moore spaces, and the Adams periods that space them.

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "loopalg/errors.hpp"
#include "loopalg/field.hpp"

namespace loopalg {

struct FamilyEntry {
  std::string space;
  long long degree = 0;
  long long order = 0;
  std::optional<int> k;
  std::optional<int> t;
  std::string provenance;
};

inline std::string moore_space(long long dim, long long order) {
  return "P^" + std::to_string(dim) + "(" + std::to_string(order) + ")";
}

inline void check_prime(long long p) {
  if (!is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
}

/// Degree of the Adams self-map of the mod p^r Moore space.
inline long long adams_period(long long p, int r) {
  check_prime(p);
  if (r < 1) throw InvalidInput("r must be >= 1");
  if (p == 2) return std::max<long long>(8, ipow(2, r - 1));
  return 2 * (p - 1) * ipow(p, r - 1);
}

/// Z/p^{r+1} summands carried along v1-periodic families, in P^{2n+1}(p^r)
/// and in P^{2n}(p^r). A part is emitted when p^k clears its bound; if neither
/// does, k is rejected.
inline std::vector<FamilyEntry> odd_families(long long p, int r, int n, int k, int t_max) {
  check_prime(p);
  if (p == 2) throw InvalidInput("odd_families needs odd p");
  if (r < 1) throw InvalidInput("r must be >= 1");
  if (n <= 1) throw InvalidInput("n must be > 1");
  if (k < 0) throw InvalidInput("k must be >= 0");
  if (t_max < 0) throw InvalidInput("t_max must be >= 0");
  const long long pk = ipow(p, k);
  const bool odd_space = pk * n >= r + 4;
  const bool even_space = pk * (2LL * n - 1) >= r + 3;
  if (!odd_space && !even_space)
    throw InvalidInput("k too small: need p^k >= (r+4)/n or p^k >= (r+3)/(2n-1), got p^k = " + std::to_string(pk));
  const long long step = adams_period(p, r + 1);
  const long long order = ipow(p, r + 1);
  std::vector<FamilyEntry> out;
  if (odd_space)
    for (int t = 0; t <= t_max; ++t)
      out.push_back({moore_space(2LL * n + 1, ipow(p, r)), 2LL * n * pk - 1 + t * step, order, k, t, "odd-family"});
  if (even_space)
    for (int t = 0; t <= t_max; ++t)
      out.push_back(
          {moore_space(2LL * n, ipow(p, r)), (4LL * n - 2) * pk - 1 + t * step, order, k, t, "even-dim-family"});
  return out;
}

/// Z/p^{r+1} summands of P^{2n+1}(p^r) in degrees 2np^k - 1, k = 1..k_max.
inline std::vector<FamilyEntry> cmn_summands(long long p, int r, int n, int k_max) {
  check_prime(p);
  if (p == 2) throw InvalidInput("cmn_summands needs odd p");
  if (r < 1) throw InvalidInput("r must be >= 1");
  if (n <= 1) throw InvalidInput("n must be > 1");
  std::vector<FamilyEntry> out;
  for (int k = 1; k <= k_max; ++k)
    out.push_back({moore_space(2LL * n + 1, ipow(p, r)), 2LL * n * ipow(p, k) - 1, ipow(p, r + 1), k, std::nullopt,
                   "cmn-summand"});
  return out;
}

/// 2-primary families: P^5(4) in degrees 3+8t (r = 2 only) and P^9(2^r) in
/// degrees 7+8t, t = 1..t_max.
inline std::vector<FamilyEntry> even_families(int r, int t_max) {
  if (r != 2 && r != 3) throw InvalidInput("even_families needs r in {2, 3}");
  if (t_max < 0) throw InvalidInput("t_max must be >= 0");
  std::vector<FamilyEntry> out;
  if (r == 2)
    for (int t = 1; t <= t_max; ++t) out.push_back({moore_space(5, 4), 3 + 8LL * t, 8, std::nullopt, t, "p2-P5-family"});
  for (int t = 1; t <= t_max; ++t)
    out.push_back({moore_space(9, ipow(2, r)), 7 + 8LL * t, ipow(2, r + 1), std::nullopt, t, "p2-P9-family"});
  return out;
}

/// pi_{n-1} and pi_n of P^n(p^r) for n >= 4.
inline std::pair<std::string, std::string> low_homotopy(long long p, int r, int n) {
  check_prime(p);
  if (r < 1) throw InvalidInput("r must be >= 1");
  if (n < 4) throw InvalidInput("low_homotopy needs n >= 4 (pi_3(P^3(2)) = Z/4 breaks the pattern)");
  return {"Z/" + std::to_string(ipow(p, r)), p == 2 ? "Z/2" : "0"};
}

inline std::string families_to_csv(const std::vector<FamilyEntry>& es) {
  std::ostringstream out;
  out << "space,degree,order,k,t,provenance\n";
  for (const auto& e : es) {
    out << e.space << ',' << e.degree << ',' << e.order << ',';
    if (e.k) out << *e.k;
    out << ',';
    if (e.t) out << *e.t;
    out << ',' << e.provenance << '\n';
  }
  return out.str();
}

inline nlohmann::ordered_json families_to_json(const std::vector<FamilyEntry>& es) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : es) {
    nlohmann::ordered_json j;
    j["space"] = e.space;
    j["degree"] = e.degree;
    j["order"] = e.order;
    j["k"] = e.k ? nlohmann::ordered_json(*e.k) : nlohmann::ordered_json(nullptr);
    j["t"] = e.t ? nlohmann::ordered_json(*e.t) : nlohmann::ordered_json(nullptr);
    j["provenance"] = e.provenance;
    arr.push_back(j);
  }
  return arr;
}

}  // namespace loopalg
