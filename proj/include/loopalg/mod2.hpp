#pragma once

// The weight-2 summand of H_*(Omega^2 P^{2n+1}(2^r); Z/2): six classes with
// their homology Steenrod operations and Bockstein pattern, a brute-force
// search for splittings of that structure, and the chain-level computation
// that produces the higher Bockstein on lambda(u,v).

#include <array>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "loopalg/errors.hpp"
#include "loopalg/linalg.hpp"

namespace loopalg {

namespace d2 {
enum Class : std::size_t { U2 = 0, UV = 1, V2 = 2, LAMBDA = 3, Q1U = 4, Q1V = 5 };
inline constexpr std::size_t kDim = 6;
inline const std::array<std::string, kDim> kNames = {"u^2", "uv", "v^2", "lambda(u,v)", "Q1u", "Q1v"};
}  // namespace d2

/// A Bockstein on one page, given on representatives of page classes.
struct BocksteinPairing {
  int page = 1;
  Vec source;
  Vec target;
};

struct SteenrodModule {
  int r = 1;
  int n = 2;
  std::array<int, d2::kDim> degrees{};
  Matrix sq1{d2::kDim, d2::kDim, 2};
  Matrix sq2{d2::kDim, d2::kDim, 2};
  std::vector<BocksteinPairing> bocksteins;

  static Vec unit(std::size_t i) {
    Vec v(d2::kDim, 0);
    v[i] = 1;
    return v;
  }

  int last_page() const {
    int s = 0;
    for (const auto& b : bocksteins) s = std::max(s, b.page);
    return s;
  }
};

inline std::string render_d2(const Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] % 2) out += (out.empty() ? "" : " + ") + d2::kNames[i];
  return out.empty() ? "0" : out;
}

inline SteenrodModule build_d2_module(int r, int n) {
  using namespace d2;
  if (r < 1) throw InvalidInput("r must be >= 1");
  if (n <= 1) throw InvalidInput("n must be > 1");
  SteenrodModule m;
  m.r = r;
  m.n = n;
  m.degrees = {4 * n - 4, 4 * n - 3, 4 * n - 2, 4 * n - 2, 4 * n - 3, 4 * n - 1};
  const bool r1 = r == 1;
  m.sq1.at(V2, Q1V) = 1;
  if (r1) {
    m.sq1.at(LAMBDA, Q1V) = 1;
    m.sq1.at(U2, UV) = 1;
    m.sq2.at(Q1U, Q1V) = 1;
    m.sq2.at(U2, V2) = 1;
  }
  using S = SteenrodModule;
  if (r1) {
    // beta^(1) = Sq^1, and the r-th Bockstein coincides with it
    m.bocksteins.push_back({1, S::unit(Q1V), m.sq1.column(Q1V)});
    m.bocksteins.push_back({1, S::unit(UV), S::unit(U2)});
    m.bocksteins.push_back({2, S::unit(LAMBDA), S::unit(Q1U)});
  } else {
    m.bocksteins.push_back({1, S::unit(Q1V), S::unit(V2)});
    m.bocksteins.push_back({r, S::unit(UV), S::unit(U2)});
    m.bocksteins.push_back({r + 1, S::unit(LAMBDA), S::unit(Q1U)});
  }
  return m;
}

/// Cycles and boundaries of the Bockstein spectral sequence of the module,
/// page by page; pages[s-1] = (Z^s, B^s).
struct D2Pages {
  std::vector<std::pair<Subspace, Subspace>> pages;
  std::vector<Matrix> differentials;  // differentials[s-1] acts on page s, as a map on the full module
};

inline D2Pages d2_bockstein_pages(const SteenrodModule& m) {
  D2Pages out;
  Subspace Z(d2::kDim, 2), B(d2::kDim, 2);
  for (std::size_t i = 0; i < d2::kDim; ++i) Z.insert(SteenrodModule::unit(i));
  const int last = m.last_page();
  for (int s = 1; s <= last + 1; ++s) {
    out.pages.emplace_back(Z, B);
    if (s > last) break;
    // d_s sends each source to its target and kills B^s and a complement of
    // the sources in Z^s.
    Subspace span = B;
    std::vector<std::pair<Vec, Vec>> assigned;
    for (const auto& b : m.bocksteins) {
      if (b.page != s) continue;
      if (!Z.contains(b.source)) throw InvariantViolation("Bockstein source " + render_d2(b.source) +
                                                          " is not a cycle at page " + std::to_string(s));
      if (!Z.contains(b.target)) throw InvariantViolation("Bockstein target " + render_d2(b.target) +
                                                          " is not a cycle at page " + std::to_string(s));
      if (!span.insert(b.source))
        throw InvariantViolation("Bockstein sources are dependent at page " + std::to_string(s));
      assigned.emplace_back(b.source, b.target);
    }
    for (const auto& z : Z.basis())
      if (span.insert(z)) assigned.emplace_back(z, Vec(d2::kDim, 0));
    for (const auto& b : B.basis()) assigned.emplace_back(b, Vec(d2::kDim, 0));
    // Solve D * [assigned sources] = [targets]; the sources span Z^s, so D is
    // fixed there and set to zero on a complement of Z^s.
    Subspace all = Z;
    for (std::size_t i = 0; i < d2::kDim; ++i)
      if (all.insert(SteenrodModule::unit(i))) assigned.emplace_back(SteenrodModule::unit(i), Vec(d2::kDim, 0));
    Matrix src(d2::kDim, d2::kDim, 2), tgt(d2::kDim, d2::kDim, 2);
    for (std::size_t j = 0; j < assigned.size(); ++j) {
      src.set_column(j, assigned[j].first);
      tgt.set_column(j, assigned[j].second);
    }
    // D = tgt * src^{-1}
    Matrix aug(d2::kDim, 2 * d2::kDim, 2);
    for (std::size_t i = 0; i < d2::kDim; ++i)
      for (std::size_t j = 0; j < d2::kDim; ++j) {
        aug.at(i, j) = src.at(i, j);
        aug.at(i, d2::kDim + j) = i == j;
      }
    if (src.rank() != d2::kDim) throw InvariantViolation("page representatives do not form a basis");
    aug.rref();
    Matrix inv(d2::kDim, d2::kDim, 2);
    for (std::size_t i = 0; i < d2::kDim; ++i)
      for (std::size_t j = 0; j < d2::kDim; ++j) inv.at(i, j) = aug.at(i, d2::kDim + j);
    const Matrix D = tgt * inv;
    if (!(D * D).is_zero()) throw InvariantViolation("page differential squares to a nonzero map");
    for (std::size_t i = 0; i < d2::kDim; ++i)
      for (std::size_t j = 0; j < d2::kDim; ++j)
        if (D.at(i, j) && m.degrees[i] != m.degrees[j] - 1)
          throw InvariantViolation("Bockstein does not lower degree by one");
    out.differentials.push_back(D);
    Subspace Zn(d2::kDim, 2), Bn = B;
    for (const auto& z : Z.basis()) Bn.insert(D.apply(z));
    // Z^{s+1} = { z in Z^s : D z in B^s }, by enumerating Z^s (at most 64 vectors)
    const auto& zb = Z.basis();
    for (unsigned mask = 1; mask < (1u << zb.size()); ++mask) {
      Vec z(d2::kDim, 0);
      for (std::size_t i = 0; i < zb.size(); ++i)
        if (mask >> i & 1)
          for (std::size_t k = 0; k < d2::kDim; ++k) z[k] ^= zb[i][k];
      if (B.contains(D.apply(z))) Zn.insert(z);
    }
    Z = Zn;
    B = Bn;
  }
  return out;
}

struct Decomposition {
  std::vector<Vec> first;
  std::vector<Vec> second;

  std::vector<std::string> first_names() const { return names(first); }
  std::vector<std::string> second_names() const { return names(second); }

 private:
  static std::vector<std::string> names(const std::vector<Vec>& vs) {
    std::vector<std::string> out;
    for (const auto& v : vs) out.push_back(render_d2(v));
    return out;
  }
};

namespace detail {

inline std::vector<Vec> span_vectors(const Subspace& s) {
  std::vector<Vec> out;
  const auto& b = s.basis();
  for (unsigned mask = 0; mask < (1u << b.size()); ++mask) {
    Vec v(s.ambient(), 0);
    for (std::size_t i = 0; i < b.size(); ++i)
      if (mask >> i & 1)
        for (std::size_t k = 0; k < v.size(); ++k) v[k] ^= b[i][k];
    out.push_back(std::move(v));
  }
  return out;
}

inline Subspace intersect(const Subspace& a, const Subspace& b) {
  Subspace out(a.ambient(), 2);
  for (const auto& v : span_vectors(a))
    if (b.contains(v)) out.insert(v);
  return out;
}

inline Subspace sum(const Subspace& a, const Subspace& b) {
  Subspace out = a;
  for (const auto& v : b.basis()) out.insert(v);
  return out;
}

inline bool invariant_under(const Matrix& op, const Subspace& s) {
  for (const auto& v : s.basis())
    if (!s.contains(op.apply(v))) return false;
  return true;
}

inline bool splits(const Subspace& s, const Subspace& a, const Subspace& b) {
  return intersect(s, a).dim() + intersect(s, b).dim() == s.dim();
}

/// All (A, B) with A + B = V and A, B meeting trivially, for V spanned by the given unit vectors.
inline std::vector<std::pair<Subspace, Subspace>> complementary_pairs(const std::vector<std::size_t>& slice) {
  std::vector<Vec> vectors;
  Subspace whole(d2::kDim, 2);
  for (auto i : slice) whole.insert(SteenrodModule::unit(i));
  // every subspace of the slice, as a list of distinct echelon bases
  std::vector<Subspace> subs;
  const auto all = span_vectors(whole);
  auto known = [&](const Subspace& s) {
    for (const auto& t : subs)
      if (t == s) return true;
    return false;
  };
  for (unsigned mask = 0; mask < (1u << all.size()); ++mask) {
    Subspace s(d2::kDim, 2);
    for (std::size_t i = 0; i < all.size(); ++i)
      if (mask >> i & 1) s.insert(all[i]);
    if (!known(s)) subs.push_back(s);
  }
  std::vector<std::pair<Subspace, Subspace>> out;
  for (const auto& a : subs)
    for (const auto& b : subs)
      if (a.dim() + b.dim() == whole.dim() && sum(a, b).dim() == whole.dim()) out.emplace_back(a, b);
  return out;
}

inline bool accepts(const SteenrodModule& m, const D2Pages& pages, const Subspace& a, const Subspace& b) {
  for (const auto* op : {&m.sq1, &m.sq2})
    if (!invariant_under(*op, a) || !invariant_under(*op, b)) return false;
  for (std::size_t s = 0; s < pages.pages.size(); ++s) {
    const auto& [Z, B] = pages.pages[s];
    if (!splits(Z, a, b) || !splits(B, a, b)) return false;
    if (s >= pages.differentials.size()) continue;
    const Matrix& D = pages.differentials[s];
    for (const auto* part : {&a, &b}) {
      const Subspace target = sum(*part, B);
      const Subspace cycles = intersect(Z, *part);
      for (const auto& z : cycles.basis())
        if (!target.contains(D.apply(z))) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Exhaustive search over degree-homogeneous splittings V = A + B that are
/// compatible with Sq^1, Sq^2 and every Bockstein page. Each unordered pair is
/// reported once, the smaller (then lexicographically first) part first.
inline std::vector<Decomposition> decomposition_search(const SteenrodModule& m, std::size_t* ordered_candidates = nullptr) {
  std::map<int, std::vector<std::size_t>> slices;
  for (std::size_t i = 0; i < d2::kDim; ++i) slices[m.degrees[i]].push_back(i);
  std::vector<std::vector<std::pair<Subspace, Subspace>>> choices;
  for (const auto& [deg, idx] : slices) choices.push_back(detail::complementary_pairs(idx));
  const D2Pages pages = d2_bockstein_pages(m);

  std::size_t candidates = 0;
  std::map<std::pair<std::vector<std::string>, std::vector<std::string>>, Decomposition> found;
  std::vector<std::size_t> pick(choices.size(), 0);
  while (true) {
    ++candidates;
    Subspace a(d2::kDim, 2), b(d2::kDim, 2);
    for (std::size_t i = 0; i < choices.size(); ++i) {
      a = detail::sum(a, choices[i][pick[i]].first);
      b = detail::sum(b, choices[i][pick[i]].second);
    }
    if (a.dim() > 0 && b.dim() > 0 && detail::accepts(m, pages, a, b)) {
      Decomposition d{a.basis(), b.basis()};
      auto ka = d.first_names(), kb = d.second_names();
      if (std::make_pair(kb.size(), kb) < std::make_pair(ka.size(), ka)) {
        std::swap(d.first, d.second);
        std::swap(ka, kb);
      }
      found.emplace(std::make_pair(ka, kb), d);
    }
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  if (ordered_candidates) *ordered_candidates = candidates;
  std::vector<Decomposition> out;
  for (auto& [k, d] : found) out.push_back(std::move(d));
  std::stable_sort(out.begin(), out.end(),
                   [](const Decomposition& x, const Decomposition& y) { return x.first.size() < y.first.size(); });
  return out;
}

/// Restricting every operation to the two parts and adding back gives the
/// original operations.
inline bool reconstructs(const SteenrodModule& m, const Decomposition& d) {
  Subspace a(d2::kDim, 2), b(d2::kDim, 2);
  for (const auto& v : d.first) a.insert(v);
  for (const auto& v : d.second) b.insert(v);
  if (detail::sum(a, b).dim() != d2::kDim || a.dim() + b.dim() != d2::kDim) return false;
  for (const auto* op : {&m.sq1, &m.sq2}) {
    // op restricted to A plus op restricted to B, applied to the unit vectors
    for (std::size_t i = 0; i < d2::kDim; ++i) {
      // write e_i = x + y with x in A, y in B
      const Vec e = SteenrodModule::unit(i);
      Vec x(d2::kDim, 0);
      bool found = false;
      for (const auto& cand : detail::span_vectors(a)) {
        Vec y(d2::kDim, 0);
        for (std::size_t k = 0; k < d2::kDim; ++k) y[k] = e[k] ^ cand[k];
        if (b.contains(y)) {
          x = cand;
          found = true;
          break;
        }
      }
      if (!found) return false;
      Vec y(d2::kDim, 0);
      for (std::size_t k = 0; k < d2::kDim; ++k) y[k] = e[k] ^ x[k];
      const Vec ox = op->apply(x), oy = op->apply(y);
      if (!a.contains(ox) || !b.contains(oy)) return false;
      Vec total(d2::kDim, 0);
      for (std::size_t k = 0; k < d2::kDim; ++k) total[k] = ox[k] ^ oy[k];
      if (total != op->column(i)) return false;
    }
  }
  return true;
}

inline nlohmann::ordered_json decompositions_to_json(const std::vector<Decomposition>& ds) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& d : ds) arr.push_back({{"first", d.first_names()}, {"second", d.second_names()}});
  return arr;
}

/// The nine Steenrod and Bockstein values, read off the module.
inline std::vector<std::pair<std::string, std::string>> d2_value_table(const SteenrodModule& m) {
  using namespace d2;
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("Sq1 Q1v", render_d2(m.sq1.column(Q1V)));
  out.emplace_back("Sq2 Q1v", render_d2(m.sq2.column(Q1V)));
  out.emplace_back("Sq2 v^2", render_d2(m.sq2.column(V2)));
  out.emplace_back("Sq1 uv", render_d2(m.sq1.column(UV)));
  out.emplace_back("Sq1 lambda(u,v)", render_d2(m.sq1.column(LAMBDA)));
  out.emplace_back("Sq2 lambda(u,v)", render_d2(m.sq2.column(LAMBDA)));
  auto bock = [&](std::size_t src) -> std::pair<std::string, std::string> {
    for (const auto& b : m.bocksteins)
      if (b.source == SteenrodModule::unit(src))
        return {"beta(" + std::to_string(b.page) + ") " + kNames[src], render_d2(b.target)};
    return {"beta " + kNames[src], "0"};
  };
  out.push_back(bock(Q1V));
  out.push_back(bock(UV));
  out.push_back(bock(LAMBDA));
  return out;
}

struct ConsistencyCheck {
  std::string name;
  bool ok = false;
};

/// Recomputes the product, bracket and Q1 columns from the action on u and v
/// (Sq^1 v = u exactly when r = 1) and compares with the stored matrices.
inline std::vector<ConsistencyCheck> d2_consistency(const SteenrodModule& m) {
  using namespace d2;
  // weight-one classes: 0 = u, 1 = v; Sq^i on them as maps to {u, v, 0}
  const bool r1 = m.r == 1;
  auto sq_letter = [&](int i, int x) -> int {  // -1 means zero
    if (i == 0) return x;
    if (i == 1 && x == 1 && r1) return 0;
    return -1;
  };
  auto product = [](int x, int y) -> int {  // index of x*y
    if (x > y) std::swap(x, y);
    if (x == 0 && y == 0) return U2;
    if (x == 0 && y == 1) return UV;
    return V2;
  };
  std::vector<ConsistencyCheck> out;
  const Matrix* ops[3] = {nullptr, &m.sq1, &m.sq2};
  // Cartan: Sq^k(xy) = sum_{i+j=k} Sq^i x Sq^j y over F_2
  bool cartan = true;
  const std::pair<int, int> prods[3] = {{0, 0}, {0, 1}, {1, 1}};
  for (int k = 1; k <= 2; ++k)
    for (auto [x, y] : prods) {
      Vec expect(kDim, 0);
      for (int i = 0; i <= k; ++i) {
        const int a = sq_letter(i, x), b = sq_letter(k - i, y);
        if (a >= 0 && b >= 0) expect[product(a, b)] ^= 1;
      }
      if (expect != ops[k]->column(product(x, y))) cartan = false;
    }
  out.push_back({"Cartan formula on u^2, uv, v^2", cartan});
  // Nishida: Sq^2 Q1 = Q1 Sq^1, with Q1 u and Q1 v the only targets here
  {
    Vec expect(kDim, 0);
    const int s = sq_letter(1, 1);
    if (s == 0) expect[Q1U] = 1;
    out.push_back({"Nishida relation on Q1v", expect == m.sq2.column(Q1V)});
  }
  // bracket Cartan: Sq^k lambda(u,v) = sum lambda(Sq^i u, Sq^j v); lambda(x,x) = 0 for x = u
  {
    bool ok = true;
    for (int k = 1; k <= 2; ++k) {
      Vec expect(kDim, 0);
      for (int i = 0; i <= k; ++i) {
        const int a = sq_letter(i, 0), b = sq_letter(k - i, 1);
        if (a < 0 || b < 0) continue;
        if (a == b) continue;  // lambda(u,u) = 0
        expect[LAMBDA] ^= 1;
      }
      if (expect != ops[k]->column(LAMBDA)) ok = false;
    }
    out.push_back({"bracket Cartan formula on lambda(u,v)", ok});
  }
  out.push_back({"Sq1 Sq1 = 0", (m.sq1 * m.sq1).is_zero()});
  bool homogeneous = true;
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t j = 0; j < kDim; ++j) {
      if (m.sq1.at(i, j) && m.degrees[i] != m.degrees[j] - 1) homogeneous = false;
      if (m.sq2.at(i, j) && m.degrees[i] != m.degrees[j] - 2) homogeneous = false;
    }
  out.push_back({"operations lower degree by 1 and 2", homogeneous});
  return out;
}

struct ChainIdentityReport {
  long long coefficient = 0;       // on e_1 (x) b (x) b
  bool alpha_square_term_vanishes = false;
  std::vector<std::string> unreduced;  // terms before alpha^2 = 1 is imposed
};

/// Integral computation in W (x)_{Sigma_2} (X (x) X) of d((alpha + 1) e_1 (x) a (x) b),
/// where |a| is odd, |b| is even and d(a) = 2^r b.
inline ChainIdentityReport verify_chain_identity(int r) {
  if (r < 1 || r > 60) throw InvalidInput("r must be in 1..60");
  // term: (power of alpha, k, x, y) with x, y in {'a', 'b'}
  using T = std::tuple<int, int, char, char>;
  std::map<T, long long> start{{{1, 1, 'a', 'b'}, 1}, {{0, 1, 'a', 'b'}, 1}};
  const long long two_r = 1LL << r;
  auto odd = [](char c) { return c == 'a'; };
  std::map<T, long long> dterm;
  for (const auto& [t, c] : start) {
    const auto [m, k, x, y] = t;
    const long long sk = k % 2 ? -1 : 1;
    if (k >= 1) {
      dterm[{m + 1, k - 1, x, y}] += c;
      dterm[{m, k - 1, x, y}] += sk * c;
    }
    if (x == 'a') dterm[{m, k, 'b', y}] += sk * c * two_r;
    if (y == 'a') dterm[{m, k, x, 'b'}] += sk * c * (odd(x) ? -1 : 1) * two_r;
  }
  ChainIdentityReport rep;
  for (const auto& [t, c] : dterm)
    if (c) {
      const auto [m, k, x, y] = t;
      rep.unreduced.push_back(std::to_string(c) + " alpha^" + std::to_string(m) + " e" + std::to_string(k) + "@" + x +
                              "@" + y);
    }
  // alpha^2 = 1
  std::map<T, long long> reduced;
  for (const auto& [t, c] : dterm) {
    const auto [m, k, x, y] = t;
    reduced[{m % 2, k, x, y}] += c;
  }
  long long e0 = 0;
  for (const auto& [t, c] : reduced)
    if (std::get<1>(t) == 0) e0 += c != 0;
  rep.alpha_square_term_vanishes = e0 == 0;
  // move alpha across the balanced tensor: alpha e_k (x) x (x) y = e_k (x) (-1)^{|x||y|} y (x) x
  std::map<std::tuple<int, char, char>, long long> final_terms;
  for (const auto& [t, c] : reduced) {
    const auto [m, k, x, y] = t;
    if (m == 0)
      final_terms[{k, x, y}] += c;
    else
      final_terms[{k, y, x}] += (odd(x) && odd(y) ? -1 : 1) * c;
  }
  for (const auto& [t, c] : final_terms) {
    if (!c) continue;
    if (t != std::make_tuple(1, 'b', 'b'))
      throw InvariantViolation("chain identity left a stray term on e" + std::to_string(std::get<0>(t)) + "@" +
                               std::get<1>(t) + "@" + std::get<2>(t));
    rep.coefficient = c;
  }
  return rep;
}

}  // namespace loopalg
