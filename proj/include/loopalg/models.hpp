#pragma once

// Concrete staged models: the double loop space of P^{2n+1}(p^r), the tensor
// algebra T(u,v) for the single loop space, and the page model for the loop
// space of the pinch-map fibre. Also the classes tau_k and sigma_k.

#include <climits>
#include <string>
#include <vector>

#include "loopalg/bss.hpp"
#include "loopalg/errors.hpp"
#include "loopalg/field.hpp"
#include "loopalg/freecomm.hpp"
#include "loopalg/lie.hpp"
#include "loopalg/term.hpp"

namespace loopalg {

/// Lie elements as combinations of named basis terms.
using LieComb = LinComb<Term>;

struct ClassPair {
  LieComb tau;
  LieComb sigma;
  int k = 1;
};

/// C(N, j) / p mod p for 0 < j < N = p^k.
inline Scalar binomial_over_p(Scalar p, int N, int j) {
  unsigned __int128 c = 1;
  for (int i = 0; i < j; ++i) c = c * static_cast<unsigned>(N - i) / static_cast<unsigned>(i + 1);
  if (c % p != 0) throw InvariantViolation("binomial coefficient of a prime power is not divisible by p");
  return static_cast<Scalar>((c / p) % p);
}

inline ClassPair sigma_tau_classes(const Coefficients& coeffs, int n, int k) {
  if (!coeffs.odd()) throw InvalidInput("sigma_tau_classes needs odd p");
  if (k < 1) throw InvalidInput("k must be >= 1 (k = 0 is degenerate)");
  const long long N = ipow(coeffs.p(), k);
  if (N > 120) throw InvalidInput("p^k too large for exact binomials (limit 120)");
  const Scalar p = coeffs.p();
  const Zp f(p);
  const Term u = Term::u(n), v = Term::v(n);
  LieStraightener st(static_cast<int>(p), n);
  ClassPair out{LieComb(p), LieComb(p), k};
  out.tau = st.to_terms(st.normalize_keys(ad_power(v, static_cast<int>(N) - 1, u)));
  LieStraightener::KeyComb sigma(p);
  const Scalar half = f.inv(2);
  for (int j = 1; j < N; ++j) {
    const Scalar c = f.mul(binomial_over_p(p, static_cast<int>(N), j), half);
    if (!c) continue;
    const Term x = ad_power(v, j - 1, u), y = ad_power(v, static_cast<int>(N) - j - 1, u);
    sigma.add_scaled(st.normalize_keys(Term::bracket(x, y)), c);
  }
  out.sigma = st.to_terms(sigma);
  return out;
}

inline int lie_degree(const LieComb& c) {
  if (c.is_zero()) throw InvalidInput("zero Lie element has no degree");
  return c.begin()->first.degree();
}

/// The staged model of H_*(Omega^2 P^{2n+1}(p^r)) with its generator table.
struct Omega2Model {
  GeneratorTable table;
  StagedModel model;
  int r = 1;

  Chain chain_of(const LieComb& c) const {
    Chain out(model.p);
    for (const auto& [t, coeff] : c) out.add(Element{table.index_of(t.name())}, coeff);
    return out;
  }
  Chain chain_of(const Term& t) const { return Chain(model.p, Element{table.index_of(t.name())}); }
};

/// Image of a bracket expression under the derivation v -> u, extended by
/// d[x,y] = [dx,y] + (-1)^{|x|+1}[x,dy] (single-loop parity of x).
inline LieStraightener::KeyComb lie_bockstein_keys(LieStraightener& st, const Term& t) {
  const Scalar P = static_cast<Scalar>(st.prime());
  const Zp f(P);
  switch (t.shape()) {
    case Term::Shape::GenU:
      return LieStraightener::KeyComb(P);
    case Term::Shape::GenV:
      return LieStraightener::KeyComb(P, LieKey{"a", false});
    case Term::Shape::Bracket: {
      auto out = st.bracket(lie_bockstein_keys(st, t.left()), st.normalize_keys(t.right()));
      out.add_scaled(st.bracket(st.normalize_keys(t.left()), lie_bockstein_keys(st, t.right())),
                     f.sign(suspended_parity(t.left())));
      return out;
    }
    default:
      throw InvalidInput("Bockstein on brackets expects a bracket expression: " + t.name());
  }
}

inline LieComb lie_bockstein(const Term& t, Scalar p, int n) {
  LieStraightener st(static_cast<int>(p), n);
  return st.to_terms(lie_bockstein_keys(st, t));
}

/// The derivation b -> a on T(a, b), with a odd.
inline TensorElement tensor_bockstein(const TensorElement& x) {
  const Zp f(x.prime());
  TensorElement out(x.prime());
  for (const auto& [w, c] : x) {
    int odd_prefix = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] == 'b') {
        std::string img = w;
        img[i] = 'a';
        out.add(img, f.mul(c, f.sign(odd_prefix)));
      } else {
        ++odd_prefix;
      }
    }
  }
  return out;
}

inline TensorElement tensor_embedding(const LieComb& c) {
  TensorElement out(c.prime());
  for (const auto& [t, coeff] : c) out.add_scaled(tensor_embedding(t, c.prime()), coeff);
  return out;
}

/// Checks that the bracket-level Bockstein agrees with b -> a on T(a,b) for
/// every Lie generator of the table; returns the first offender, if any.
inline std::optional<std::string> bockstein_embedding_mismatch(const GeneratorTable& table) {
  const Scalar p = table.coeffs.p();
  for (const auto& g : table.generators) {
    if (!g.is_lie()) continue;
    const TensorElement lhs = tensor_embedding(lie_bockstein(g, p, table.n));
    const TensorElement rhs = tensor_bockstein(tensor_embedding(g, p));
    if (!(lhs == rhs)) return g.name();
  }
  return std::nullopt;
}

inline Omega2Model build_omega2_model(const Coefficients& coeffs, int n, int max_degree, int max_weight,
                                      Scalar unit = 1) {
  if (!coeffs.odd()) throw InvalidInput("the double-loop staged model needs odd p; use the mod2 module for p = 2");
  const Scalar p = coeffs.p();
  if (unit % p == 0) throw InvalidInput("the unit multiplying imposed differentials must be nonzero mod p");
  Omega2Model out{generator_table(coeffs, n, max_degree, max_weight), {}, coeffs.r()};
  StagedModel& m = out.model;
  m.label = "omega2";
  m.kind = AlgebraKind::Commutative;
  m.p = p;
  m.max_degree = max_degree;
  m.max_weight = max_weight;
  m.top_slope = 2 * n;
  m.top_offset = 1;
  for (const auto& t : out.table.generators) m.generators.push_back({t.name(), t.degree(), t.weight()});

  const int r = coeffs.r();
  Derivation first{1, {}}, rth{r, {}}, next{r + 1, {}};
  Derivation& rpage = r == 1 ? first : rth;
  const Zp f(p);
  for (std::size_t i = 0; i < out.table.generators.size(); ++i) {
    const Term& t = out.table.generators[i];
    const int gi = static_cast<int>(i);
    if (t.shape() == Term::Shape::Q) {
      first.values.emplace(gi, out.chain_of(Term::beta_q(static_cast<int>(p), t.k(), t.arg())));
    } else if (t.is_lie()) {
      Chain img = out.chain_of(lie_bockstein(t, p, n));
      if (!img.is_zero()) rpage.values.emplace(gi, std::move(img));
    }
  }
  for (int k = 1;; ++k) {
    const long long N = ipow(p, k);
    if (N > max_weight || 2 * n * N - 2 > max_degree) break;
    const ClassPair cls = sigma_tau_classes(coeffs, n, k);
    if (cls.tau.size() != 1) throw InvariantViolation("tau_k is not a single basis term");
    const auto& [tau_term, tau_coeff] = *cls.tau.begin();
    // tau = c * g, so d(g) = unit * sigma / c
    const Scalar scale = f.mul(unit % p, f.inv(tau_coeff));
    next.values.emplace(out.table.index_of(tau_term.name()), out.chain_of(cls.sigma).scaled(scale));
  }
  m.schedule.push_back(first);
  if (r > 1) m.schedule.push_back(rth);
  if (!next.values.empty()) m.schedule.push_back(next);
  m.validate();
  return out;
}

/// T(u,v) has both generators in every range, so chains are never truncated;
/// max_degree only bounds what callers intend to query.
inline StagedModel build_tensor_model(const Coefficients& coeffs, int n, int max_degree) {
  if (n <= 1) throw InvalidInput("n must be > 1");
  if (max_degree < 0) throw InvalidInput("max_degree must be >= 0");
  StagedModel m;
  m.label = "tensor";
  m.kind = AlgebraKind::Associative;
  m.p = coeffs.p();
  m.generators = {{"u", 2 * n - 1, 1}, {"v", 2 * n, 1}};
  m.max_degree = INT_MAX / 4;
  m.max_weight = INT_MAX;
  m.top_slope = 2 * n;
  m.top_offset = 0;
  m.schedule.push_back(Derivation{coeffs.r(), {{1, Chain(m.p, Element{0})}}});
  m.validate();
  return m;
}

/// Page model for the loop space of the fibre of the pinch map: an exterior
/// algebra on tau'_k tensor a polynomial algebra on sigma'_k, with
/// tau'_k -> unit * sigma'_k at page r+1.
inline StagedModel build_fibre_page_model(const Coefficients& coeffs, int n, int k_max, int max_degree,
                                          Scalar unit = 1) {
  if (!coeffs.odd()) throw InvalidInput("the fibre page model needs odd p");
  if (n <= 1) throw InvalidInput("n must be > 1");
  if (k_max < 0) throw InvalidInput("k_max must be >= 0");
  const Scalar p = coeffs.p();
  if (unit % p == 0) throw InvalidInput("the unit multiplying imposed differentials must be nonzero mod p");
  StagedModel m;
  m.label = "fibre";
  m.kind = AlgebraKind::Commutative;
  m.p = p;
  m.top_slope = 2 * n;
  m.top_offset = 1;
  m.max_weight = INT_MAX;
  // Generators with k > k_max start in degree 2n p^{k_max+1} - 2.
  const long long next_start = 2LL * n * ipow(p, k_max + 1) - 2;
  if (next_start - 1 < max_degree)
    throw InvalidInput("k_max = " + std::to_string(k_max) + " leaves generators missing below degree " +
                       std::to_string(max_degree));
  m.max_degree = static_cast<int>(next_start - 1);
  struct Raw {
    std::string name;
    int degree, weight, k;
    bool tau;
  };
  std::vector<Raw> raw;
  for (int k = 0; k <= k_max; ++k) {
    const int N = static_cast<int>(ipow(p, k));
    const int deg = 2 * n * N - 1;
    if (deg - 1 > m.max_degree) break;
    if (deg <= m.max_degree) raw.push_back({"tau'_" + std::to_string(k), deg, N, k, true});
    if (k >= 1) raw.push_back({"sigma'_" + std::to_string(k), deg - 1, N, k, false});
  }
  std::stable_sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) { return a.degree < b.degree; });
  for (const auto& g : raw) m.generators.push_back({g.name, g.degree, g.weight});
  Derivation d{coeffs.r() + 1, {}};
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw[i].tau || raw[i].k == 0) continue;
    for (std::size_t j = 0; j < raw.size(); ++j)
      if (!raw[j].tau && raw[j].k == raw[i].k)
        d.values.emplace(static_cast<int>(i), Chain(p, Element{static_cast<int>(j)}, unit));
  }
  m.schedule.push_back(d);
  m.validate();
  return m;
}

/// Generators of the presentation claimed for page r+1 of the fibre model.
inline std::vector<Generator> fibre_claimed_generators(const Coefficients& coeffs, int n, int max_degree) {
  std::vector<Generator> out;
  for (int k = 0;; ++k) {
    const int N = static_cast<int>(ipow(coeffs.p(), k));
    if (2 * n * N - 2 > max_degree) break;
    out.push_back({"tau'_" + std::to_string(k), 2 * n * N - 1, N});
    if (k >= 1) out.push_back({"sigma'_" + std::to_string(k), 2 * n * N - 2, N});
  }
  return out;
}

}  // namespace loopalg
