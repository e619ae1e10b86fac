#pragma once

// Free graded Lie algebra on the two suspended Moore-space classes, as it sits
// inside the tensor algebra T(a, b) with a = su (odd) and b = sv (even).
//
// Basis convention: Lyndon words on a < b, plus squares [w,w] of odd Lyndon
// words (p odd). A Lyndon word w with standard factorization (x, y) is named
// by the mirrored bracket L[M(y), M(x)], so that a b^m reads as ad(v)^m(u).

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "loopalg/errors.hpp"
#include "loopalg/field.hpp"
#include "loopalg/lincomb.hpp"
#include "loopalg/linalg.hpp"
#include "loopalg/term.hpp"

namespace loopalg {

/// Element of T(a, b) keyed by words over {'a','b'}.
using TensorElement = LinComb<std::string>;

inline int count_a(const std::string& w) { return static_cast<int>(std::count(w.begin(), w.end(), 'a')); }

/// Degree of a word in the single-loop grading: |a| = 2n-1, |b| = 2n.
inline int word_degree(const std::string& w, int n) {
  const int na = count_a(w);
  return na * (2 * n - 1) + (static_cast<int>(w.size()) - na) * 2 * n;
}

inline TensorElement tensor_product(const TensorElement& x, const TensorElement& y) {
  TensorElement out(x.prime());
  const Zp& f = x.field();
  for (const auto& [wx, cx] : x)
    for (const auto& [wy, cy] : y) out.add(wx + wy, f.mul(cx, cy));
  return out;
}

/// Parity of a Lie term in the single-loop (suspended) grading: the number of
/// u leaves mod 2.
inline int suspended_parity(const Term& t) { return (t.degree() + 1) % 2; }

/// Brackets become graded commutators x y - (-1)^{|x||y|} y x.
inline TensorElement tensor_embedding(const Term& t, Scalar p) {
  switch (t.shape()) {
    case Term::Shape::GenU:
      return TensorElement(p, "a");
    case Term::Shape::GenV:
      return TensorElement(p, "b");
    case Term::Shape::Bracket: {
      const Zp f(p);
      auto x = tensor_embedding(t.left(), p);
      auto y = tensor_embedding(t.right(), p);
      auto out = tensor_product(x, y);
      const int s = suspended_parity(t.left()) * suspended_parity(t.right());
      out.add_scaled(tensor_product(y, x), f.neg(f.sign(s)));
      return out;
    }
    default:
      throw InvalidInput("tensor embedding is defined on bracket expressions only: " + t.name());
  }
}

inline bool is_lyndon(const std::string& w) {
  if (w.empty()) return false;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (!(w < w.substr(i) + w.substr(0, i))) return false;
  return true;
}

/// All Lyndon words over a < b of length <= max_len, in Duval order.
inline std::vector<std::string> lyndon_words(std::size_t max_len) {
  std::vector<std::string> out;
  if (max_len == 0) return out;
  std::string w = "a";
  while (!w.empty()) {
    out.push_back(w);
    std::string next;
    while (next.size() < max_len) next += w;
    next.resize(max_len);
    while (!next.empty() && next.back() == 'b') next.pop_back();
    if (!next.empty()) next.back() = 'b';
    w = next;
  }
  return out;
}

/// Standard factorization (x, y) of a Lyndon word of length >= 2: y is the
/// longest proper Lyndon suffix.
inline std::pair<std::string, std::string> standard_factorization(const std::string& w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    auto suffix = w.substr(i);
    if (is_lyndon(suffix)) return {w.substr(0, i), suffix};
  }
  throw InvalidInput("not a Lyndon word of length >= 2: " + w);
}

/// A super-Lyndon basis element: a Lyndon word, or the square [w,w] of one.
struct LieKey {
  std::string word;
  bool square = false;

  int parity() const { return square ? 0 : count_a(word) % 2; }
  friend auto operator<=>(const LieKey&, const LieKey&) = default;
};

struct LieBasis {
  std::vector<Term> elements;
  int max_degree = 0;
};

/// Rewrites bracket expressions into the super-Lyndon basis using graded
/// antisymmetry and the graded Jacobi identity. Signs use the single-loop
/// grading, so the result is a Lie algebra map to T(a, b).
class LieStraightener {
 public:
  LieStraightener(int p, int n) : p_(p), n_(n), f_(static_cast<Scalar>(p)) {
    if (!is_prime(p)) throw InvalidInput("p is not prime");
    if (n <= 1) throw InvalidInput("n must be > 1");
  }

  int prime() const { return p_; }
  int n() const { return n_; }

  using KeyComb = LinComb<LieKey>;

  KeyComb normalize_keys(const Term& expr) {
    switch (expr.shape()) {
      case Term::Shape::GenU:
        return KeyComb(f_.prime(), LieKey{"a", false});
      case Term::Shape::GenV:
        return KeyComb(f_.prime(), LieKey{"b", false});
      case Term::Shape::Bracket:
        return bracket(normalize_keys(expr.left()), normalize_keys(expr.right()));
      default:
        throw InvalidInput("lie_normal_form expects a bracket expression in u, v: " + expr.name());
    }
  }

  KeyComb bracket(const KeyComb& x, const KeyComb& y) {
    KeyComb out(f_.prime());
    for (const auto& [kx, cx] : x)
      for (const auto& [ky, cy] : y) out.add_scaled(bracket_keys(kx, ky), f_.mul(cx, cy));
    return out;
  }

  /// Named basis term for a key, with the sign s such that the standard
  /// bracketing equals s times the named term.
  std::pair<Term, Scalar> named(const LieKey& key) {
    if (auto it = names_.find(key); it != names_.end()) return it->second;
    std::pair<Term, Scalar> out = [&]() -> std::pair<Term, Scalar> {
      if (key.square) {
        auto [t, s] = named(LieKey{key.word, false});
        return {Term::bracket(t, t), f_.mul(s, s)};
      }
      if (key.word == "a") return {Term::u(n_), 1};
      if (key.word == "b") return {Term::v(n_), 1};
      auto [x, y] = standard_factorization(key.word);
      auto [tx, sx] = named(LieKey{x, false});
      auto [ty, sy] = named(LieKey{y, false});
      const int par = (count_a(x) % 2) * (count_a(y) % 2);
      return {Term::bracket(ty, tx), f_.mul(f_.neg(f_.sign(par)), f_.mul(sx, sy))};
    }();
    names_.emplace(key, out);
    return out;
  }

  LinComb<Term> to_terms(const KeyComb& keys) {
    LinComb<Term> out(f_.prime());
    for (const auto& [k, c] : keys) {
      auto [t, s] = named(k);
      out.add(t, f_.mul(c, s));
    }
    return out;
  }

 private:
  const std::string& right_factor(const std::string& w) {
    auto it = right_.find(w);
    if (it == right_.end()) it = right_.emplace(w, standard_factorization(w).second).first;
    return it->second;
  }

  KeyComb bracket_keys(const LieKey& x, const LieKey& y) {
    auto memo_key = std::make_pair(x, y);
    if (auto it = memo_.find(memo_key); it != memo_.end()) return it->second;
    if (!active_.insert(memo_key).second)
      throw InvariantViolation("Lie straightening did not terminate on [" + x.word + "," + y.word + "]");
    KeyComb out = compute(x, y);
    active_.erase(memo_key);
    memo_.emplace(memo_key, out);
    return out;
  }

  // [x,y] = -(-1)^{|x||y|} [y,x]
  KeyComb flipped(const LieKey& x, const LieKey& y) {
    return bracket_keys(y, x).scaled(f_.neg(f_.sign(x.parity() * y.parity())));
  }

  KeyComb compute(const LieKey& x, const LieKey& y) {
    const Scalar P = f_.prime();
    if (x == y) {
      // [x,x] = 2x^2 vanishes for even x and in characteristic 2.
      if (x.square || x.parity() == 0 || p_ == 2) return KeyComb(P);
      return KeyComb(P, LieKey{x.word, true});
    }
    if (x.square) {
      const LieKey w{x.word, false};
      // [w,[w,w]] = 0 for odd w in T(a,b).
      if (y == w) return KeyComb(P);
      // [[w,w],y] = 2 [w,[w,y]] for odd w.
      return bracket(KeyComb(P, w), bracket_keys(w, y)).scaled(2);
    }
    if (y.square) return flipped(x, y);
    if (y.word < x.word) return flipped(x, y);
    // x < y, both Lyndon.
    if (x.word.size() == 1 || !(right_factor(x.word) < y.word))
      return KeyComb(P, LieKey{x.word + y.word, false});
    // x = [x1, x2] with x2 < y:  [[x1,x2],y] = [x1,[x2,y]] - (-1)^{|x1||x2|} [x2,[x1,y]]
    auto [w1, w2] = standard_factorization(x.word);
    const LieKey x1{w1, false}, x2{w2, false};
    KeyComb out = bracket(KeyComb(P, x1), bracket_keys(x2, y));
    out.add_scaled(bracket(KeyComb(P, x2), bracket_keys(x1, y)), f_.neg(f_.sign(x1.parity() * x2.parity())));
    return out;
  }

  int p_;
  int n_;
  Zp f_;
  std::map<std::pair<LieKey, LieKey>, KeyComb> memo_;
  std::set<std::pair<LieKey, LieKey>> active_;
  std::map<std::string, std::string> right_;
  std::map<LieKey, std::pair<Term, Scalar>> names_;
};

inline LinComb<Term> lie_normal_form(const Term& expr, const Coefficients& coeffs, int n) {
  LieStraightener s(coeffs.p(), n);
  return s.to_terms(s.normalize_keys(expr));
}

/// Lie basis terms of double-loop degree <= max_degree, ordered by
/// (degree, weight, name).
inline LieBasis lyndon_basis(const Coefficients& coeffs, int n, int max_degree) {
  if (n <= 1) throw InvalidInput("n must be > 1");
  if (max_degree < 2 * n - 2)
    throw InvalidInput("max_degree " + std::to_string(max_degree) + " is below the bottom generator degree " +
                       std::to_string(2 * n - 2));
  LieStraightener s(coeffs.p(), n);
  // A word of length m has double-loop degree >= m(2n-1) - 1.
  const std::size_t max_len = static_cast<std::size_t>((max_degree + 1) / (2 * n - 1));
  LieBasis out;
  out.max_degree = max_degree;
  for (const auto& w : lyndon_words(max_len)) {
    if (word_degree(w, n) - 1 <= max_degree) out.elements.push_back(s.named(LieKey{w, false}).first);
    if (coeffs.odd() && count_a(w) % 2 == 1 && 2 * word_degree(w, n) - 1 <= max_degree)
      out.elements.push_back(s.named(LieKey{w, true}).first);
  }
  std::sort(out.elements.begin(), out.elements.end(), [](const Term& a, const Term& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    return a.name() < b.name();
  });
  return out;
}

/// Basis-side count of primitives of T(a,b) in single-loop degree d: Lie
/// basis elements plus p^k-th powers of even Lie basis elements.
inline std::map<int, int> restricted_lie_dims(const Coefficients& coeffs, int n, int max_degree) {
  std::map<int, int> dims;
  for (int d = 1; d <= max_degree; ++d) dims[d] = 0;
  if (max_degree < 2 * n - 1) return dims;
  const auto basis = lyndon_basis(coeffs, n, max_degree - 1);
  for (const auto& t : basis.elements) {
    const int d = t.degree() + 1;
    ++dims[d];
    if (d % 2 != 0) continue;
    for (long long pk = coeffs.p(); pk * d <= max_degree; pk *= coeffs.p()) ++dims[static_cast<int>(pk * d)];
  }
  return dims;
}

/// Every bracket expression in u, v of weight 1..max_weight, in a fixed order.
inline std::vector<Term> bracket_expressions(int n, int max_weight) {
  if (max_weight < 1) throw InvalidInput("max_weight must be >= 1");
  if (max_weight > 6) throw InvalidInput("resource guard: bracket expressions limited to weight 6");
  std::vector<std::vector<Term>> by_weight(static_cast<std::size_t>(max_weight) + 1);
  by_weight[1] = {Term::u(n), Term::v(n)};
  for (int w = 2; w <= max_weight; ++w)
    for (int a = 1; a < w; ++a)
      for (const auto& x : by_weight[a])
        for (const auto& y : by_weight[w - a]) by_weight[w].push_back(Term::bracket(x, y));
  std::vector<Term> out;
  for (int w = 1; w <= max_weight; ++w) out.insert(out.end(), by_weight[w].begin(), by_weight[w].end());
  return out;
}

/// All words of single-loop degree d.
inline std::vector<std::string> words_of_degree(int d, int n) {
  std::vector<std::string> out;
  std::string cur;
  auto rec = [&](auto&& self, int rem) -> void {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (char c : {'a', 'b'}) {
      const int deg = c == 'a' ? 2 * n - 1 : 2 * n;
      if (deg > rem) continue;
      cur.push_back(c);
      self(self, rem - deg);
      cur.pop_back();
    }
  };
  rec(rec, d);
  std::sort(out.begin(), out.end());
  return out;
}

/// Dimension of the primitives of T(a,b) over Z/p in each single-loop degree
/// 1..max_degree, as the kernel of the reduced coproduct.
inline std::map<int, int> primitive_dims_oracle(const Coefficients& coeffs, int n, int max_degree,
                                                std::size_t word_bound = 4096) {
  if (n <= 1) throw InvalidInput("n must be > 1");
  const Scalar p = static_cast<Scalar>(coeffs.p());
  const Zp f(p);
  std::map<int, int> dims;
  for (int d = 1; d <= max_degree; ++d) {
    const auto words = words_of_degree(d, n);
    if (words.size() > word_bound)
      throw InvalidInput("resource guard: " + std::to_string(words.size()) + " words in degree " +
                         std::to_string(d) + " exceeds bound " + std::to_string(word_bound));
    std::map<std::pair<std::string, std::string>, std::size_t> target;
    std::vector<std::vector<std::pair<std::size_t, Scalar>>> cols(words.size());
    for (std::size_t c = 0; c < words.size(); ++c) {
      const auto& w = words[c];
      const std::size_t m = w.size();
      if (m > 24) throw InvalidInput("resource guard: word too long for coproduct enumeration");
      for (unsigned long mask = 1; mask + 1 < (1UL << m); ++mask) {
        std::string left, right;
        int swaps = 0;
        int odd_right_so_far = 0;
        for (std::size_t i = 0; i < m; ++i) {
          const bool odd = w[i] == 'a';
          if (mask & (1UL << i)) {
            left += w[i];
            if (odd) swaps += odd_right_so_far;
          } else {
            right += w[i];
            if (odd) ++odd_right_so_far;
          }
        }
        auto key = std::make_pair(left, right);
        auto it = target.find(key);
        if (it == target.end()) it = target.emplace(key, target.size()).first;
        cols[c].emplace_back(it->second, f.sign(swaps));
      }
    }
    Matrix delta(target.size(), words.size(), p);
    for (std::size_t c = 0; c < words.size(); ++c)
      for (auto [r, s] : cols[c]) delta.at(r, c) = f.add(delta.at(r, c), s);
    dims[d] = static_cast<int>(words.size() - delta.rank());
  }
  return dims;
}

}  // namespace loopalg
