#pragma once

// Staged Bockstein spectral sequences on free (graded-commutative or
// associative) algebras. Page s+1 is the homology of page s under the
// derivation scheduled at page s, computed on explicit representatives:
// each page slice is Z/B for subspaces B <= Z of the chain space, and the
// engine verifies that every scheduled derivation is well defined on Z/B.

#include <algorithm>
#include <climits>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "loopalg/errors.hpp"
#include "loopalg/field.hpp"
#include "loopalg/lincomb.hpp"
#include "loopalg/linalg.hpp"

namespace loopalg {

enum class AlgebraKind { Commutative, Associative };

inline std::string to_string(AlgebraKind k) { return k == AlgebraKind::Commutative ? "commutative" : "associative"; }

struct Generator {
  std::string name;
  int degree = 0;
  int weight = 0;
  bool odd() const { return degree % 2 != 0; }
};

/// Basis element of the algebra: a nondecreasing list of generator indices
/// (commutative) or a word (associative). The empty list is the unit.
using Element = std::vector<int>;
using Chain = LinComb<Element>;

struct Derivation {
  int page = 1;
  std::map<int, Chain> values;  // generator index -> image; absent means zero
};

struct StagedModel {
  std::string label;
  AlgebraKind kind = AlgebraKind::Commutative;
  Scalar p = 3;
  std::vector<Generator> generators;  // sorted by degree
  /// Every generator with degree <= max_degree and weight <= max_weight is present.
  int max_degree = 0;
  int max_weight = INT_MAX;
  /// Weight-w elements live in degrees <= top_slope * w - top_offset.
  int top_slope = 0;
  int top_offset = 0;
  std::vector<Derivation> schedule;  // at most one derivation per page

  const Derivation* derivation_at(int page) const {
    for (const auto& d : schedule)
      if (d.page == page) return &d;
    return nullptr;
  }

  bool exterior(int g) const { return kind == AlgebraKind::Commutative && p != 2 && generators[g].odd(); }

  int degree_of(const Element& e) const {
    int d = 0;
    for (int g : e) d += generators[g].degree;
    return d;
  }
  int weight_of(const Element& e) const {
    int w = 0;
    for (int g : e) w += generators[g].weight;
    return w;
  }

  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (generators[i].name == name) return static_cast<int>(i);
    throw InvalidInput("model has no generator " + name);
  }

  std::string render(const Element& e) const {
    if (e.empty()) return "1";
    std::string out;
    if (kind == AlgebraKind::Associative) {
      for (int g : e) out += (out.empty() ? "" : "*") + generators[g].name;
      return out;
    }
    for (std::size_t i = 0; i < e.size();) {
      std::size_t j = i;
      while (j < e.size() && e[j] == e[i]) ++j;
      out += (out.empty() ? "" : "*") + generators[e[i]].name + "^" + std::to_string(j - i);
      i = j;
    }
    return out;
  }

  std::string render(const Chain& c) const {
    return c.render([this](const Element& e) { return render(e); });
  }

  /// Brings a product of generators to normal form: sorts with Koszul signs in
  /// the commutative case. Returns the sign, or 0 when the product vanishes.
  Scalar normalize(Element& e) const {
    const Zp f(p);
    if (kind == AlgebraKind::Associative) return 1 % p;
    int swaps = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::size_t j = i + 1; j < e.size(); ++j)
        if (e[i] > e[j] && generators[e[i]].odd() && generators[e[j]].odd()) ++swaps;
    std::sort(e.begin(), e.end());
    for (std::size_t i = 1; i < e.size(); ++i)
      if (e[i] == e[i - 1] && exterior(e[i])) return 0;
    return f.sign(swaps);
  }

  /// Extends a derivation from generators by d(xy) = d(x) y + (-1)^{|x|} x d(y).
  Chain apply(const Derivation& d, const Element& e) const {
    const Zp f(p);
    Chain out(p);
    int prefix_degree = 0;
    for (std::size_t t = 0; t < e.size(); ++t) {
      auto it = d.values.find(e[t]);
      if (it != d.values.end()) {
        const Scalar s = f.sign(prefix_degree);
        for (const auto& [mono, c] : it->second) {
          Element prod(e.begin(), e.begin() + static_cast<long>(t));
          prod.insert(prod.end(), mono.begin(), mono.end());
          prod.insert(prod.end(), e.begin() + static_cast<long>(t) + 1, e.end());
          const Scalar sign = normalize(prod);
          if (sign) out.add(prod, f.mul(f.mul(s, sign), c));
        }
      }
      prefix_degree += generators[e[t]].degree;
    }
    return out;
  }

  /// All basis elements of the given degree and weight, sorted by rendering.
  std::vector<Element> basis(int degree, int weight) const {
    std::vector<Element> out;
    Element cur;
    const int G = static_cast<int>(generators.size());
    auto rec = [&](auto&& self, int start, int rem_deg, int rem_wt) -> void {
      if (rem_deg == 0 && rem_wt == 0) {
        out.push_back(cur);
        return;
      }
      for (int g = kind == AlgebraKind::Commutative ? start : 0; g < G; ++g) {
        const auto& gen = generators[g];
        if (gen.degree > rem_deg) break;
        if (gen.weight > rem_wt) continue;
        if (exterior(g) && !cur.empty() && cur.back() == g) continue;
        cur.push_back(g);
        self(self, g, rem_deg - gen.degree, rem_wt - gen.weight);
        cur.pop_back();
      }
    };
    rec(rec, 0, degree, weight);
    std::vector<std::pair<std::string, Element>> keyed;
    for (auto& e : out) keyed.emplace_back(render(e), std::move(e));
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.clear();
    for (auto& [k, e] : keyed) out.push_back(std::move(e));
    return out;
  }

  /// Smallest degree per unit weight among the generators.
  double bottom_slope() const {
    double best = 1e18;
    for (const auto& g : generators) best = std::min(best, static_cast<double>(g.degree) / g.weight);
    return best;
  }

  /// Rejects inhomogeneous derivation values and malformed generators.
  void validate() const {
    if (p < 2 || !is_prime(p)) throw InvalidInput("model prime is not prime");
    for (std::size_t i = 1; i < generators.size(); ++i)
      if (generators[i].degree < generators[i - 1].degree)
        throw InvalidInput("model generators must be sorted by degree");
    for (const auto& g : generators)
      if (g.degree <= 0 || g.weight <= 0) throw InvalidInput("generator " + g.name + " needs positive degree and weight");
    std::vector<int> pages;
    for (const auto& d : schedule) {
      if (d.page < 1) throw InvalidInput("schedule pages start at 1");
      pages.push_back(d.page);
      for (const auto& [g, val] : d.values) {
        if (g < 0 || g >= static_cast<int>(generators.size())) throw InvalidInput("derivation on unknown generator");
        const auto& gen = generators[g];
        for (const auto& [e, c] : val) {
          for (int x : e)
            if (x < 0 || x >= static_cast<int>(generators.size()))
              throw InvalidInput("derivation value uses an unknown generator");
          if (degree_of(e) != gen.degree - 1 || weight_of(e) != gen.weight)
            throw InvariantViolation("derivation at page " + std::to_string(d.page) + " is not homogeneous on " +
                                     gen.name + ": value " + render(e) + " has degree " +
                                     std::to_string(degree_of(e)) + ", weight " + std::to_string(weight_of(e)));
        }
      }
    }
    std::sort(pages.begin(), pages.end());
    if (std::adjacent_find(pages.begin(), pages.end()) != pages.end())
      throw InvalidInput("at most one derivation per page");
  }
};

inline nlohmann::ordered_json model_to_json(const StagedModel& m) {
  nlohmann::ordered_json out;
  out["kind"] = to_string(m.kind);
  auto gens = nlohmann::ordered_json::array();
  for (const auto& g : m.generators)
    gens.push_back({{"term", g.name}, {"degree", g.degree}, {"weight", g.weight}, {"parity", g.odd() ? "odd" : "even"}});
  out["generators"] = gens;
  auto sched = nlohmann::ordered_json::array();
  for (const auto& d : m.schedule)
    for (const auto& [g, val] : d.values) {
      auto terms = nlohmann::ordered_json::array();
      for (const auto& [e, c] : val) terms.push_back({{"monomial", m.render(e)}, {"coeff", c}});
      sched.push_back({{"page", d.page}, {"on", m.generators[g].name}, {"value", terms}});
    }
  out["schedule"] = sched;
  return out;
}

struct PageSlice {
  int degree = 0;
  int weight = 0;
  std::size_t dim = 0;
  std::vector<Chain> representatives;
  /// Induced page differential to the (degree-1, weight) slice, in
  /// representative coordinates; empty when no derivation is scheduled.
  std::optional<Matrix> differential;
  std::optional<int> killed_by;
};

struct Page {
  int s = 1;
  std::vector<PageSlice> slices;  // sorted by (degree, weight)

  const PageSlice* find(int degree, int weight) const {
    for (const auto& sl : slices)
      if (sl.degree == degree && sl.weight == weight) return &sl;
    return nullptr;
  }
  std::size_t dim_at(int degree) const {
    std::size_t total = 0;
    for (const auto& sl : slices)
      if (sl.degree == degree) total += sl.dim;
    return total;
  }
};

inline nlohmann::ordered_json page_to_json(const StagedModel& m, const Page& page) {
  nlohmann::ordered_json out;
  out["page"] = page.s;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& sl : page.slices) {
    nlohmann::ordered_json j;
    j["degree"] = sl.degree;
    j["weight"] = sl.weight;
    j["dim"] = sl.dim;
    auto basis = nlohmann::ordered_json::array();
    for (const auto& r : sl.representatives) basis.push_back(m.render(r));
    j["basis"] = basis;
    if (sl.killed_by) j["killed_by"] = *sl.killed_by;
    arr.push_back(j);
  }
  out["slices"] = arr;
  return out;
}

struct SurvivorReport {
  Chain cls;
  int page_reached = 0;
  bool nonzero = false;
  std::optional<std::string> obstruction;
};

struct AcyclicityReport {
  bool acyclic = false;
  std::vector<std::pair<int, int>> nonzero_slices;  // (degree, weight) of reduced slices that survive
  Page page;
};

struct PresentationReport {
  bool matches = false;
  std::map<int, std::size_t> computed;
  std::map<int, std::size_t> claimed;
};

struct EngineOptions {
  unsigned threads = 1;
};

/// Dimensions of the free algebra on the given generators, degrees 0..max_degree.
inline std::vector<std::size_t> free_algebra_dims(const std::vector<Generator>& gens, AlgebraKind kind, Scalar p,
                                                  int max_degree) {
  std::vector<std::size_t> dims(static_cast<std::size_t>(max_degree) + 1, 0);
  dims[0] = 1;
  if (kind == AlgebraKind::Associative) {
    for (int d = 1; d <= max_degree; ++d)
      for (const auto& g : gens)
        if (g.degree <= d) dims[d] += dims[d - g.degree];
    return dims;
  }
  for (const auto& g : gens) {
    if (g.degree > max_degree) continue;
    if (p != 2 && g.odd()) {
      for (int i = max_degree; i >= g.degree; --i) dims[i] += dims[i - g.degree];
    } else {
      for (int i = g.degree; i <= max_degree; ++i) dims[i] += dims[i - g.degree];
    }
  }
  return dims;
}

class BssEngine {
 public:
  explicit BssEngine(StagedModel model, EngineOptions opts = {}) : model_(std::move(model)), opts_(opts) {
    model_.validate();
  }

  const StagedModel& model() const { return model_; }

  /// Page s restricted to degrees [lo, hi] (and one weight, if given).
  Page compute_page(int s, int lo, int hi, std::optional<int> weight = std::nullopt) {
    if (s < 1) throw InvalidInput("pages start at 1");
    if (lo > hi) throw InvalidInput("empty degree range");
    const auto weights = weights_for(lo, hi, weight);
    prepare(weights, s);
    Page page;
    page.s = s;
    for (int w : weights) {
      Tower& t = tower(w);
      for (int d = std::max(lo, 0); d <= hi; ++d) {
        if (d > t.hi || t.basis[d].empty()) continue;
        if (d > t.valid_hi[s - 1])
          throw RangeIncomplete("slice (degree " + std::to_string(d) + ", weight " + std::to_string(w) +
                                ") at page " + std::to_string(s) + " needs chains beyond degree " +
                                std::to_string(model_.max_degree));
        page.slices.push_back(make_slice(t, s, d));
      }
    }
    std::sort(page.slices.begin(), page.slices.end(), [](const PageSlice& a, const PageSlice& b) {
      return std::tie(a.degree, a.weight) < std::tie(b.degree, b.weight);
    });
    return page;
  }

  /// Follows a homogeneous class through the pages up to target_page.
  SurvivorReport survivor_check(const Chain& cls, int target_page) {
    if (cls.is_zero()) throw InvalidInput("survivor_check needs a nonzero class");
    const Element& first = cls.begin()->first;
    const int d = model_.degree_of(first), w = model_.weight_of(first);
    for (const auto& [e, c] : cls)
      if (model_.degree_of(e) != d || model_.weight_of(e) != w)
        throw InvalidInput("survivor_check needs a class homogeneous in (degree, weight)");
    if (w > model_.max_weight) throw RangeIncomplete("weight beyond the model cutoff");
    prepare({w}, target_page);
    Tower& t = tower(w);
    if (d > t.valid_hi[target_page - 1])
      throw RangeIncomplete("degree " + std::to_string(d) + " at page " + std::to_string(target_page));
    const Vec v = to_vec(t, d, cls);
    SurvivorReport rep{cls, 0, false, std::nullopt};
    for (int s = 1; s <= target_page; ++s) {
      const auto& st = t.pages[s - 1];
      if (!st.Z.at(d).contains(v)) {
        rep.obstruction = "not a cycle of the page-" + std::to_string(s - 1) + " differential";
        break;
      }
      if (st.B.at(d).contains(v)) {
        rep.obstruction = "boundary of the page-" + std::to_string(s - 1) + " differential";
        break;
      }
      rep.page_reached = s;
    }
    rep.nonzero = rep.page_reached == target_page;
    return rep;
  }

  /// Whether page s+1 has no reduced classes in degrees [lo, hi].
  AcyclicityReport check_acyclic(int s, int lo, int hi) {
    AcyclicityReport rep;
    rep.page = compute_page(s + 1, lo, hi);
    for (const auto& sl : rep.page.slices)
      if (sl.dim > 0 && !(sl.degree == 0 && sl.weight == 0)) rep.nonzero_slices.emplace_back(sl.degree, sl.weight);
    rep.acyclic = rep.nonzero_slices.empty();
    return rep;
  }

  /// Compares page-s dimensions, degree by degree, with the free algebra on
  /// the claimed generators.
  PresentationReport verify_presented_page(int s, const std::vector<Generator>& claimed, AlgebraKind claimed_kind,
                                           int lo, int hi) {
    const Page page = compute_page(s, std::max(lo, 0), hi);
    const auto free_dims = free_algebra_dims(claimed, claimed_kind, model_.p, hi);
    PresentationReport rep;
    rep.matches = true;
    for (int d = std::max(lo, 0); d <= hi; ++d) {
      rep.computed[d] = page.dim_at(d);
      rep.claimed[d] = free_dims[d];
      if (rep.computed[d] != rep.claimed[d]) rep.matches = false;
    }
    return rep;
  }

  /// Dimension of one slice at page s.
  std::size_t slice_dim(int s, int degree, int weight) {
    auto page = compute_page(s, degree, degree, weight);
    auto* sl = page.find(degree, weight);
    return sl ? sl->dim : 0;
  }

  /// Chain-level matrix of the page-s derivation from degree d to d-1 at weight w.
  Matrix derivation_matrix(int s, int d, int w) {
    prepare({w}, 1);
    Tower& t = tower(w);
    return build_derivation(t, s, d);
  }

  const std::vector<Element>& chain_basis(int d, int w) {
    prepare({w}, 1);
    Tower& t = tower(w);
    static const std::vector<Element> empty;
    if (d < 0 || d > t.hi) return empty;
    return t.basis[d];
  }

 private:
  struct PageState {
    std::map<int, Subspace> Z;
    std::map<int, Subspace> B;
  };

  struct Tower {
    int weight = 0;
    int hi = -1;  // chain spaces computed for degrees 0..hi
    std::vector<std::vector<Element>> basis;
    std::vector<std::map<Element, std::size_t>> index;
    std::vector<PageState> pages;  // pages[s-1]
    std::vector<int> valid_hi;     // largest trustworthy degree per page
    std::map<std::pair<int, int>, Matrix> derivations;  // (page, degree)
  };

  std::vector<int> weights_for(int lo, int hi, std::optional<int> weight) const {
    (void)lo;
    if (weight) {
      if (*weight > model_.max_weight)
        throw RangeIncomplete("weight " + std::to_string(*weight) + " exceeds the model cutoff " +
                              std::to_string(model_.max_weight));
      return {*weight};
    }
    std::vector<int> out;
    if (lo <= 0) out.push_back(0);
    const double slope = model_.bottom_slope();
    for (int w = 1; w * slope <= hi + 1e-9; ++w) {
      if (w > model_.max_weight)
        throw RangeIncomplete("degree " + std::to_string(hi) + " admits weight " + std::to_string(w) +
                              " beyond the model cutoff " + std::to_string(model_.max_weight));
      out.push_back(w);
    }
    return out;
  }

  Tower& tower(int w) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = towers_.find(w);
    if (it == towers_.end()) it = towers_.emplace(w, std::make_unique<Tower>(init_tower(w))).first;
    return *it->second;
  }

  void prepare(const std::vector<int>& weights, int s) {
    std::vector<Tower*> ts;
    for (int w : weights) ts.push_back(&tower(w));
    const unsigned threads = std::max(1u, opts_.threads);
    if (threads == 1 || ts.size() < 2) {
      for (auto* t : ts) extend(*t, s);
      return;
    }
    for (std::size_t i = 0; i < ts.size(); i += threads) {
      std::vector<std::future<void>> futs;
      for (std::size_t j = i; j < std::min(ts.size(), i + threads); ++j)
        futs.push_back(std::async(std::launch::async, [this, t = ts[j], s] { extend(*t, s); }));
      for (auto& f : futs) f.get();
    }
  }

  Tower init_tower(int w) const {
    Tower t;
    t.weight = w;
    const long long top = static_cast<long long>(model_.top_slope) * w - model_.top_offset;
    const bool complete = w <= model_.max_weight && top <= model_.max_degree;
    t.hi = w == 0 ? 0 : static_cast<int>(std::min<long long>(top, model_.max_degree));
    t.basis.resize(static_cast<std::size_t>(t.hi) + 1);
    t.index.resize(static_cast<std::size_t>(t.hi) + 1);
    for (int d = 0; d <= t.hi; ++d) {
      t.basis[d] = model_.basis(d, w);
      for (std::size_t i = 0; i < t.basis[d].size(); ++i) t.index[d].emplace(t.basis[d][i], i);
    }
    PageState first;
    for (int d = 0; d <= t.hi; ++d) {
      Subspace Z(t.basis[d].size(), model_.p);
      for (std::size_t i = 0; i < t.basis[d].size(); ++i) {
        Vec e(t.basis[d].size(), 0);
        e[i] = 1 % model_.p;
        Z.insert(std::move(e));
      }
      first.Z.emplace(d, std::move(Z));
      first.B.emplace(d, Subspace(t.basis[d].size(), model_.p));
    }
    t.pages.push_back(std::move(first));
    t.valid_hi.push_back(complete || w == 0 ? INT_MAX : model_.max_degree);
    return t;
  }

  std::size_t dim_c(const Tower& t, int d) const {
    return (d < 0 || d > t.hi) ? 0 : t.basis[d].size();
  }

  Vec to_vec(const Tower& t, int d, const Chain& c) const {
    Vec v(dim_c(t, d), 0);
    for (const auto& [e, coeff] : c) {
      auto it = t.index[d].find(e);
      if (it == t.index[d].end())
        throw InvalidInput("element " + model_.render(e) + " is not in the chain basis of degree " +
                           std::to_string(d));
      v[it->second] = coeff;
    }
    return v;
  }

  Chain to_chain(const Tower& t, int d, const Vec& v) const {
    Chain c(model_.p);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i]) c.add(t.basis[d][i], v[i]);
    return c;
  }

  Matrix build_derivation(Tower& t, int s, int d) const {
    Matrix m(dim_c(t, d - 1), dim_c(t, d), model_.p);
    const Derivation* der = model_.derivation_at(s);
    if (!der || d < 1 || d > t.hi) return m;
    for (std::size_t j = 0; j < t.basis[d].size(); ++j) {
      const Chain img = model_.apply(*der, t.basis[d][j]);
      for (const auto& [e, c] : img) {
        auto it = t.index[d - 1].find(e);
        if (it == t.index[d - 1].end())
          throw InvariantViolation("derivation image " + model_.render(e) + " outside the chain basis");
        m.at(it->second, j) = c;
      }
    }
    return m;
  }

  const Matrix& derivation(Tower& t, int s, int d) const {
    auto key = std::make_pair(s, d);
    auto it = t.derivations.find(key);
    if (it == t.derivations.end()) it = t.derivations.emplace(key, build_derivation(t, s, d)).first;
    return it->second;
  }

  void extend(Tower& t, int target) const {
    while (static_cast<int>(t.pages.size()) < target) {
      const int s = static_cast<int>(t.pages.size());
      const PageState& cur = t.pages.back();
      const int valid = t.valid_hi.back();
      const Derivation* der = model_.derivation_at(s);
      bool nonzero = false;
      if (der) {
        for (int d = 1; d <= t.hi; ++d)
          if (!derivation(t, s, d).is_zero()) nonzero = true;
      }
      if (!nonzero) {
        t.pages.push_back(cur);
        t.valid_hi.push_back(valid);
        continue;
      }
      for (int d = 2; d <= t.hi; ++d) {
        if (d > valid) break;
        if (!(derivation(t, s, d - 1) * derivation(t, s, d)).is_zero())
          throw InvariantViolation("d^2 != 0 for the page-" + std::to_string(s) + " derivation at degree " +
                                   std::to_string(d) + ", weight " + std::to_string(t.weight));
      }
      PageState next;
      for (int d = 0; d <= t.hi; ++d) {
        const Subspace& Z = cur.Z.at(d);
        const Subspace& Bprev = d >= 1 ? cur.B.at(d - 1) : Subspace(0, model_.p);
        const Subspace& Zprev = d >= 1 ? cur.Z.at(d - 1) : Subspace(0, model_.p);
        const Matrix& D = derivation(t, s, d);
        const bool checked = d <= valid;
        if (d >= 1 && checked) {
          for (const auto& z : Z.basis())
            if (!Zprev.contains(D.apply(z)))
              throw InvariantViolation("page-" + std::to_string(s) + " derivation is ill-defined: it does not map "
                                       "cycles to cycles at degree " + std::to_string(d) + ", weight " +
                                       std::to_string(t.weight));
          for (const auto& b : cur.B.at(d).basis())
            if (!Bprev.contains(D.apply(b)))
              throw InvariantViolation("page-" + std::to_string(s) + " derivation is ill-defined: it does not map "
                                       "boundaries to boundaries at degree " + std::to_string(d) + ", weight " +
                                       std::to_string(t.weight));
        }
        // Z' = { z in Z : D z in B_{d-1} }
        Subspace Znext(dim_c(t, d), model_.p);
        if (d == 0) {
          Znext = Z;
        } else {
          const auto& zb = Z.basis();
          Matrix residual(dim_c(t, d - 1), zb.size(), model_.p);
          for (std::size_t i = 0; i < zb.size(); ++i) residual.set_column(i, Bprev.reduce(D.apply(zb[i])));
          for (const auto& c : residual.kernel()) {
            Vec z(dim_c(t, d), 0);
            for (std::size_t i = 0; i < zb.size(); ++i) {
              if (!c[i]) continue;
              for (std::size_t k = 0; k < z.size(); ++k)
                z[k] = (z[k] + static_cast<std::uint64_t>(c[i]) * zb[i][k]) % model_.p;
            }
            Znext.insert(std::move(z));
          }
        }
        // B' = B + D(Z_{d+1})
        Subspace Bnext = cur.B.at(d);
        if (d + 1 <= t.hi) {
          const Matrix& Dup = derivation(t, s, d + 1);
          for (const auto& z : cur.Z.at(d + 1).basis()) Bnext.insert(Dup.apply(z));
        }
        next.Z.emplace(d, std::move(Znext));
        next.B.emplace(d, std::move(Bnext));
      }
      t.pages.push_back(std::move(next));
      t.valid_hi.push_back(valid == INT_MAX ? INT_MAX : valid - 1);
    }
  }

  /// Complement of B inside Z, taken from Z's echelon basis.
  std::vector<Vec> representatives(const Tower& t, int s, int d) const {
    const auto& st = t.pages[s - 1];
    Subspace span = st.B.at(d);
    std::vector<Vec> reps;
    for (const auto& z : st.Z.at(d).basis())
      if (span.insert(z)) reps.push_back(z);
    return reps;
  }

  PageSlice make_slice(Tower& t, int s, int d) {
    PageSlice sl;
    sl.degree = d;
    sl.weight = t.weight;
    const auto reps = representatives(t, s, d);
    sl.dim = reps.size();
    for (const auto& r : reps) sl.representatives.push_back(to_chain(t, d, r));
    if (model_.derivation_at(s) && d >= 1) {
      const auto lower = representatives(t, s, d - 1);
      const Subspace& Bl = t.pages[s - 1].B.at(d - 1);
      const Matrix& D = derivation(t, s, d);
      Matrix diff(lower.size(), reps.size(), model_.p);
      // Solve D r = sum c_i lower_i  (mod B_{d-1}) via an echelon form of [lower | B].
      const std::size_t N = dim_c(t, d - 1);
      for (std::size_t j = 0; j < reps.size(); ++j) {
        Matrix aug(N, lower.size() + Bl.dim() + 1, model_.p);
        for (std::size_t i = 0; i < lower.size(); ++i) aug.set_column(i, lower[i]);
        for (std::size_t i = 0; i < Bl.dim(); ++i) aug.set_column(lower.size() + i, Bl.basis()[i]);
        aug.set_column(aug.cols() - 1, D.apply(reps[j]));
        const auto piv = aug.rref();
        if (!piv.empty() && piv.back() == aug.cols() - 1)
          throw InvariantViolation("page differential leaves the cycle space");
        for (std::size_t r = 0; r < piv.size(); ++r)
          if (piv[r] < lower.size()) diff.at(piv[r], j) = aug.at(r, aug.cols() - 1);
      }
      sl.differential = std::move(diff);
    }
    if (sl.dim == 0 && !t.basis[d].empty()) {
      for (int q = 1; q <= s; ++q) {
        const auto& st = t.pages[q - 1];
        if (st.Z.at(d).dim() == st.B.at(d).dim()) {
          sl.killed_by = q - 1;
          break;
        }
      }
    }
    return sl;
  }

  StagedModel model_;
  EngineOptions opts_;
  std::mutex mu_;
  std::map<int, std::unique_ptr<Tower>> towers_;
};

}  // namespace loopalg
