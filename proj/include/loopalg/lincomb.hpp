#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "loopalg/field.hpp"

namespace loopalg {

/// Finite linear combination over Z/p. Zero coefficients are never stored.
template <class Key, class Compare = std::less<Key>>
class LinComb {
 public:
  using Map = std::map<Key, Scalar, Compare>;

  explicit LinComb(Scalar p) : field_(p) {}
  LinComb(Scalar p, const Key& key, Scalar coeff = 1) : field_(p) { add(key, coeff); }

  Scalar prime() const { return field_.prime(); }
  const Zp& field() const { return field_; }

  void add(const Key& key, Scalar coeff) {
    coeff = field_.reduce(coeff);
    if (coeff == 0) return;
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(key, coeff);
      return;
    }
    it->second = field_.add(it->second, coeff);
    if (it->second == 0) terms_.erase(it);
  }

  void add_scaled(const LinComb& other, Scalar scale) {
    scale = field_.reduce(scale);
    if (scale == 0) return;
    for (const auto& [k, c] : other.terms_) add(k, field_.mul(c, scale));
  }

  LinComb& operator+=(const LinComb& other) {
    add_scaled(other, 1);
    return *this;
  }

  LinComb scaled(Scalar s) const {
    LinComb out(field_.prime());
    out.add_scaled(*this, s);
    return out;
  }

  Scalar coeff(const Key& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? 0 : it->second;
  }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Map& terms() const { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  friend bool operator==(const LinComb& a, const LinComb& b) {
    return a.prime() == b.prime() && a.terms_ == b.terms_;
  }

  /// "c1*k1 + c2*k2", or "0".
  std::string render(const std::function<std::string(const Key&)>& name) const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += std::to_string(c) + "*" + name(k);
    }
    return out;
  }

 private:
  Zp field_;
  Map terms_;
};

}  // namespace loopalg
