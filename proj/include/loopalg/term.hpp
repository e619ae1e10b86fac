#pragma once

#include <memory>
#include <string>

#include "loopalg/errors.hpp"
#include "loopalg/field.hpp"

namespace loopalg {

/// A named homology generator of the double loop space: u, v, Browder
/// brackets L[x,y], Dyer-Lashof classes Q1^k[x] and their first Bocksteins
/// bQ1^k[x]. Degrees are in the double-loop grading. Immutable and cheap to
/// copy; equality and ordering go through the rendered name.
class Term {
 public:
  enum class Shape { GenU, GenV, Bracket, Q, BetaQ };

  static Term u(int n) {
    check_n(n);
    return Term(std::make_shared<Node>(Node{Shape::GenU, 0, nullptr, nullptr, 2 * n - 2, 1, "u"}));
  }
  static Term v(int n) {
    check_n(n);
    return Term(std::make_shared<Node>(Node{Shape::GenV, 0, nullptr, nullptr, 2 * n - 1, 1, "v"}));
  }
  static Term bracket(const Term& x, const Term& y) {
    if (!x.is_lie() || !y.is_lie()) throw InvalidInput("Browder brackets take bracket expressions in u, v");
    return Term(std::make_shared<Node>(Node{Shape::Bracket, 0, x.node_, y.node_,
                                            x.degree() + y.degree() + 1, x.weight() + y.weight(),
                                            "L[" + x.name() + "," + y.name() + "]"}));
  }
  /// Q_1^k applied to x. For odd p the argument must be an odd-degree Lie term.
  static Term q(int p, int k, const Term& x) { return dyer_lashof(Shape::Q, p, k, x); }
  static Term beta_q(int p, int k, const Term& x) { return dyer_lashof(Shape::BetaQ, p, k, x); }

  Shape shape() const { return node_->shape; }
  int degree() const { return node_->degree; }
  int weight() const { return node_->weight; }
  bool odd() const { return node_->degree % 2 != 0; }
  int k() const { return node_->k; }
  const std::string& name() const { return node_->name; }

  /// Built only from u, v and brackets.
  bool is_lie() const { return shape() == Shape::GenU || shape() == Shape::GenV || shape() == Shape::Bracket; }
  bool is_letter() const { return shape() == Shape::GenU || shape() == Shape::GenV; }

  Term left() const { return child(node_->left); }
  Term right() const { return child(node_->right); }
  /// Argument of Q / BetaQ.
  Term arg() const { return child(node_->left); }

  friend bool operator==(const Term& a, const Term& b) { return a.name() == b.name(); }
  friend bool operator<(const Term& a, const Term& b) { return a.name() < b.name(); }

 private:
  struct Node {
    Shape shape;
    int k;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    int degree;
    int weight;
    std::string name;
  };

  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Term child(const std::shared_ptr<const Node>& n) {
    if (!n) throw InvalidInput("term has no such child");
    return Term(n);
  }

  static void check_n(int n) {
    if (n <= 1) throw InvalidInput("n must be > 1");
  }

  static Term dyer_lashof(Shape shape, int p, int k, const Term& x) {
    if (k < 1) throw InvalidInput("Dyer-Lashof exponent k must be >= 1");
    if (!x.is_lie()) throw InvalidInput("Dyer-Lashof operations apply to Lie-basis terms");
    if (p != 2 && !x.odd()) throw InvalidInput("Q1^k needs an odd-degree argument for odd p: " + x.name());
    const long long pk = ipow(p, k);
    const int deg = static_cast<int>(pk * (x.degree() + 1) - 1) - (shape == Shape::BetaQ ? 1 : 0);
    const int wt = static_cast<int>(pk * x.weight());
    const std::string prefix = shape == Shape::BetaQ ? "bQ1^" : "Q1^";
    return Term(std::make_shared<Node>(
        Node{shape, k, x.node_, nullptr, deg, wt, prefix + std::to_string(k) + "[" + x.name() + "]"}));
  }

  std::shared_ptr<const Node> node_;
};

/// ad(x)^m (y) = [x,[x,...,[x,y]]].
inline Term ad_power(const Term& x, int m, const Term& y) {
  Term out = y;
  for (int i = 0; i < m; ++i) out = Term::bracket(x, out);
  return out;
}

}  // namespace loopalg
