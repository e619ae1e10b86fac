#include <catch_amalgamated.hpp>

#include <random>

#include "loopalg/lie.hpp"
#include "loopalg/models.hpp"

using namespace loopalg;

namespace {

int mobius(int n) {
  int result = 1;
  for (int q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    n /= q;
    if (n % q == 0) return 0;
    result = -result;
  }
  return n > 1 ? -result : result;
}

// Number of binary Lyndon words of length m.
long long necklace_count(int m) {
  long long total = 0;
  for (int d = 1; d <= m; ++d)
    if (m % d == 0) total += mobius(d) * (1LL << (m / d));
  return total / m;
}

std::set<std::string> basis_names(const Coefficients& c, int n, int max_degree) {
  std::set<std::string> out;
  for (const auto& t : lyndon_basis(c, n, max_degree).elements) out.insert(t.name());
  return out;
}

}  // namespace

TEST_CASE("Lyndon word counts match the necklace formula", "[lie][oracle]") {
  const auto words = lyndon_words(12);
  for (int m = 1; m <= 12; ++m) {
    long long count = 0;
    for (const auto& w : words) count += static_cast<int>(w.size()) == m;
    CHECK(count == necklace_count(m));
  }
  for (const auto& w : words) CHECK(is_lyndon(w));
}

TEST_CASE("Lie basis at p = 3, n = 2 through degree 12", "[lie]") {
  const auto basis = lyndon_basis(Coefficients(3, 1), 2, 12);
  std::vector<std::string> names;
  for (const auto& t : basis.elements) names.push_back(t.name());
  CHECK(names == std::vector<std::string>{"u", "v", "L[u,u]", "L[v,u]", "L[L[v,u],u]", "L[v,L[v,u]]",
                                          "L[L[L[v,u],u],u]"});
  CHECK_THROWS_AS(lyndon_basis(Coefficients(3, 1), 1, 12), InvalidInput);
  CHECK_THROWS_AS(lyndon_basis(Coefficients(3, 1), 2, 1), InvalidInput);
}

TEST_CASE("squares of odd elements appear only for odd p", "[lie]") {
  CHECK(basis_names(Coefficients(3, 1), 2, 6).count("L[u,u]") == 1);
  CHECK(basis_names(Coefficients(2, 1), 2, 6).count("L[u,u]") == 0);
}

TEST_CASE("straightening preserves the tensor embedding", "[lie][oracle][property]") {
  for (Scalar p : {3u, 5u}) {
    const Coefficients c(p, 1);
    for (int n : {2, 3}) {
      const auto names = basis_names(c, n, 8 * n);
      for (const auto& e : bracket_expressions(n, 4)) {
        const LieComb nf = lie_normal_form(e, c, n);
        CHECK(tensor_embedding(e, p) == tensor_embedding(nf));
        for (const auto& [t, coeff] : nf) {
          CHECK(names.count(t.name()) == 1);
          CHECK(t.degree() == e.degree());
          CHECK(t.weight() == e.weight());
        }
      }
    }
  }
}

TEST_CASE("normal form is idempotent", "[lie][property]") {
  const Coefficients c(5, 1);
  for (const auto& e : bracket_expressions(2, 4)) {
    const LieComb nf = lie_normal_form(e, c, 2);
    LieComb again(5);
    for (const auto& [t, coeff] : nf) again.add_scaled(lie_normal_form(t, c, 2), coeff);
    CHECK(again == nf);
  }
}

TEST_CASE("graded antisymmetry and Jacobi hold after straightening", "[lie][property]") {
  const Coefficients c(3, 1);
  const Zp f(3);
  const auto exprs = bracket_expressions(2, 2);
  LieStraightener st(3, 2);
  for (const auto& x : exprs)
    for (const auto& y : exprs) {
      const auto xy = st.normalize_keys(Term::bracket(x, y));
      const auto yx = st.normalize_keys(Term::bracket(y, x));
      const int s = suspended_parity(x) * suspended_parity(y);
      CHECK(xy == yx.scaled(f.neg(f.sign(s))));
    }
  // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
  for (const auto& x : exprs)
    for (const auto& y : exprs)
      for (const auto& z : exprs) {
        const auto lhs = st.normalize_keys(Term::bracket(x, Term::bracket(y, z)));
        auto rhs = st.normalize_keys(Term::bracket(Term::bracket(x, y), z));
        rhs.add_scaled(st.normalize_keys(Term::bracket(y, Term::bracket(x, z))),
                       f.sign(suspended_parity(x) * suspended_parity(y)));
        CHECK(lhs == rhs);
      }
}

TEST_CASE("primitives of T(a,b) match Lie basis plus restricted powers", "[lie][oracle]") {
  for (int p : {3, 5}) {
    const Coefficients c(p, 1);
    CHECK(primitive_dims_oracle(c, 2, 16) == restricted_lie_dims(c, 2, 16));
  }
  CHECK(primitive_dims_oracle(Coefficients(3, 1), 3, 14) == restricted_lie_dims(Coefficients(3, 1), 3, 14));
}

TEST_CASE("primitive oracle enforces its resource guard", "[lie]") {
  CHECK_THROWS_AS(primitive_dims_oracle(Coefficients(3, 1), 2, 40, 16), InvalidInput);
}

TEST_CASE("tensor embedding of a bracket is a graded commutator", "[lie]") {
  const Term u = Term::u(2), v = Term::v(2);
  const auto e = tensor_embedding(Term::bracket(u, u), 3);
  CHECK(e.coeff("aa") == 2);
  const auto f = tensor_embedding(Term::bracket(v, u), 3);
  CHECK(f.coeff("ba") == 1);
  CHECK(f.coeff("ab") == 2);
  CHECK_THROWS_AS(tensor_embedding(Term::q(3, 1, v), 3), InvalidInput);
}

TEST_CASE("term degrees and weights", "[lie]") {
  const Term u = Term::u(2), v = Term::v(2);
  const Term tau = ad_power(v, 2, u);
  CHECK(tau.name() == "L[v,L[v,u]]");
  CHECK(tau.degree() == 10);
  CHECK(tau.weight() == 3);
  const Term q = Term::q(3, 1, v);
  CHECK(q.degree() == 11);
  CHECK(Term::beta_q(3, 1, v).degree() == 10);
  CHECK(q.weight() == 3);
  CHECK_THROWS_AS(Term::q(3, 1, u), InvalidInput);
  CHECK_THROWS_AS(Term::q(3, 0, v), InvalidInput);
  CHECK_THROWS_AS(Term::bracket(q, u), InvalidInput);
}
