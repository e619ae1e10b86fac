#include <catch_amalgamated.hpp>

#include "loopalg/mod2.hpp"

using namespace loopalg;

namespace {

using Table = std::vector<std::pair<std::string, std::string>>;

// Values of the nine operations, written out by hand for r = 1 and r > 1.
Table expected_values(int r) {
  if (r == 1)
    return {{"Sq1 Q1v", "v^2 + lambda(u,v)"}, {"Sq2 Q1v", "Q1u"},       {"Sq2 v^2", "u^2"},
            {"Sq1 uv", "u^2"},                {"Sq1 lambda(u,v)", "0"}, {"Sq2 lambda(u,v)", "0"},
            {"beta(1) Q1v", "v^2 + lambda(u,v)"}, {"beta(1) uv", "u^2"}, {"beta(2) lambda(u,v)", "Q1u"}};
  return {{"Sq1 Q1v", "v^2"},
          {"Sq2 Q1v", "0"},
          {"Sq2 v^2", "0"},
          {"Sq1 uv", "0"},
          {"Sq1 lambda(u,v)", "0"},
          {"Sq2 lambda(u,v)", "0"},
          {"beta(1) Q1v", "v^2"},
          {"beta(" + std::to_string(r) + ") uv", "u^2"},
          {"beta(" + std::to_string(r + 1) + ") lambda(u,v)", "Q1u"}};
}

}  // namespace

TEST_CASE("the nine operation values", "[mod2]") {
  for (int r : {1, 2, 3})
    for (int n : {2, 3}) {
      const auto m = build_d2_module(r, n);
      CHECK(d2_value_table(m) == expected_values(r));
    }
  CHECK_THROWS_AS(build_d2_module(0, 2), InvalidInput);
  CHECK_THROWS_AS(build_d2_module(1, 1), InvalidInput);
}

TEST_CASE("consistency invariants hold", "[mod2]") {
  for (int r : {1, 2, 3})
    for (int n : {2, 3})
      for (const auto& c : d2_consistency(build_d2_module(r, n))) {
        INFO(c.name << " r=" << r << " n=" << n);
        CHECK(c.ok);
      }
}

TEST_CASE("consistency catches a corrupted operation", "[mod2]") {
  auto m = build_d2_module(2, 2);
  m.sq2.at(d2::Q1U, d2::Q1V) = 1;  // the r = 1 value at r = 2
  bool any_failed = false;
  for (const auto& c : d2_consistency(m)) any_failed |= !c.ok;
  CHECK(any_failed);
}

TEST_CASE("module degrees", "[mod2]") {
  const auto m = build_d2_module(2, 3);
  CHECK(m.degrees == std::array<int, d2::kDim>{8, 9, 10, 10, 9, 11});
}

TEST_CASE("Bockstein pages shrink to zero", "[mod2]") {
  const auto dims = [](const D2Pages& pg) {
    std::vector<std::size_t> out;
    for (const auto& [Z, B] : pg.pages) out.push_back(Z.dim() - B.dim());
    return out;
  };
  CHECK(dims(d2_bockstein_pages(build_d2_module(1, 2))) == std::vector<std::size_t>{6, 2, 0});
  CHECK(dims(d2_bockstein_pages(build_d2_module(2, 2))) == std::vector<std::size_t>{6, 4, 2, 0});
  CHECK(dims(d2_bockstein_pages(build_d2_module(3, 2))) == std::vector<std::size_t>{6, 4, 4, 2, 0});
}

TEST_CASE("no splitting at r = 1", "[mod2]") {
  std::size_t candidates = 0;
  CHECK(decomposition_search(build_d2_module(1, 2), &candidates).empty());
  CHECK(candidates == 256);
}

TEST_CASE("r >= 2 splits off lambda(u,v) and Q1u", "[mod2]") {
  for (int r : {2, 3}) {
    const auto m = build_d2_module(r, 2);
    const auto ds = decomposition_search(m);
    CHECK(ds.size() == 8);
    bool isolated = false;
    for (const auto& d : ds) {
      CHECK(reconstructs(m, d));
      CHECK(d.first.size() <= d.second.size());
      if (d.first_names() == std::vector<std::string>{"lambda(u,v)", "Q1u"} &&
          d.second_names() == std::vector<std::string>{"u^2", "uv", "v^2", "Q1v"})
        isolated = true;
    }
    CHECK(isolated);
    CHECK(decompositions_to_json(ds).size() == 8);
  }
}

TEST_CASE("a non-invariant splitting does not reconstruct", "[mod2]") {
  const auto m = build_d2_module(1, 2);
  Decomposition d{{SteenrodModule::unit(d2::LAMBDA), SteenrodModule::unit(d2::Q1U)},
                  {SteenrodModule::unit(d2::U2), SteenrodModule::unit(d2::UV), SteenrodModule::unit(d2::V2),
                   SteenrodModule::unit(d2::Q1V)}};
  CHECK_FALSE(reconstructs(m, d));
}

TEST_CASE("chain identity coefficient is -2^(r+1)", "[mod2]") {
  for (int r = 1; r <= 4; ++r) {
    const auto rep = verify_chain_identity(r);
    CHECK(rep.coefficient == -(1LL << (r + 1)));
    CHECK(rep.alpha_square_term_vanishes);
    const std::string two_r = std::to_string(1LL << r);
    CHECK(rep.unreduced == std::vector<std::string>{"-1 alpha^0 e0@a@b", "-" + two_r + " alpha^0 e1@b@b",
                                                    "-" + two_r + " alpha^1 e1@b@b", "1 alpha^2 e0@a@b"});
  }
  CHECK_THROWS_AS(verify_chain_identity(0), InvalidInput);
}
