#include <catch_amalgamated.hpp>

#include "loopalg/catalog.hpp"

using namespace loopalg;

namespace {

std::vector<long long> degrees(const std::vector<FamilyEntry>& es, const std::string& provenance) {
  std::vector<long long> out;
  for (const auto& e : es)
    if (e.provenance == provenance) out.push_back(e.degree);
  return out;
}

}  // namespace

TEST_CASE("Adams periods", "[catalog]") {
  CHECK(adams_period(3, 1) == 4);
  CHECK(adams_period(3, 2) == 12);
  CHECK(adams_period(5, 1) == 8);
  CHECK(adams_period(2, 1) == 8);
  CHECK(adams_period(2, 4) == 8);
  CHECK(adams_period(2, 5) == 16);
  CHECK_THROWS_AS(adams_period(4, 1), InvalidInput);
  CHECK_THROWS_AS(adams_period(3, 0), InvalidInput);
}

TEST_CASE("odd-primary families at p = 3, r = 1, n = 2", "[catalog]") {
  const auto es = odd_families(3, 1, 2, 1, 4);
  CHECK(degrees(es, "odd-family") == std::vector<long long>{11, 23, 35, 47, 59});
  CHECK(degrees(es, "even-dim-family") == std::vector<long long>{17, 29, 41, 53, 65});
  for (const auto& e : es) {
    CHECK(e.order == 9);
    CHECK(e.k == 1);
  }
  CHECK(es.front().space == "P^5(3)");
  CHECK(es.back().space == "P^4(3)");
}

TEST_CASE("odd families gate each part separately", "[catalog]") {
  // p^k n = 2 < r+4 but p^k (2n-1) = 3 < r+3 as well
  CHECK_THROWS_WITH(odd_families(3, 1, 2, 0, 2), Catch::Matchers::ContainsSubstring("k too small"));
  // n = 2, r = 3: p^k = 3 gives 6 < 7 for the odd space, 9 >= 6 for the even one
  const auto es = odd_families(3, 3, 2, 1, 1);
  CHECK(degrees(es, "odd-family").empty());
  CHECK(degrees(es, "even-dim-family").size() == 2);
  CHECK_THROWS_AS(odd_families(2, 1, 2, 1, 1), InvalidInput);
  CHECK_THROWS_AS(odd_families(3, 1, 2, 1, -1), InvalidInput);
}

TEST_CASE("summand degrees", "[catalog]") {
  const auto es = cmn_summands(3, 1, 2, 2);
  CHECK(degrees(es, "cmn-summand") == std::vector<long long>{11, 35});
  for (const auto& e : es) CHECK(e.order == 9);
  CHECK(degrees(cmn_summands(5, 2, 3, 1), "cmn-summand") == std::vector<long long>{29});
}

TEST_CASE("2-primary families", "[catalog]") {
  const auto es = even_families(2, 2);
  CHECK(degrees(es, "p2-P5-family") == std::vector<long long>{11, 19});
  CHECK(degrees(es, "p2-P9-family") == std::vector<long long>{15, 23});
  for (const auto& e : es) {
    if (e.provenance == "p2-P5-family") {
      CHECK(e.space == "P^5(4)");
      CHECK(e.order == 8);
    } else {
      CHECK(e.space == "P^9(4)");
    }
  }
  CHECK(degrees(even_families(3, 1), "p2-P5-family").empty());
  CHECK(degrees(even_families(3, 1), "p2-P9-family") == std::vector<long long>{15});
  CHECK_THROWS_AS(even_families(1, 2), InvalidInput);
}

TEST_CASE("low homotopy groups", "[catalog]") {
  CHECK(low_homotopy(3, 1, 5) == std::pair<std::string, std::string>{"Z/3", "0"});
  CHECK(low_homotopy(3, 2, 4) == std::pair<std::string, std::string>{"Z/9", "0"});
  CHECK(low_homotopy(2, 1, 5) == std::pair<std::string, std::string>{"Z/2", "Z/2"});
  CHECK_THROWS_AS(low_homotopy(2, 1, 3), InvalidInput);
}

TEST_CASE("CSV and JSON serializations", "[catalog]") {
  const auto es = cmn_summands(3, 1, 2, 1);
  CHECK(families_to_csv(es) == "space,degree,order,k,t,provenance\nP^5(3),11,9,1,,cmn-summand\n");
  const auto j = families_to_json(even_families(2, 1));
  REQUIRE(j.size() == 2);
  CHECK(j[0]["degree"] == 11);
  CHECK(j[0]["k"].is_null());
  CHECK(j[0]["t"] == 1);
}
