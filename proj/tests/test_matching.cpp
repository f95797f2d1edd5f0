#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <string>

#include "caravan/matching.hpp"

using namespace caravan::arcs;

namespace {

Matching make(std::vector<IndexPair> pairs) { return Matching(std::move(pairs)); }

std::string key(const Matching& m) {
  std::string s;
  for (const auto& p : m.pairs()) {
    s += std::to_string(p.left) + "," + std::to_string(p.right) + ";";
  }
  return s;
}

}  // namespace

TEST_CASE("matching validation") {
  CHECK_THROWS_AS(make({{1, 1}}), caravan::InvalidInputError);
  CHECK_THROWS_AS(make({{1, 3}, {2, 3}}), caravan::InvalidInputError);
  CHECK_THROWS_AS(make({{1, 5}, {2, 3}}), caravan::InvalidInputError);
  CHECK(make({{2, 4}, {1, 3}}).pair(0) == IndexPair{1, 3});  // sorted by left endpoint
}

TEST_CASE("crossing") {
  CHECK(crossing({1, 3}, {2, 4}));
  CHECK_FALSE(crossing({1, 4}, {2, 3}));
  CHECK(crossing({1, 4}, {3, 6}));
  CHECK_THROWS_AS(crossing({1, 3}, {3, 5}), caravan::InvalidInputError);
}

TEST_CASE("crossing is symmetric") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> v{0, 0, 0, 0};
    std::set<int> seen;
    for (auto& x : v) {
      do {
        x = static_cast<int>(rng() % 50) + 1;
      } while (!seen.insert(x).second);
    }
    IndexPair a{std::min(v[0], v[1]), std::max(v[0], v[1])};
    IndexPair b{std::min(v[2], v[3]), std::max(v[2], v[3])};
    CHECK(crossing(a, b) == crossing(b, a));
  }
}

TEST_CASE("interlacement graphs") {
  F2Matrix g1 = interlacement_graph(make({{1, 3}, {2, 4}}));
  CHECK(g1.get(0, 1));
  CHECK(g1.get(1, 0));
  CHECK_FALSE(g1.get(0, 0));

  F2Matrix g2 = interlacement_graph(make({{1, 2}, {3, 4}}));
  CHECK(g2.rank() == 0);

  // the four-arc diagram with adjacency rows 0110 / 1001 / 1001 / 0110
  Matching m = make({{1, 4}, {2, 7}, {3, 6}, {5, 8}});
  F2Matrix g3 = interlacement_graph(m);
  int expected[4][4] = {{0, 1, 1, 0}, {1, 0, 0, 1}, {1, 0, 0, 1}, {0, 1, 1, 0}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(static_cast<int>(g3.get(i, j)) == expected[i][j]);
  }
  CHECK(g3.rank() == 2);
}

TEST_CASE("f2_rank on raw rows") {
  CHECK(f2_rank({{0, 1}, {1, 0}}) == 2);
  CHECK(f2_rank({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}) == 0);
  CHECK(f2_rank({{0, 1, 1, 0}, {1, 0, 0, 1}, {1, 0, 0, 1}, {0, 1, 1, 0}}) == 2);
  CHECK_THROWS_AS(f2_rank({{0, 1}}), caravan::InvalidInputError);
}

TEST_CASE("rank of an alternating matrix is even") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + static_cast<int>(rng() % 12);
    F2Matrix m(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        bool bit = rng() % 2 != 0;
        m.set(i, j, bit);
        m.set(j, i, bit);
      }
    }
    CHECK(m.rank() % 2 == 0);
  }
}

TEST_CASE("component count and nondegeneracy") {
  CHECK(component_count(make({{1, 3}, {2, 4}})) == 1);
  CHECK(component_count(make({{1, 2}, {3, 4}})) == 3);
  CHECK(component_count(make({{1, 4}, {2, 7}, {3, 6}, {5, 8}})) == 3);
  CHECK(is_nondegenerate(make({{1, 3}, {2, 4}})));
  CHECK_FALSE(is_nondegenerate(make({{1, 2}, {3, 4}})));
  for (int g = 1; g <= 4; ++g) CHECK(is_nondegenerate(Matching::caravan(g)));
}

TEST_CASE("reglue oracle") {
  CHECK(reglue_oracle(make({{1, 3}, {2, 4}})) == 1);
  CHECK(reglue_oracle(make({{1, 2}, {3, 4}})) == 3);
  CHECK(reglue_oracle(Matching()) == 1);
}

TEST_CASE("genus and its Euler oracle") {
  CHECK(genus(make({{1, 3}, {2, 4}})) == 1);
  CHECK(genus(make({{1, 2}, {3, 4}})) == 0);
  CHECK(genus(make({{1, 4}, {2, 7}, {3, 6}, {5, 8}})) == 1);
  CHECK(euler_genus_oracle(make({{1, 3}, {2, 4}})) == 1);
  CHECK(euler_genus_oracle(make({{1, 2}, {3, 4}})) == 0);
  CHECK(euler_genus_oracle(Matching()) == 0);
}

TEST_CASE("oracle equivalences, exhaustive on small sizes") {
  for (int n = 1; n <= 4; ++n) {
    enumerate_matchings(n, [](const Matching& m) {
      CHECK(reglue_oracle(m) == component_count(m));
      CHECK(euler_genus_oracle(m) == genus(m));
    });
  }
}

TEST_CASE("enumeration counts and order") {
  int count1 = 0;
  enumerate_matchings(1, [&](const Matching& m) {
    ++count1;
    CHECK(m == make({{1, 2}}));
  });
  CHECK(count1 == 1);

  for (int n = 1; n <= 6; ++n) {
    std::set<std::string> seen;
    std::uint64_t count = 0;
    enumerate_matchings(n, [&](const Matching& m) {
      ++count;
      CHECK(seen.insert(key(m)).second);  // no duplicates
    });
    CHECK(count == double_factorial(2 * n - 1));
  }
  CHECK(double_factorial(7) == 105);
}

TEST_CASE("enumeration partitions by the first partner") {
  const int n = 4;
  std::set<std::string> all;
  enumerate_matchings(n, [&](const Matching& m) { all.insert(key(m)); });
  std::set<std::string> merged;
  for (int partner = 2; partner <= 2 * n; ++partner) {
    enumerate_matchings_with_first(n, partner, [&](const Matching& m) {
      CHECK(merged.insert(key(m)).second);
    });
  }
  CHECK(merged == all);
}

TEST_CASE("nondegenerate counts for small genus") {
  CHECK(count_nondegenerate(1) == 1);
  CHECK(count_nondegenerate(2) == 21);
}
