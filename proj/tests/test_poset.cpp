#include "doctest.h"

#include <algorithm>
#include <set>

#include "ungar/errors.hpp"
#include "ungar/poset.hpp"

using namespace ungar;

namespace {

// Reflexive-transitive closure by Floyd-Warshall over the cover relation.
std::vector<std::vector<bool>> closure_oracle(const FinitePoset& P) {
  const std::size_t n = P.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t x = 0; x < n; ++x) {
    le[x][x] = true;
    for (int c : P.lower_covers(static_cast<int>(x))) le[static_cast<std::size_t>(c)][x] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = true;
  return le;
}

// All downward-closed subsets by brute force over 2^n masks.
std::set<std::vector<bool>> ideals_oracle(const FinitePoset& P) {
  const auto le = closure_oracle(P);
  const std::size_t n = P.size();
  std::set<std::vector<bool>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<bool> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = (mask >> i) & 1U;
    bool closed = true;
    for (std::size_t x = 0; x < n && closed; ++x)
      for (std::size_t y = 0; y < n && closed; ++y)
        if (m[x] && le[y][x] && !m[y]) closed = false;
    if (closed) out.insert(m);
  }
  return out;
}

}  // namespace

TEST_CASE("build_poset small cases") {
  auto single = build_poset(1, {});
  CHECK(single.size() == 1);
  CHECK(maximal_chains(single).size() == 1);

  auto three = build_poset(3, {{0, 1}, {1, 2}});
  auto chains = maximal_chains(three);
  REQUIRE(chains.size() == 1);
  CHECK(chains[0] == std::vector<int>{0, 1, 2});
  CHECK(three.leq(0, 2));
  CHECK_FALSE(three.leq(2, 0));

  auto grid = make_grid(2, 2);
  CHECK(grid.poset.size() == 4);
  auto grid_chains = maximal_chains(grid.poset);
  CHECK(grid_chains.size() == 2);
  for (const auto& c : grid_chains) CHECK(c.size() == 3);
}

TEST_CASE("build_poset rejects bad relations") {
  CHECK_THROWS_AS(build_poset(3, {{0, 1}, {1, 2}, {2, 0}}), cycle_detected);
  CHECK_THROWS_AS(build_poset(3, {{0, 1}, {1, 2}, {0, 2}}), redundant_cover);
  CHECK_THROWS_AS(build_poset(2, {{0, 0}}), invalid_input);
  CHECK_THROWS_AS(build_poset(2, {{0, 5}}), invalid_input);
  CHECK_THROWS_AS(build_poset(2, {{0, 1}, {0, 1}}), invalid_input);
}

TEST_CASE("maximal chains of antichains and chains") {
  auto chains = maximal_chains(antichain_poset(2));
  CHECK(chains.size() == 2);
  for (const auto& c : chains) CHECK(c.size() == 1);
  CHECK(maximal_chains(chain_poset(3)).size() == 1);
  // R_{3,3}: C(4,2) monotone paths.
  CHECK(maximal_chains(make_grid(3, 3).poset).size() == 6);
  CHECK_THROWS_AS(maximal_chains(make_grid(4, 4).poset, 5), chain_explosion);
}

TEST_CASE("order ideals match brute force") {
  CHECK(order_ideals(antichain_poset(1)).ideals.size() == 2);
  CHECK(order_ideals(antichain_poset(2)).ideals.size() == 4);
  CHECK(order_ideals(make_grid(2, 2).poset).ideals.size() == 6);
  CHECK(order_ideals(make_grid(3, 3).poset).ideals.size() == 20);

  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto P = random_poset(7, 0.3, rng);
    auto table = order_ideals(P);
    std::set<std::vector<bool>> got(table.ideals.begin(), table.ideals.end());
    CHECK(got.size() == table.ideals.size());
    CHECK(got == ideals_oracle(P));
    CHECK(table.ideals[0] == std::vector<bool>(P.size(), true));
    CHECK(std::none_of(table.ideals[static_cast<std::size_t>(table.bottom)].begin(),
                       table.ideals[static_cast<std::size_t>(table.bottom)].end(), [](bool b) { return b; }));
  }
  CHECK_THROWS_AS(order_ideals(make_grid(3, 3).poset, 10), state_explosion);
}

TEST_CASE("J(P) covers are removals of one maximal element") {
  auto grid = make_grid(2, 3);
  auto table = order_ideals(grid.poset);
  for (std::size_t k = 0; k < table.ideals.size(); ++k) {
    const auto& I = table.ideals[k];
    const auto maxes = ideal_maximal_elements(grid.poset, I);
    const auto& lower = table.lattice.lower_covers(static_cast<int>(k));
    CHECK(lower.size() == maxes.size());
    std::set<std::vector<bool>> expected;
    for (int x : maxes) {
      auto J = I;
      J[static_cast<std::size_t>(x)] = false;
      expected.insert(J);
    }
    std::set<std::vector<bool>> got;
    for (int c : lower) got.insert(table.ideals[static_cast<std::size_t>(c)]);
    CHECK(got == expected);
  }
}

TEST_CASE("meets in J(P) are intersections") {
  for (auto P : {make_grid(2, 2).poset, make_grid(2, 3).poset, build_poset(4, {{0, 2}, {1, 2}, {1, 3}})}) {
    auto table = order_ideals(P);
    const int size = static_cast<int>(table.ideals.size());
    const auto le = closure_oracle(table.lattice);
    for (int x = 0; x < size; ++x) {
      CHECK(meet(table.lattice, x, x) == x);
      CHECK(meet(table.lattice, table.bottom, x) == table.bottom);
      for (int y = 0; y < size; ++y) {
        const int m = meet(table.lattice, x, y);
        std::vector<bool> inter(P.size());
        for (std::size_t e = 0; e < P.size(); ++e)
          inter[e] = table.ideals[static_cast<std::size_t>(x)][e] && table.ideals[static_cast<std::size_t>(y)][e];
        CHECK(table.ideals[static_cast<std::size_t>(m)] == inter);
        for (int z = 0; z < size; ++z) {
          if (le[static_cast<std::size_t>(z)][static_cast<std::size_t>(x)] &&
              le[static_cast<std::size_t>(z)][static_cast<std::size_t>(y)]) {
            CHECK(le[static_cast<std::size_t>(z)][static_cast<std::size_t>(m)]);
          }
        }
      }
    }
  }
}

TEST_CASE("meet rejects non-lattices") {
  // Two minimal elements below two maximal ones: the bowtie.
  auto bowtie = build_poset(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  CHECK_THROWS_AS(meet(bowtie, 2, 3), not_a_lattice);
}

TEST_CASE("leq agrees with closure with and without cache") {
  Rng rng(11);
  for (int trial = 0; trial < 15; ++trial) {
    auto P = random_poset(9, 0.35, rng);
    auto uncached = FinitePoset::from_lower_covers(
        [&] {
          std::vector<std::vector<int>> lower(P.size());
          for (std::size_t x = 0; x < P.size(); ++x) lower[x] = P.lower_covers(static_cast<int>(x));
          return lower;
        }(),
        0);
    CHECK(P.has_closure_cache());
    CHECK_FALSE(uncached.has_closure_cache());
    const auto le = closure_oracle(P);
    for (int x = 0; x < 9; ++x)
      for (int y = 0; y < 9; ++y) {
        CHECK(P.leq(x, y) == le[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]);
        CHECK(uncached.leq(x, y) == le[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]);
      }
    // random_poset must already be transitively reduced.
    CHECK_NOTHROW(build_poset(P.size(), P.cover_pairs()));
  }
}

TEST_CASE("maximal chains of an ideal extend to maximal chains of P") {
  auto grid = make_grid(3, 3);
  const auto chains = maximal_chains(grid.poset);
  auto table = order_ideals(grid.poset);
  for (const auto& I : table.ideals) {
    std::vector<int> members;
    std::vector<int> relabel(I.size(), -1);
    for (std::size_t x = 0; x < I.size(); ++x) {
      if (I[x]) {
        relabel[x] = static_cast<int>(members.size());
        members.push_back(static_cast<int>(x));
      }
    }
    if (members.empty()) continue;
    std::vector<CoverPair> covers;
    for (int x : members)
      for (int c : grid.poset.lower_covers(x)) covers.emplace_back(relabel[static_cast<std::size_t>(c)], relabel[static_cast<std::size_t>(x)]);
    auto sub = build_poset(members.size(), covers);
    for (const auto& c : maximal_chains(sub)) {
      std::vector<int> lifted;
      for (int v : c) lifted.push_back(members[static_cast<std::size_t>(v)]);
      const bool extends = std::any_of(chains.begin(), chains.end(), [&](const std::vector<int>& full) {
        return full.size() >= lifted.size() && std::equal(lifted.begin(), lifted.end(), full.begin());
      });
      CHECK(extends);
    }
  }
}

TEST_CASE("order ideal validation") {
  auto P = build_poset(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(OrderIdeal(P, {false, true, false}), invalid_input);
  OrderIdeal I(P, {true, true, false});
  CHECK(I.count() == 2);
  CHECK(I.maximal_elements() == std::vector<int>{1});
  CHECK(OrderIdeal::full(P).count() == 3);
  CHECK(OrderIdeal::empty(P).maximal_elements().empty());
}

TEST_CASE("json and dot") {
  auto P = make_grid(2, 3).poset;
  auto doc = poset_to_json(P);
  CHECK(doc["n"] == 6);
  auto back = poset_from_json(doc);
  CHECK(back.cover_pairs() == P.cover_pairs());
  CHECK(poset_to_dot(P).find("digraph") != std::string::npos);
  CHECK_THROWS_AS(poset_from_json(nlohmann::json{{"n", 2}, {"covers", {{0, 1}, {1, 0}}}}), cycle_detected);
}
