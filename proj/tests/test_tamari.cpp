#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "ungar/errors.hpp"
#include "ungar/skyline.hpp"
#include "ungar/tamari.hpp"

using namespace ungar;

namespace {

Permutation P(const char* s) { return Permutation::parse(s); }

const std::size_t catalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796};

std::vector<Permutation> av312_by_filter(std::size_t n) {
  std::vector<Permutation> out;
  for (const auto& s : all_permutations(n))
    if (is_312_avoiding(s)) out.push_back(s);
  return out;
}

// Allowable swaps applied in random order until none remain.
Permutation project_random_order(Permutation sigma, std::mt19937& gen) {
  while (true) {
    auto swaps = allowable_swaps(sigma);
    if (swaps.empty()) return sigma;
    std::uniform_int_distribution<std::size_t> pick(0, swaps.size() - 1);
    sigma = swap_adjacent(sigma, swaps[pick(gen)]);
  }
}

// Greatest common lower bound inside Av_n(312) under the weak order.
Permutation tamari_meet_oracle(const std::vector<Permutation>& elements, const std::vector<Permutation>& av) {
  std::vector<Permutation> common;
  for (const auto& s : av)
    if (std::all_of(elements.begin(), elements.end(), [&](const Permutation& e) { return weak_leq(s, e); }))
      common.push_back(s);
  std::vector<Permutation> maximal;
  for (const auto& s : common)
    if (std::none_of(common.begin(), common.end(), [&](const Permutation& t) { return t != s && weak_leq(s, t); }))
      maximal.push_back(s);
  REQUIRE(maximal.size() == 1);
  return maximal[0];
}

std::vector<std::vector<int>> subsets(const std::vector<int>& items) {
  std::vector<std::vector<int>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << items.size()); ++mask) {
    std::vector<int> s;
    for (std::size_t b = 0; b < items.size(); ++b)
      if ((mask >> b) & 1U) s.push_back(items[b]);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("312 avoidance and projection") {
  CHECK(is_312_avoiding(P("231")));
  CHECK_FALSE(is_312_avoiding(P("312")));
  CHECK_THROWS_AS(Av312Permutation(P("312")), not_312_avoiding);
  CHECK(project_down(P("231")).permutation() == P("231"));
  CHECK(project_down(P("312")).permutation() == P("132"));
  CHECK(allowable_swaps(P("312")) == std::vector<int>{1});

  std::mt19937 gen(5);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& sigma : all_permutations(n)) {
      const auto down = project_down(sigma).permutation();
      CHECK(is_312_avoiding(down));
      CHECK(weak_leq(down, sigma));
      CHECK(project_random_order(sigma, gen) == down);
    }
  }
}

TEST_CASE("projection of a cover moves one entry left past a block") {
  for (std::size_t n = 2; n <= 6; ++n) {
    for (const auto& sigma : enumerate_av312(n)) {
      const auto& w = sigma.word();
      for (int i : descents(sigma)) {
        // j minimal with sigma(k) >= sigma(i) for all k in [j, i].
        int j = i;
        while (j > 1 && w[static_cast<std::size_t>(j - 2)] >= w[static_cast<std::size_t>(i - 1)]) --j;
        std::vector<int> expected(w.begin(), w.begin() + (j - 1));
        expected.push_back(w[static_cast<std::size_t>(i)]);
        expected.insert(expected.end(), w.begin() + (j - 1), w.begin() + i);
        expected.insert(expected.end(), w.begin() + i + 1, w.end());
        CHECK(project_down(swap_adjacent(sigma, i)).permutation() == Permutation(expected));
      }
    }
  }
}

TEST_CASE("covers in Av(312)") {
  CHECK(covers_av312(Av312Permutation(Permutation::identity(4))).empty());
  CHECK(covers_av312(Av312Permutation(P("321"))) == std::vector<Permutation>{P("231"), P("132")});
  for (std::size_t n = 2; n <= 7; ++n) {
    for (const auto& sigma : enumerate_av312(n)) {
      const auto cov = covers_av312(Av312Permutation(sigma));
      CHECK(cov.size() == descents(sigma).size());
      CHECK(std::set<Permutation>(cov.begin(), cov.end()).size() == cov.size());
      for (const auto& c : cov) {
        CHECK(is_312_avoiding(c));
        CHECK(weak_leq(c, sigma));
        CHECK(c != sigma);
      }
    }
  }
}

TEST_CASE("Catalan counts") {
  for (std::size_t n = 0; n <= 10; ++n) CHECK(enumerate_av312(n).size() == catalan[n]);
  for (std::size_t n = 1; n <= 8; ++n) CHECK(all_ordered_forests(n).size() == catalan[n]);
  for (std::size_t n = 1; n <= 7; ++n) {
    auto a = enumerate_av312(n);
    std::sort(a.begin(), a.end());
    CHECK(a == av312_by_filter(n));
  }
}

TEST_CASE("the forest of 342651") {
  const Av312Permutation sigma(P("342651"));
  const auto F = phi(sigma);
  CHECK(F == OrderedForest::from_parents({0, 1, 2, 2, 1, 5}));
  CHECK(F.right_to_left_labels() == std::vector<int>{0, 1, 4, 6, 5, 2, 3});
  CHECK(phi_inverse(F) == sigma);
  CHECK(phi(Av312Permutation(Permutation::identity(5))) == OrderedForest::antichain(5));
  CHECK(phi(Av312Permutation(Permutation::decreasing(5))) == OrderedForest::path(5));
}

TEST_CASE("operations on the nine-vertex tree") {
  const auto left = OrderedForest::from_parents({0, 1, 2, 3, 2, 2, 1, 7, 7});
  CHECK(forest_operate(left, 2) == OrderedForest::from_parents({0, 1, 2, 3, 2, 1, 1, 7, 7}));
  CHECK(forest_operate(left, 1) == OrderedForest::from_parents({0, 1, 2, 3, 2, 2, 0, 7, 7}));
  for (int leaf : {4, 5, 6, 8, 9}) CHECK(forest_operate(left, leaf) == left);
  CHECK(forest_operate(left, 2).has_preorder_labels());
}

TEST_CASE("forest ungar moves") {
  const auto path = OrderedForest::path(3);
  CHECK(forest_ungar_move(path, {}) == path);
  CHECK(forest_ungar_move(path, {1}) == OrderedForest::from_parents({0, 0, 2}));
  CHECK(forest_ungar_move(path, {1, 2}) == OrderedForest::antichain(3));
  CHECK_THROWS_AS(OrderedForest::from_parents({0, 3, 0}), invalid_input);
}

TEST_CASE("round trips and cover preservation") {
  for (std::size_t n = 1; n <= 7; ++n) {
    for (const auto& w : enumerate_av312(n)) {
      const Av312Permutation sigma(w);
      const auto F = phi(sigma);
      CHECK(F.has_preorder_labels());
      CHECK(phi_inverse(F) == sigma);
      std::vector<int> expected_internal;
      for (int i : descents(w)) {
        expected_internal.push_back(w.at(static_cast<std::size_t>(i) + 1));
        const auto lower = Av312Permutation(project_down(swap_adjacent(w, i)).permutation());
        CHECK(phi(lower) == forest_operate(F, w.at(static_cast<std::size_t>(i) + 1)));
      }
      std::sort(expected_internal.begin(), expected_internal.end());
      CHECK(F.internal_vertices() == expected_internal);
    }
    for (const auto& F : all_ordered_forests(n)) CHECK(phi(phi_inverse(F)) == F);
  }
}

TEST_CASE("Ungar moves agree across the two models") {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& w : enumerate_av312(n)) {
      const auto F = phi(Av312Permutation(w));
      for (const auto& T : subsets(descents(w))) {
        std::vector<int> labels;
        for (int i : T) labels.push_back(w.at(static_cast<std::size_t>(i) + 1));
        std::sort(labels.begin(), labels.end());
        const auto moved = av312_ungar_move(w, T);
        CHECK(phi(Av312Permutation(moved)) == forest_ungar_move(F, labels));
        CHECK(moved == project_down(ungar_move(w, T)).permutation());
      }
    }
  }
}

TEST_CASE("projection commutes with meets") {
  const std::size_t n = 4;
  const auto all = all_permutations(n);
  const auto av = av312_by_filter(n);
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = a; b < all.size(); ++b) {
      for (std::size_t c = b; c < all.size(); ++c) {
        const std::vector<Permutation> T{all[a], all[b], all[c]};
        const auto lhs = project_down(weak_meet(T)).permutation();
        std::vector<Permutation> projected;
        for (const auto& s : T) projected.push_back(project_down(s).permutation());
        CHECK(lhs == tamari_meet_oracle(projected, av));
      }
    }
  }
}

TEST_CASE("restriction") {
  const auto path = OrderedForest::path(3);
  CHECK(restrict_forest(path, 1) == path);
  CHECK(restrict_forest(path, 2) == OrderedForest::path(2));
  for (std::size_t n = 2; n <= 6; ++n) {
    for (const auto& F : all_ordered_forests(n)) {
      for (int m = 2; m <= static_cast<int>(n); ++m) {
        const auto base = restrict_forest(F, m);
        for (int i = 1; i < m; ++i) CHECK(restrict_forest(forest_operate(F, i), m) == base);
      }
    }
  }
}

TEST_CASE("operations shrink the total descendant count") {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& F : all_ordered_forests(n)) {
      for (int v = 1; v <= static_cast<int>(n); ++v) {
        const auto G = forest_operate(F, v);
        if (F.is_leaf(v)) {
          CHECK(G == F);
          continue;
        }
        CHECK(G.total_descendants() < F.total_descendants());
        CHECK(G.descendant_count(v) < F.descendant_count(v));
        for (int u = 1; u <= static_cast<int>(n); ++u)
          if (u != v) CHECK(G.descendant_count(u) == F.descendant_count(u));
        // Descendant labels of every vertex stay a contiguous interval.
        for (int u = 1; u <= static_cast<int>(n); ++u) {
          const auto d = static_cast<int>(G.descendant_count(u));
          for (int x = u + 1; x <= u + d; ++x) {
            int y = x;
            while (y != 0 && y != u) y = G.parent(y);
            CHECK(y == u);
          }
        }
      }
    }
  }
}

TEST_CASE("first-operation pattern forces a parent edge") {
  Rng rng(2024);
  for (int run = 0; run < 300; ++run) {
    const std::size_t n = 8;
    const auto r = naive_tamari_run(n, 0.4, rng, true);
    const auto& h = r.first_pick;
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t l = k + 1; l <= n; ++l) {
        if (!(h[k - 1] > h[l - 1])) continue;
        bool between = true;
        for (std::size_t i = k + 1; i < l; ++i) between = between && h[l - 1] >= h[i - 1];
        if (!between) continue;
        REQUIRE(h[l - 1] < r.states.size());
        CHECK(r.states[h[l - 1]].parent(static_cast<int>(l)) == static_cast<int>(k));
      }
    }
  }
}

TEST_CASE("forest serialization") {
  const auto F = OrderedForest::from_parents({0, 1, 2, 2, 1, 5});
  const auto doc = forest_to_json(F);
  CHECK(doc["n"] == 6);
  CHECK(forest_from_json(doc) == F);
  CHECK(forest_to_dot(F).find("1 -> 2") != std::string::npos);
}
