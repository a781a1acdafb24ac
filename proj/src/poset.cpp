#include "ungar/poset.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "ungar/errors.hpp"

namespace ungar {

namespace {

// Kahn's algorithm over lower covers; smaller elements come first.
std::vector<int> linear_extension(const std::vector<std::vector<int>>& lower,
                                  const std::vector<std::vector<int>>& upper) {
  const std::size_t n = lower.size();
  std::vector<std::size_t> pending(n);
  std::deque<int> ready;
  for (std::size_t x = 0; x < n; ++x) {
    pending[x] = lower[x].size();
    if (pending[x] == 0) ready.push_back(static_cast<int>(x));
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    const int x = ready.front();
    ready.pop_front();
    order.push_back(x);
    for (int y : upper[static_cast<std::size_t>(x)]) {
      if (--pending[static_cast<std::size_t>(y)] == 0) ready.push_back(y);
    }
  }
  return order;
}

std::vector<std::vector<int>> invert(const std::vector<std::vector<int>>& lower) {
  std::vector<std::vector<int>> upper(lower.size());
  for (std::size_t y = 0; y < lower.size(); ++y) {
    for (int x : lower[y]) upper[static_cast<std::size_t>(x)].push_back(static_cast<int>(y));
  }
  for (auto& list : upper) std::sort(list.begin(), list.end());
  return upper;
}

std::vector<boost::dynamic_bitset<>> down_sets(const std::vector<std::vector<int>>& lower,
                                                const std::vector<int>& topo) {
  const std::size_t n = lower.size();
  std::vector<boost::dynamic_bitset<>> down(n, boost::dynamic_bitset<>(n));
  for (int y : topo) {
    auto& set = down[static_cast<std::size_t>(y)];
    set.set(static_cast<std::size_t>(y));
    for (int x : lower[static_cast<std::size_t>(y)]) set |= down[static_cast<std::size_t>(x)];
  }
  return down;
}

// Is `target` reachable from `start` by descending lower covers?
bool reaches_down(const std::vector<std::vector<int>>& lower, int start, int target, std::vector<char>& seen) {
  std::fill(seen.begin(), seen.end(), 0);
  std::vector<int> stack{start};
  seen[static_cast<std::size_t>(start)] = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    if (x == target) return true;
    for (int z : lower[static_cast<std::size_t>(x)]) {
      if (!seen[static_cast<std::size_t>(z)]) {
        seen[static_cast<std::size_t>(z)] = 1;
        stack.push_back(z);
      }
    }
  }
  return false;
}

struct BoolVectorHash {
  std::size_t operator()(const std::vector<bool>& v) const noexcept { return std::hash<std::vector<bool>>{}(v); }
};

}  // namespace

FinitePoset FinitePoset::from_lower_covers(std::vector<std::vector<int>> lower, std::size_t closure_cap) {
  FinitePoset poset;
  for (auto& list : lower) std::sort(list.begin(), list.end());
  poset.upper_ = invert(lower);
  poset.lower_ = std::move(lower);
  poset.topo_ = linear_extension(poset.lower_, poset.upper_);
  if (poset.size() <= closure_cap) poset.down_ = down_sets(poset.lower_, poset.topo_);
  return poset;
}

bool FinitePoset::leq(int x, int y) const {
  if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= size() || static_cast<std::size_t>(y) >= size()) {
    throw invalid_input("poset element out of range");
  }
  if (x == y) return true;
  if (!down_.empty()) return down_[static_cast<std::size_t>(y)].test(static_cast<std::size_t>(x));
  std::vector<char> seen(size(), 0);
  return reaches_down(lower_, y, x, seen);
}

std::vector<int> FinitePoset::minimal_elements() const {
  std::vector<int> out;
  for (std::size_t x = 0; x < size(); ++x) {
    if (lower_[x].empty()) out.push_back(static_cast<int>(x));
  }
  return out;
}

std::vector<int> FinitePoset::maximal_elements() const {
  std::vector<int> out;
  for (std::size_t x = 0; x < size(); ++x) {
    if (upper_[x].empty()) out.push_back(static_cast<int>(x));
  }
  return out;
}

std::vector<CoverPair> FinitePoset::cover_pairs() const {
  std::vector<CoverPair> out;
  for (std::size_t y = 0; y < size(); ++y) {
    for (int x : lower_[y]) out.emplace_back(x, static_cast<int>(y));
  }
  return out;
}

FinitePoset build_poset(std::size_t n, const std::vector<CoverPair>& covers, std::size_t closure_cap) {
  std::vector<std::vector<int>> lower(n);
  for (const auto& [child, parent] : covers) {
    if (child < 0 || parent < 0 || static_cast<std::size_t>(child) >= n || static_cast<std::size_t>(parent) >= n) {
      throw invalid_input("cover pair (" + std::to_string(child) + ", " + std::to_string(parent) +
                          ") references an element outside 0.." + std::to_string(n) + "-1");
    }
    if (child == parent) throw cycle_detected("self-cover on element " + std::to_string(child));
    lower[static_cast<std::size_t>(parent)].push_back(child);
  }
  for (std::size_t y = 0; y < n; ++y) {
    auto& list = lower[y];
    std::sort(list.begin(), list.end());
    auto dup = std::adjacent_find(list.begin(), list.end());
    if (dup != list.end()) {
      throw redundant_cover("duplicate cover pair (" + std::to_string(*dup) + ", " + std::to_string(y) + ")");
    }
  }
  const auto upper = invert(lower);
  const auto topo = linear_extension(lower, upper);
  if (topo.size() != n) throw cycle_detected("cover relation contains a cycle");

  // x < y is redundant iff x lies below another lower cover of y.
  if (n <= closure_cap) {
    const auto down = down_sets(lower, topo);
    for (std::size_t y = 0; y < n; ++y) {
      for (int x : lower[y]) {
        for (int z : lower[y]) {
          if (z != x && down[static_cast<std::size_t>(z)].test(static_cast<std::size_t>(x))) {
            throw redundant_cover("cover (" + std::to_string(x) + ", " + std::to_string(y) +
                                  ") is implied through " + std::to_string(z));
          }
        }
      }
    }
  } else {
    std::vector<char> seen(n, 0);
    for (std::size_t y = 0; y < n; ++y) {
      for (int x : lower[y]) {
        for (int z : lower[y]) {
          if (z != x && reaches_down(lower, z, x, seen)) {
            throw redundant_cover("cover (" + std::to_string(x) + ", " + std::to_string(y) +
                                  ") is implied through " + std::to_string(z));
          }
        }
      }
    }
  }
  return FinitePoset::from_lower_covers(std::move(lower), closure_cap);
}

FinitePoset chain_poset(std::size_t length) {
  std::vector<std::vector<int>> lower(length);
  for (std::size_t y = 1; y < length; ++y) lower[y].push_back(static_cast<int>(y - 1));
  return FinitePoset::from_lower_covers(std::move(lower));
}

FinitePoset antichain_poset(std::size_t size) {
  return FinitePoset::from_lower_covers(std::vector<std::vector<int>>(size));
}

GridPoset make_grid(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw invalid_input("grid dimensions must be positive");
  GridPoset grid;
  grid.rows = rows;
  grid.cols = cols;
  std::vector<std::vector<int>> lower(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      auto& list = lower[i * cols + j];
      if (i > 0) list.push_back(grid.index(i - 1, j));
      if (j > 0) list.push_back(grid.index(i, j - 1));
    }
  }
  grid.poset = FinitePoset::from_lower_covers(std::move(lower));
  return grid;
}

bool is_downward_closed(const FinitePoset& poset, const std::vector<bool>& members) {
  if (members.size() != poset.size()) return false;
  for (std::size_t y = 0; y < poset.size(); ++y) {
    if (!members[y]) continue;
    for (int x : poset.lower_covers(static_cast<int>(y))) {
      if (!members[static_cast<std::size_t>(x)]) return false;
    }
  }
  return true;
}

std::vector<int> ideal_maximal_elements(const FinitePoset& poset, const std::vector<bool>& members) {
  std::vector<int> out;
  for (std::size_t x = 0; x < poset.size(); ++x) {
    if (!members[x]) continue;
    const auto& ups = poset.upper_covers(static_cast<int>(x));
    const bool blocked = std::any_of(ups.begin(), ups.end(), [&](int y) { return members[static_cast<std::size_t>(y)]; });
    if (!blocked) out.push_back(static_cast<int>(x));
  }
  return out;
}

OrderIdeal::OrderIdeal(const FinitePoset& poset, std::vector<bool> members)
    : poset_(&poset), members_(std::move(members)) {
  if (members_.size() != poset.size()) throw size_mismatch("ideal mask size differs from poset size");
  if (!is_downward_closed(poset, members_)) throw invalid_input("member set is not downward closed");
}

OrderIdeal OrderIdeal::full(const FinitePoset& poset) { return OrderIdeal(poset, std::vector<bool>(poset.size(), true)); }

OrderIdeal OrderIdeal::empty(const FinitePoset& poset) { return OrderIdeal(poset, std::vector<bool>(poset.size(), false)); }

std::size_t OrderIdeal::count() const noexcept {
  return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true));
}

std::vector<int> OrderIdeal::maximal_elements() const { return ideal_maximal_elements(*poset_, members_); }

IdealLatticeTable order_ideals(const FinitePoset& poset, std::size_t cap) {
  IdealLatticeTable table;
  std::unordered_map<std::vector<bool>, int, BoolVectorHash> index;
  std::vector<std::vector<int>> lower;
  auto intern = [&](std::vector<bool> ideal) {
    auto it = index.find(ideal);
    if (it != index.end()) return it->second;
    if (table.ideals.size() >= cap) throw state_explosion("order ideal enumeration", cap);
    const int id = static_cast<int>(table.ideals.size());
    index.emplace(ideal, id);
    table.ideals.push_back(std::move(ideal));
    lower.emplace_back();
    return id;
  };
  intern(std::vector<bool>(poset.size(), true));
  for (std::size_t k = 0; k < table.ideals.size(); ++k) {
    const auto maxima = ideal_maximal_elements(poset, table.ideals[k]);
    for (int x : maxima) {
      auto smaller = table.ideals[k];
      smaller[static_cast<std::size_t>(x)] = false;
      const int id = intern(std::move(smaller));
      lower[k].push_back(id);
    }
  }
  table.bottom = index.at(std::vector<bool>(poset.size(), false));
  table.lattice = FinitePoset::from_lower_covers(std::move(lower));
  return table;
}

std::vector<std::vector<int>> maximal_chains(const FinitePoset& poset, std::size_t cap) {
  std::vector<std::vector<int>> chains;
  std::vector<int> current;
  // Explicit stack of (element, next upper-cover index) keeps deep posets off the call stack.
  for (int start : poset.minimal_elements()) {
    std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
    current.assign(1, start);
    while (!stack.empty()) {
      auto& [x, next] = stack.back();
      const auto& ups = poset.upper_covers(x);
      if (ups.empty()) {
        if (chains.size() >= cap) throw chain_explosion("maximal chain enumeration", cap);
        chains.push_back(current);
      }
      if (next < ups.size()) {
        const int y = ups[next++];
        stack.emplace_back(y, 0);
        current.push_back(y);
      } else {
        stack.pop_back();
        current.pop_back();
      }
    }
  }
  return chains;
}

int meet(const FinitePoset& lattice, int x, int y) {
  if (lattice.leq(x, y)) return x;
  if (lattice.leq(y, x)) return y;
  const std::size_t n = lattice.size();
  std::vector<char> common(n, 0);
  for (std::size_t z = 0; z < n; ++z) {
    common[z] = lattice.leq(static_cast<int>(z), x) && lattice.leq(static_cast<int>(z), y);
  }
  int found = -1;
  for (std::size_t z = 0; z < n; ++z) {
    if (!common[z]) continue;
    const auto& ups = lattice.upper_covers(static_cast<int>(z));
    const bool maximal = std::none_of(ups.begin(), ups.end(), [&](int w) { return common[static_cast<std::size_t>(w)]; });
    if (!maximal) continue;
    if (found >= 0) {
      throw not_a_lattice("elements " + std::to_string(x) + " and " + std::to_string(y) + " have no unique meet");
    }
    found = static_cast<int>(z);
  }
  if (found < 0) {
    throw not_a_lattice("elements " + std::to_string(x) + " and " + std::to_string(y) + " have no common lower bound");
  }
  return found;
}

FinitePoset random_poset(std::size_t n, double density, Rng& rng) {
  if (!(density >= 0.0 && density <= 1.0)) throw domain_error("random_poset density must lie in [0, 1]");
  // Relation i < j drawn on index order, closed transitively, then reduced.
  std::vector<boost::dynamic_bitset<>> down(n, boost::dynamic_bitset<>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (rng.bernoulli(density)) {
        down[j].set(i);
        down[j] |= down[i];
      }
    }
  }
  std::vector<std::vector<int>> lower(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (!down[j].test(i)) continue;
      bool cover = true;
      for (std::size_t k = i + 1; k < j && cover; ++k) {
        if (down[j].test(k) && down[k].test(i)) cover = false;
      }
      if (cover) lower[j].push_back(static_cast<int>(i));
    }
  }
  return FinitePoset::from_lower_covers(std::move(lower));
}

nlohmann::json poset_to_json(const FinitePoset& poset) {
  nlohmann::json covers = nlohmann::json::array();
  for (const auto& [child, parent] : poset.cover_pairs()) covers.push_back({child, parent});
  return {{"n", poset.size()}, {"covers", covers}};
}

FinitePoset poset_from_json(const nlohmann::json& doc) {
  try {
    const auto n = doc.at("n").get<std::size_t>();
    std::vector<CoverPair> covers;
    for (const auto& pair : doc.at("covers")) {
      if (!pair.is_array() || pair.size() != 2) throw invalid_input("each cover must be a [child, parent] pair");
      covers.emplace_back(pair[0].get<int>(), pair[1].get<int>());
    }
    return build_poset(n, covers);
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input(std::string("malformed poset JSON: ") + e.what());
  }
}

std::string poset_to_dot(const FinitePoset& poset, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << name << " {\n  rankdir=BT;\n  node [shape=circle];\n";
  for (std::size_t x = 0; x < poset.size(); ++x) out << "  " << x << ";\n";
  for (const auto& [child, parent] : poset.cover_pairs()) out << "  " << child << " -> " << parent << " [arrowhead=none];\n";
  out << "}\n";
  return out.str();
}

}  // namespace ungar
