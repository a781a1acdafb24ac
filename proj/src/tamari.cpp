#include "ungar/tamari.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ungar/errors.hpp"

namespace ungar {

OrderedForest OrderedForest::antichain(std::size_t n) {
  return from_parents(std::vector<int>(n, 0));
}

OrderedForest OrderedForest::path(std::size_t n) {
  std::vector<int> parent(n);
  for (std::size_t v = 0; v < n; ++v) parent[v] = static_cast<int>(v);
  return from_parents(parent);
}

OrderedForest OrderedForest::from_parents(const std::vector<int>& parent) {
  OrderedForest forest;
  const std::size_t n = parent.size();
  forest.parent_.assign(n + 1, 0);
  forest.children_.assign(n + 1, {});
  for (std::size_t v = 1; v <= n; ++v) {
    const int p = parent[v - 1];
    // A preorder label always exceeds its parent's label.
    if (p < 0 || static_cast<std::size_t>(p) >= v) {
      throw invalid_input("vertex " + std::to_string(v) + " has parent " + std::to_string(p) +
                          "; preorder labels need parent < child");
    }
    forest.parent_[v] = p;
    forest.children_[static_cast<std::size_t>(p)].push_back(static_cast<int>(v));
  }
  if (!forest.has_preorder_labels()) throw invalid_input("labels are not a left-to-right preorder traversal");
  return forest;
}

std::vector<int> OrderedForest::internal_vertices() const {
  std::vector<int> out;
  for (std::size_t v = 1; v < children_.size(); ++v) {
    if (!children_[v].empty()) out.push_back(static_cast<int>(v));
  }
  return out;
}

std::size_t OrderedForest::descendant_count(int v) const {
  std::size_t count = 0;
  std::vector<int> stack(children(v).begin(), children(v).end());
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    ++count;
    const auto& ch = children_[static_cast<std::size_t>(u)];
    stack.insert(stack.end(), ch.begin(), ch.end());
  }
  return count;
}

std::size_t OrderedForest::total_descendants() const {
  // Sum over vertices of proper descendants equals sum over vertices of depth.
  std::size_t total = 0;
  std::vector<std::size_t> depth(parent_.size(), 0);
  for (std::size_t v = 1; v < parent_.size(); ++v) {
    const int p = parent_[v];
    depth[v] = p == 0 ? 0 : depth[static_cast<std::size_t>(p)] + 1;
    total += depth[v];
  }
  return total;
}

void OrderedForest::operate(int v) {
  auto& own = children_.at(static_cast<std::size_t>(v));
  if (own.empty()) return;
  const int moved = own.back();
  own.pop_back();
  const int w = parent_[static_cast<std::size_t>(v)];
  auto& siblings = children_[static_cast<std::size_t>(w)];
  const auto at = std::find(siblings.begin(), siblings.end(), v);
  siblings.insert(at + 1, moved);
  parent_[static_cast<std::size_t>(moved)] = w;
#ifndef NDEBUG
  if (!has_preorder_labels()) throw invariant_violation("operation broke preorder labels");
#endif
}

bool OrderedForest::has_preorder_labels() const {
  int expected = 1;
  std::vector<int> stack(children_[0].rbegin(), children_[0].rend());
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (v != expected++) return false;
    const auto& ch = children_[static_cast<std::size_t>(v)];
    stack.insert(stack.end(), ch.rbegin(), ch.rend());
  }
  return static_cast<std::size_t>(expected) == parent_.size();
}

std::vector<int> OrderedForest::right_to_left_labels() const {
  std::vector<int> r(parent_.size(), 0);
  int next = 1;
  std::vector<int> stack(children_[0].begin(), children_[0].end());
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    r[static_cast<std::size_t>(v)] = next++;
    const auto& ch = children_[static_cast<std::size_t>(v)];
    stack.insert(stack.end(), ch.begin(), ch.end());
  }
  return r;
}

OrderedForest forest_operate(OrderedForest forest, int v) {
  forest.operate(v);
  return forest;
}

OrderedForest forest_ungar_move(OrderedForest forest, std::vector<int> picked) {
  std::sort(picked.begin(), picked.end());
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  for (int v : picked) {
    if (v < 1 || static_cast<std::size_t>(v) > forest.size()) throw invalid_selection("vertex label out of range");
    forest.operate(v);
  }
  return forest;
}

OrderedForest restrict_forest(const OrderedForest& forest, int m) {
  const int n = static_cast<int>(forest.size());
  if (m < 1 || m > n) throw domain_error("restrict_forest needs 1 <= m <= n");
  std::vector<int> parent;
  parent.reserve(static_cast<std::size_t>(n - m + 1));
  for (int v = m; v <= n; ++v) {
    const int p = forest.parent(v);
    parent.push_back(p >= m ? p - m + 1 : 0);
  }
  return OrderedForest::from_parents(parent);
}

bool is_312_avoiding(const Permutation& sigma) {
  const auto& w = sigma.word();
  const std::size_t n = w.size();
  int prefix_max = 0;
  // Middle position j plays the '1'; the best '3' is the largest earlier value.
  for (std::size_t j = 0; j < n; ++j) {
    if (prefix_max > w[j]) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (w[k] > w[j] && w[k] < prefix_max) return false;
      }
    }
    prefix_max = std::max(prefix_max, w[j]);
  }
  return true;
}

Av312Permutation::Av312Permutation(Permutation sigma) : sigma_(std::move(sigma)) {
  if (!is_312_avoiding(sigma_)) throw not_312_avoiding(sigma_.to_string() + " contains a 312 pattern");
}

namespace {

bool swap_allowed(const std::vector<int>& w, std::size_t i) {
  if (w[i] < w[i + 1]) return false;
  for (std::size_t j = i + 2; j < w.size(); ++j) {
    if (w[j] > w[i + 1] && w[j] < w[i]) return true;
  }
  return false;
}

}  // namespace

std::vector<int> allowable_swaps(const Permutation& sigma) {
  std::vector<int> out;
  const auto& w = sigma.word();
  for (std::size_t i = 0; i + 2 < w.size(); ++i) {
    if (swap_allowed(w, i)) out.push_back(static_cast<int>(i + 1));
  }
  return out;
}

Av312Permutation project_down(const Permutation& sigma) {
  auto w = sigma.word();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 2 < w.size(); ++i) {
      if (swap_allowed(w, i)) {
        std::swap(w[i], w[i + 1]);
        changed = true;
      }
    }
  }
  return Av312Permutation(make_permutation_unchecked(std::move(w)));
}

std::vector<Permutation> covers_av312(const Av312Permutation& sigma) {
  std::vector<Permutation> out;
  for (int i : descents(sigma.permutation())) {
    out.push_back(project_down(swap_adjacent(sigma.permutation(), i)).permutation());
  }
  return out;
}

Permutation av312_ungar_move(const Permutation& sigma, std::span<const int> selected) {
  if (selected.empty()) return sigma;
  return project_down(ungar_move(sigma, selected)).permutation();
}

OrderedForest phi(const Av312Permutation& sigma) {
  const auto& w = sigma.permutation().word();
  const std::size_t n = w.size();
  // In a 312-avoiding word the parent of q_i is the next smaller entry.
  std::vector<int> parent(n, 0);
  std::vector<std::size_t> pending;
  for (std::size_t j = 0; j < n; ++j) {
    while (!pending.empty() && w[pending.back()] > w[j]) {
      parent[static_cast<std::size_t>(w[pending.back()] - 1)] = w[j];
      pending.pop_back();
    }
    pending.push_back(j);
  }
  return OrderedForest::from_parents(parent);
}

Av312Permutation phi_inverse(const OrderedForest& forest) {
  const std::size_t n = forest.size();
  const auto r = forest.right_to_left_labels();
  std::vector<int> word(n, 0);
  for (std::size_t v = 1; v <= n; ++v) word[n - static_cast<std::size_t>(r[v])] = static_cast<int>(v);
  return Av312Permutation(Permutation(std::move(word)));
}

std::vector<Permutation> enumerate_av312(std::size_t n) {
  // words[s] holds Av_s(312) over values 1..s.
  std::vector<std::vector<std::vector<int>>> words(n + 1);
  words[0].push_back({});
  for (std::size_t s = 1; s <= n; ++s) {
    for (std::size_t k = 0; k < s; ++k) {
      for (const auto& alpha : words[k]) {
        for (const auto& beta : words[s - 1 - k]) {
          std::vector<int> w;
          w.reserve(s);
          for (int v : alpha) w.push_back(v + 1);
          w.push_back(1);
          for (int v : beta) w.push_back(v + static_cast<int>(k) + 1);
          words[s].push_back(std::move(w));
        }
      }
    }
  }
  std::vector<Permutation> out;
  out.reserve(words[n].size());
  for (auto& w : words[n]) out.push_back(make_permutation_unchecked(std::move(w)));
  return out;
}

std::vector<OrderedForest> all_ordered_forests(std::size_t n) {
  // shapes[s]: parent arrays on labels 1..s, 0 marking roots.
  std::vector<std::vector<std::vector<int>>> shapes(n + 1);
  shapes[0].push_back({});
  for (std::size_t s = 1; s <= n; ++s) {
    for (std::size_t below = 0; below < s; ++below) {
      const std::size_t rest = s - 1 - below;
      for (const auto& inner : shapes[below]) {
        for (const auto& tail : shapes[rest]) {
          std::vector<int> parent{0};
          for (int p : inner) parent.push_back(p == 0 ? 1 : p + 1);
          const int shift = static_cast<int>(below) + 1;
          for (int p : tail) parent.push_back(p == 0 ? 0 : p + shift);
          shapes[s].push_back(std::move(parent));
        }
      }
    }
  }
  std::vector<OrderedForest> out;
  out.reserve(shapes[n].size());
  for (const auto& parent : shapes[n]) out.push_back(OrderedForest::from_parents(parent));
  return out;
}

nlohmann::json forest_to_json(const OrderedForest& forest) {
  nlohmann::json children = nlohmann::json::array();
  for (std::size_t v = 1; v <= forest.size(); ++v) children.push_back(forest.children(static_cast<int>(v)));
  return {{"n", forest.size()}, {"parent", forest.parents()}, {"children", children}};
}

OrderedForest forest_from_json(const nlohmann::json& doc) {
  try {
    const auto parent = doc.at("parent").get<std::vector<int>>();
    if (doc.contains("n") && doc.at("n").get<std::size_t>() != parent.size()) {
      throw size_mismatch("forest JSON: n disagrees with parent array length");
    }
    auto forest = OrderedForest::from_parents(parent);
    if (doc.contains("children")) {
      const auto& children = doc.at("children");
      for (std::size_t v = 1; v <= forest.size(); ++v) {
        if (children.at(v - 1).get<std::vector<int>>() != forest.children(static_cast<int>(v))) {
          throw invalid_input("forest JSON: children lists disagree with parent array");
        }
      }
    }
    return forest;
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input(std::string("malformed forest JSON: ") + e.what());
  }
}

std::string forest_to_dot(const OrderedForest& forest, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << name << " {\n  node [shape=circle];\n  ordering=out;\n";
  for (std::size_t v = 1; v <= forest.size(); ++v) out << "  " << v << ";\n";
  for (std::size_t v = 1; v <= forest.size(); ++v) {
    for (int c : forest.children(static_cast<int>(v))) out << "  " << v << " -> " << c << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace ungar
