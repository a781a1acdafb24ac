#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "ungar/permutation.hpp"

namespace ungar {

/// An ordered forest whose vertices are named by their left-to-right preorder
/// labels 1..n. Children and roots are kept sorted by label, which for a
/// preorder-labeled forest is the same as left-to-right order.
class OrderedForest {
 public:
  OrderedForest() = default;

  /// n isolated vertices (the bottom of the Tamari lattice).
  static OrderedForest antichain(std::size_t n);
  /// The path 1 -> 2 -> ... -> n (the top of the Tamari lattice).
  static OrderedForest path(std::size_t n);
  /// parent[v-1] is the parent label of v, or 0 for a root. Throws
  /// invalid_input unless the labels form a preorder traversal.
  static OrderedForest from_parents(const std::vector<int>& parent);

  std::size_t size() const noexcept { return parent_.size() - 1; }
  /// Parent label, 0 for roots.
  int parent(int v) const { return parent_.at(static_cast<std::size_t>(v)); }
  const std::vector<int>& children(int v) const { return children_.at(static_cast<std::size_t>(v)); }
  const std::vector<int>& roots() const noexcept { return children_[0]; }
  bool is_leaf(int v) const { return children(v).empty(); }
  /// Parent labels of 1..n, 0 for roots.
  std::vector<int> parents() const { return {parent_.begin() + 1, parent_.end()}; }
  /// Non-leaf vertices in increasing label order.
  std::vector<int> internal_vertices() const;

  /// Number of proper descendants.
  std::size_t descendant_count(int v) const;
  std::size_t total_descendants() const;

  /// Operates on v in place: a leaf is left alone; otherwise the rightmost
  /// child of v moves to v's parent just right of v, or becomes a root just
  /// right of v's tree.
  void operate(int v);

  /// True when labels coincide with a left-to-right preorder traversal.
  bool has_preorder_labels() const;
  /// Labels from the right-to-left preorder traversal: rightmost tree first,
  /// root before its children, children visited right to left. Index v holds r(v).
  std::vector<int> right_to_left_labels() const;

  friend bool operator==(const OrderedForest& a, const OrderedForest& b) { return a.parent_ == b.parent_; }

 private:
  // Slot 0 is a virtual super-root whose children are the roots.
  std::vector<int> parent_{0};
  std::vector<std::vector<int>> children_{{}};
};

/// Applies operations to each picked vertex in increasing label order.
OrderedForest forest_ungar_move(OrderedForest forest, std::vector<int> picked);
OrderedForest forest_operate(OrderedForest forest, int v);

/// The induced subforest on labels m..n, relabeled 1..n-m+1.
OrderedForest restrict_forest(const OrderedForest& forest, int m);

bool is_312_avoiding(const Permutation& sigma);

/// A permutation certified to avoid 312.
class Av312Permutation {
 public:
  /// Throws not_312_avoiding.
  explicit Av312Permutation(Permutation sigma);
  const Permutation& permutation() const noexcept { return sigma_; }
  std::size_t size() const noexcept { return sigma_.size(); }
  friend bool operator==(const Av312Permutation&, const Av312Permutation&) = default;

 private:
  Permutation sigma_;
};

/// Positions i (1-indexed) admitting an allowable swap: some j > i+1 has
/// sigma(i+1) < sigma(j) < sigma(i).
std::vector<int> allowable_swaps(const Permutation& sigma);

/// The projection to Av_n(312): apply allowable swaps, scanning left to
/// right, until none remain.
Av312Permutation project_down(const Permutation& sigma);

/// Elements covered by sigma in Av_n(312), one per descent, in descent order.
std::vector<Permutation> covers_av312(const Av312Permutation& sigma);

/// Meet in Av_n(312) of sigma with the covers at the selected descents.
Permutation av312_ungar_move(const Permutation& sigma, std::span<const int> selected);

/// The forest of a 312-avoiding permutation: q_i is a child of q_j when
/// i < j, sigma(i) > sigma(j), and no value strictly between them sits
/// strictly between positions i and j. Vertex q_i carries label sigma(i).
OrderedForest phi(const Av312Permutation& sigma);
/// Inverse of phi: sigma(n + 1 - r(v)) = v for every label v.
Av312Permutation phi_inverse(const OrderedForest& forest);

/// Av_n(312) via the decomposition sigma = alpha 1 beta with alpha < beta.
std::vector<Permutation> enumerate_av312(std::size_t n);
/// All ordered forests on n vertices, generated structurally.
std::vector<OrderedForest> all_ordered_forests(std::size_t n);

nlohmann::json forest_to_json(const OrderedForest& forest);
OrderedForest forest_from_json(const nlohmann::json& doc);
std::string forest_to_dot(const OrderedForest& forest, const std::string& name = "F");

}  // namespace ungar
