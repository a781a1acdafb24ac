#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include "json.hpp"

#include "ungar/rng.hpp"

namespace ungar {

inline constexpr std::size_t default_closure_cap = 4096;
inline constexpr std::size_t default_state_cap = 1000000;
inline constexpr std::size_t default_chain_cap = 1000000;

/// A cover pair (child, parent): parent covers child.
using CoverPair = std::pair<int, int>;

/// Finite poset on elements 0..N-1 stored by its Hasse diagram.
///
/// The order relation is cached as one bitset per element (its principal
/// down-set) when N is at most the closure cap; larger posets answer leq by
/// walking lower covers.
class FinitePoset {
 public:
  FinitePoset() = default;

  /// Trusted constructor: lower[y] lists the elements y covers. The caller
  /// guarantees acyclicity and absence of redundant edges.
  static FinitePoset from_lower_covers(std::vector<std::vector<int>> lower,
                                       std::size_t closure_cap = default_closure_cap);

  std::size_t size() const noexcept { return lower_.size(); }

  /// Elements covered by x (cov_P(x)).
  const std::vector<int>& lower_covers(int x) const { return lower_.at(static_cast<std::size_t>(x)); }
  /// Elements covering x.
  const std::vector<int>& upper_covers(int x) const { return upper_.at(static_cast<std::size_t>(x)); }

  bool leq(int x, int y) const;
  bool less(int x, int y) const { return x != y && leq(x, y); }

  std::vector<int> minimal_elements() const;
  std::vector<int> maximal_elements() const;
  /// A linear extension, smaller elements first.
  const std::vector<int>& topological_order() const noexcept { return topo_; }
  std::vector<CoverPair> cover_pairs() const;
  bool has_closure_cache() const noexcept { return !down_.empty() || lower_.empty(); }

 private:
  std::vector<std::vector<int>> lower_;
  std::vector<std::vector<int>> upper_;
  std::vector<int> topo_;
  std::vector<boost::dynamic_bitset<>> down_;
};

/// Validating constructor. Throws cycle_detected, redundant_cover, or
/// invalid_input for out-of-range indices.
FinitePoset build_poset(std::size_t n, const std::vector<CoverPair>& covers,
                        std::size_t closure_cap = default_closure_cap);

FinitePoset chain_poset(std::size_t length);
FinitePoset antichain_poset(std::size_t size);

/// The grid R_{rows,cols}: pairs (i, j) ordered componentwise.
struct GridPoset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  FinitePoset poset;

  int index(std::size_t i, std::size_t j) const { return static_cast<int>(i * cols + j); }
  std::pair<std::size_t, std::size_t> coords(int x) const {
    return {static_cast<std::size_t>(x) / cols, static_cast<std::size_t>(x) % cols};
  }
};

GridPoset make_grid(std::size_t rows, std::size_t cols);

/// A downward-closed subset of a poset. Holds a pointer to the poset, which
/// must outlive it.
class OrderIdeal {
 public:
  /// Validates downward closure; throws invalid_input otherwise.
  OrderIdeal(const FinitePoset& poset, std::vector<bool> members);

  static OrderIdeal full(const FinitePoset& poset);
  static OrderIdeal empty(const FinitePoset& poset);

  const FinitePoset& poset() const noexcept { return *poset_; }
  const std::vector<bool>& members() const noexcept { return members_; }
  bool contains(int x) const { return members_.at(static_cast<std::size_t>(x)); }
  std::size_t count() const noexcept;
  /// Members with no upper cover inside the ideal.
  std::vector<int> maximal_elements() const;

  friend bool operator==(const OrderIdeal& a, const OrderIdeal& b) { return a.members_ == b.members_; }

 private:
  const FinitePoset* poset_;
  std::vector<bool> members_;
};

bool is_downward_closed(const FinitePoset& poset, const std::vector<bool>& members);

/// Maximal elements of the ideal given by a membership mask (no validation).
std::vector<int> ideal_maximal_elements(const FinitePoset& poset, const std::vector<bool>& members);

/// J(P) materialized: element k of `lattice` is the ideal `ideals[k]`.
/// Element 0 is the full ideal (top); the empty ideal is `bottom`.
struct IdealLatticeTable {
  FinitePoset lattice;
  std::vector<std::vector<bool>> ideals;
  int bottom = 0;
};

/// Enumerates J(P). Covers of an ideal are the ideals obtained by removing
/// one of its maximal elements. Throws state_explosion beyond cap.
IdealLatticeTable order_ideals(const FinitePoset& poset, std::size_t cap = default_state_cap);

/// All maximal chains, each listed from a minimal to a maximal element.
/// Throws chain_explosion beyond cap.
std::vector<std::vector<int>> maximal_chains(const FinitePoset& poset, std::size_t cap = default_chain_cap);

/// Greatest lower bound in a poset assumed to be a lattice. Throws
/// not_a_lattice when x and y have no unique maximal common lower bound.
int meet(const FinitePoset& lattice, int x, int y);

/// Random poset on n elements: each pair i < j becomes a relation with
/// probability density, then the relation is transitively reduced.
FinitePoset random_poset(std::size_t n, double density, Rng& rng);

nlohmann::json poset_to_json(const FinitePoset& poset);
FinitePoset poset_from_json(const nlohmann::json& doc);
/// Hasse diagram in DOT, parents drawn above children.
std::string poset_to_dot(const FinitePoset& poset, const std::string& name = "P");

}  // namespace ungar
