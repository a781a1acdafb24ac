#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ungar/permutation.hpp"
#include "ungar/poset.hpp"
#include "ungar/tamari.hpp"

namespace ungar {

// Lattice backends for the chain engine. Each backend exposes:
//   State                     value type of lattice elements
//   top(), is_bottom(s)
//   covers(s)                 identifiers of the elements s covers
//   apply(s, picked)          meet of s with the picked covers (ids ascending)
//   encode(s)                 canonical integer key
//   to_json(s)
// Cover identifiers are descents for permutations, non-leaf labels for
// forests, maximal elements for ideals, and element indices for explicit lattices.

/// S_n under the right weak order.
class SymmetricGroupLattice {
 public:
  using State = Permutation;
  explicit SymmetricGroupLattice(std::size_t n) : n_(n) {}
  std::string name() const { return "sn"; }
  std::size_t n() const noexcept { return n_; }
  State top() const { return Permutation::decreasing(n_); }
  bool is_bottom(const State& s) const { return descents(s).empty(); }
  std::vector<int> covers(const State& s) const { return descents(s); }
  State apply(const State& s, std::span<const int> picked) const { return ungar_move(s, picked); }
  std::vector<int> encode(const State& s) const { return s.word(); }
  nlohmann::json to_json(const State& s) const { return permutation_to_json(s); }

 private:
  std::size_t n_;
};

/// Tam_n realized as Av_n(312) with the induced weak order.
class TamariPermutationLattice {
 public:
  using State = Permutation;
  explicit TamariPermutationLattice(std::size_t n) : n_(n) {}
  std::string name() const { return "tamari-av312"; }
  std::size_t n() const noexcept { return n_; }
  State top() const { return Permutation::decreasing(n_); }
  bool is_bottom(const State& s) const { return descents(s).empty(); }
  std::vector<int> covers(const State& s) const { return descents(s); }
  State apply(const State& s, std::span<const int> picked) const { return av312_ungar_move(s, picked); }
  std::vector<int> encode(const State& s) const { return s.word(); }
  nlohmann::json to_json(const State& s) const { return permutation_to_json(s); }

 private:
  std::size_t n_;
};

/// Tam_n realized as ordered forests under vertex operations.
class TamariForestLattice {
 public:
  using State = OrderedForest;
  explicit TamariForestLattice(std::size_t n) : n_(n) {}
  std::string name() const { return "tamari"; }
  std::size_t n() const noexcept { return n_; }
  State top() const { return OrderedForest::path(n_); }
  bool is_bottom(const State& s) const { return s.roots().size() == s.size(); }
  std::vector<int> covers(const State& s) const { return s.internal_vertices(); }
  State apply(const State& s, std::span<const int> picked) const {
    return forest_ungar_move(s, std::vector<int>(picked.begin(), picked.end()));
  }
  std::vector<int> encode(const State& s) const { return s.parents(); }
  nlohmann::json to_json(const State& s) const { return forest_to_json(s); }

 private:
  std::size_t n_;
};

/// J(P): states are order ideals; a step deletes a subset of maximal elements.
class IdealLattice {
 public:
  using State = std::vector<bool>;
  explicit IdealLattice(FinitePoset poset) : poset_(std::make_shared<const FinitePoset>(std::move(poset))) {}
  std::string name() const { return "ideal"; }
  const FinitePoset& poset() const noexcept { return *poset_; }
  State top() const { return State(poset_->size(), true); }
  bool is_bottom(const State& s) const;
  std::vector<int> covers(const State& s) const { return ideal_maximal_elements(*poset_, s); }
  State apply(const State& s, std::span<const int> picked) const;
  std::vector<int> encode(const State& s) const { return {s.begin(), s.end()}; }
  nlohmann::json to_json(const State& s) const;

 private:
  std::shared_ptr<const FinitePoset> poset_;
};

/// Any lattice given explicitly by its Hasse diagram.
class ExplicitLattice {
 public:
  using State = int;
  /// Throws not_a_lattice unless there is a unique top and bottom.
  explicit ExplicitLattice(FinitePoset lattice);
  /// The chain with `length` cover steps.
  static ExplicitLattice chain(std::size_t length) { return ExplicitLattice(chain_poset(length + 1)); }

  std::string name() const { return "explicit"; }
  const FinitePoset& lattice() const noexcept { return *lattice_; }
  State top() const noexcept { return top_; }
  bool is_bottom(State s) const noexcept { return s == bottom_; }
  std::vector<int> covers(State s) const { return lattice_->lower_covers(s); }
  State apply(State s, std::span<const int> picked) const;
  std::vector<int> encode(State s) const { return {s}; }
  nlohmann::json to_json(State s) const { return s; }

 private:
  std::shared_ptr<const FinitePoset> lattice_;
  int top_ = 0;
  int bottom_ = 0;
};

}  // namespace ungar
