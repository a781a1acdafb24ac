#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace ungar {

/// A permutation of [n] in one-line notation. Positions and values are
/// 1-indexed in the public interface.
class Permutation {
 public:
  Permutation() = default;
  /// Validates that word is a bijection onto 1..n; throws invalid_input.
  explicit Permutation(std::vector<int> word);

  static Permutation identity(std::size_t n);
  static Permutation decreasing(std::size_t n);
  /// Accepts "416523" (single digits, n <= 9) or separated values "4,1,6,5,2,3".
  static Permutation parse(const std::string& text);

  std::size_t size() const noexcept { return word_.size(); }
  /// sigma(i) for 1 <= i <= n.
  int at(std::size_t i) const { return word_.at(i - 1); }
  const std::vector<int>& word() const noexcept { return word_; }
  /// Position of value v, 1-indexed.
  std::vector<int> positions() const;
  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  struct trusted_tag {};
  Permutation(std::vector<int> word, trusted_tag) : word_(std::move(word)) {}
  friend Permutation make_permutation_unchecked(std::vector<int> word);

  std::vector<int> word_;
};

/// Skips validation; for internal hot paths that preserve bijectivity.
Permutation make_permutation_unchecked(std::vector<int> word);

struct PermutationHash {
  std::size_t operator()(const Permutation& sigma) const noexcept;
};

/// Positions i in [n-1] with sigma(i) > sigma(i+1).
std::vector<int> descents(const Permutation& sigma);
std::size_t inversion_count(const Permutation& sigma);

/// sigma composed with the adjacent transposition (i, i+1): swaps entries i and i+1.
Permutation swap_adjacent(const Permutation& sigma, int i);

/// Ungar move: each maximal run of consecutive selected descents i..i+k
/// reverses the factor sigma(i..i+k+1). Throws invalid_selection unless
/// selected is a subset of the descents.
Permutation ungar_move(const Permutation& sigma, std::span<const int> selected);
/// The Ungar move selecting every descent.
Permutation maximal_ungar_move(const Permutation& sigma);

/// Right weak order: Inv(sigma) is contained in Inv(tau), where Inv holds the
/// value pairs a < b with b appearing before a. Throws size_mismatch.
bool weak_leq(const Permutation& sigma, const Permutation& tau);

/// Greatest lower bound in the right weak order. The non-inversion set of the
/// meet is the transitive closure of the union of non-inversion sets.
Permutation weak_meet(std::span<const Permutation> elements);

/// All of S_n in lexicographic order.
std::vector<Permutation> all_permutations(std::size_t n);

/// The lattice-path projection at k together with the order ideal of
/// R_{k, n-k} it cuts out. Grid element (i, j) has index i * (n - k) + j and
/// (0, 0) is the minimum; the identity maps to the empty ideal.
struct PathProjection {
  std::string path;
  std::size_t k = 0;
  std::size_t n = 0;
  std::vector<bool> ideal;
};

PathProjection project_pi_k(const Permutation& sigma, std::size_t k);

/// True when the values 1..k occupy positions 1..k.
bool prefix_sorted(const Permutation& sigma, std::size_t k);

/// First index t with trajectory[t] prefix-sorted at k (trajectory[0] is the
/// start). Throws not_reached if no state qualifies.
std::size_t sorted_prefix_time(std::span<const Permutation> trajectory, std::size_t k);

nlohmann::json permutation_to_json(const Permutation& sigma);
Permutation permutation_from_json(const nlohmann::json& doc);

}  // namespace ungar
