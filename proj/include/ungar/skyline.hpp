#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "ungar/rng.hpp"
#include "ungar/tamari.hpp"

namespace ungar {

/// Top row a_1..a_l (labels) over bottom row b_1..b_l (first-operation times).
struct TwoRowedArray {
  std::vector<std::size_t> top;
  std::vector<std::uint64_t> bottom;

  std::size_t size() const noexcept { return top.size(); }
  friend bool operator==(const TwoRowedArray&, const TwoRowedArray&) = default;
};

nlohmann::json two_rowed_to_json(const TwoRowedArray& array);

/// Skyline of the array with top row 1..m and bottom row c: a_1 = 1, a_2 is
/// the largest index attaining max c over [2, m], and each later a_i is the
/// largest index attaining the max over [2, a_{i-1} - 1], ending at a_l = 2.
/// b_i = c_{a_i}. Needs m >= 2.
TwoRowedArray skyline(std::span<const std::uint64_t> c);

/// a_1 = 1, n >= a_2 > ... > a_l = 2, b_1 > b_2 >= ... >= b_l. The clause
/// b_i <= n is not checked: first-operation times are unbounded.
bool is_childlike(const TwoRowedArray& array, std::size_t n);

/// Greedy summary of a decreasing sequence: keep the first element, then
/// repeatedly take the smallest later element that is at least the previous
/// pick divided by log n. Returns 0-based positions into `sequence`.
std::vector<std::size_t> summary_positions(std::span<const std::size_t> sequence, std::size_t n);

struct Summary {
  /// Column 1 of the array followed by the summary of a_2..a_l.
  TwoRowedArray array;
  /// Positions i_1 < ... < i_{l'} of the summary columns in the original
  /// array, 1-indexed (so i_1 = 2).
  std::vector<std::size_t> positions;
};

/// Throws invalid_input unless the array is childlike.
Summary summarize(const TwoRowedArray& array, std::size_t n);

/// Childlike, with summary endpoints a_{i_1} >= n / log n and a_{i_l'} <= (log n)^3.
bool is_good(const TwoRowedArray& array, std::size_t n);

struct LengthBounds {
  double lower = 0.0;
  double upper = 0.0;
};
/// log n / log log n - 3 and 2 log n / log log n + 2. Needs n > e.
LengthBounds good_array_length_bounds(std::size_t n);
/// Throws bound_violation if the summary length l' (columns after the first)
/// falls outside the bounds.
void check_good_array_length(const Summary& summary, std::size_t n);

/// f(x) = max(1, x exp(-p^8 exp(C1/p^2) (log log x)^4)) for x >= 16, else 1.
/// Throws domain_error for x < 1.
double lower_bound_f(double x, double p, double c1 = 10.0);

/// zeta^- n exp(-p^8 exp(C1/p^2) (log log n)^4): the lower bound on the
/// expected absorption time of Tam_n, with zeta^- supplied by the caller.
double tamari_lower_bound(double n, double p, double zeta_minus, double c1 = 10.0);

/// E_{[i,j],m}: g_i = m and g_l < m for l in [i+1, j]. Labels are 1-indexed; g[0] is g_1.
bool window_event(std::span<const std::uint64_t> g, std::size_t i, std::size_t j, std::uint64_t m);
/// E_A: the skyline of g equals A.
bool array_event(std::span<const std::uint64_t> g, const TwoRowedArray& array);

/// i.i.d. geometric(p) first-operation times g_1..g_n.
std::vector<std::uint64_t> sample_first_operation_times(std::size_t n, double p, Rng& rng);
/// The same law conditioned on E_{[1,n],m}: g_1 = m, the rest truncated below m. Needs m >= 2.
std::vector<std::uint64_t> sample_first_operation_times_given(std::size_t n, double p, std::uint64_t m, Rng& rng);

/// Named Bernoulli streams of the multi-stream simulator.
enum class Stream : std::uint64_t { S = 1, B, B_prime, C, D, D_prime, D_dagger };
const char* stream_name(Stream stream) noexcept;

/// Bernoulli(p) variables indexed by (stream, index, step), derived from the
/// seed by counter hashing: identical triples replay identically, distinct
/// triples are independent. With auditing on, every consultation is logged
/// for the current step.
class StreamBank {
 public:
  StreamBank(std::uint64_t seed, double p, bool audit = false) : seed_(seed), p_(p), audit_(audit) {}

  bool draw(Stream stream, std::uint64_t index, std::uint64_t step);

  struct Triple {
    Stream stream;
    std::uint64_t index;
    std::uint64_t step;
    friend bool operator==(const Triple&, const Triple&) = default;
  };
  /// Consultations since the last call, then clears the log.
  std::vector<Triple> take_log();

 private:
  std::uint64_t seed_;
  double p_;
  bool audit_;
  std::vector<Triple> log_;
};

struct Algorithm1Config {
  std::size_t n = 2;
  double p = 0.5;
  std::uint64_t seed = 0;
  /// The constant in the window indices 2 ceil(c log log n) and 2 ceil(c (log log n)^3).
  double window_coefficient = 201.0;
  /// Check that each step consults exactly one fresh triple per vertex.
  bool audit = true;
  bool keep_picks = false;
};

struct Algorithm1Result {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double p = 0.0;
  std::vector<std::uint64_t> g;
  TwoRowedArray skyline;
  TwoRowedArray summary;
  std::vector<std::size_t> summary_positions;
  bool childlike = false;
  bool good = false;
  /// Good, but the summary is too short for the window indices to exist.
  bool degenerate = false;
  /// t[j-2] for j in [2, l]: steps after step g_1 - 1 until vertex 1 is no
  /// longer the parent of a_j. Filled only for childlike runs.
  std::vector<std::uint64_t> t;
  std::size_t absorption = 0;
  /// Per-vertex count of steps (up to absorption) on which it was picked; index v-1.
  std::vector<std::uint64_t> pick_counts;
  /// Per-step picked labels, up to absorption, when requested.
  std::vector<std::vector<int>> picks;
  std::size_t audited_steps = 0;
};

/// Simulates the Tamari chain from the path using the multi-stream selection
/// rules, until the forest is an antichain. The g values are read from the S
/// streams in full, so they are defined even for vertices that never fire
/// before absorption.
Algorithm1Result algorithm1_run(const Algorithm1Config& config);

nlohmann::json algorithm1_to_json(const Algorithm1Result& result);

/// Plain simulation of the Tamari chain from the path: every vertex is picked
/// independently with probability p each step.
struct NaiveTamariRun {
  std::size_t absorption = 0;
  /// h[v-1]: first step on which v was picked (draws continue past absorption
  /// until every vertex has been picked; the forest no longer changes then).
  std::vector<std::uint64_t> first_pick;
  std::vector<std::uint64_t> pick_counts;
  /// states[t] is the forest after t steps, when requested.
  std::vector<OrderedForest> states;
};

NaiveTamariRun naive_tamari_run(std::size_t n, double p, Rng& rng, bool keep_states = false);

}  // namespace ungar
