#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ungar/errors.hpp"
#include "ungar/poset.hpp"
#include "ungar/rng.hpp"
#include "ungar/stats.hpp"

namespace ungar {

template <class L>
concept LatticeBackend = requires(const L& lattice, const typename L::State& s, std::span<const int> picked) {
  { lattice.top() } -> std::convertible_to<typename L::State>;
  { lattice.is_bottom(s) } -> std::convertible_to<bool>;
  { lattice.covers(s) } -> std::convertible_to<std::vector<int>>;
  { lattice.apply(s, picked) } -> std::convertible_to<typename L::State>;
  { lattice.encode(s) } -> std::convertible_to<std::vector<int>>;
  { lattice.name() } -> std::convertible_to<std::string>;
};

/// A seeded trajectory. states[0] is the start when states are kept;
/// picks[t] lists the covers selected at step t + 1.
template <class State>
struct ChainRun {
  std::string backend;
  double p = 1.0;
  std::uint64_t seed = 0;
  std::vector<State> states;
  std::vector<std::vector<int>> picks;
  std::size_t steps = 0;
  /// Steps to reach the bottom; empty when the run was truncated first.
  std::optional<std::size_t> absorption;
};

struct RunOptions {
  bool keep_states = false;
  bool keep_picks = false;
  /// 0 means no limit.
  std::size_t max_steps = 0;
};

/// One transition: each cover is selected independently with probability p
/// and the state moves to the meet of itself with the selection.
template <LatticeBackend L>
typename L::State step(const L& lattice, const typename L::State& state, double p, Rng& rng,
                       std::vector<int>* picked = nullptr) {
  std::vector<int> chosen;
  for (int c : lattice.covers(state)) {
    if (rng.bernoulli(p)) chosen.push_back(c);
  }
  if (picked != nullptr) *picked = chosen;
  if (chosen.empty()) return state;
  return lattice.apply(state, chosen);
}

template <LatticeBackend L>
ChainRun<typename L::State> run_chain(const L& lattice, double p, std::uint64_t seed, const RunOptions& options = {},
                                      std::optional<typename L::State> start = std::nullopt) {
  require_probability(p);
  ChainRun<typename L::State> run;
  run.backend = lattice.name();
  run.p = p;
  run.seed = seed;
  Rng rng(seed);
  auto state = start ? *start : lattice.top();
  if (options.keep_states) run.states.push_back(state);
  std::vector<int> picked;
  while (!lattice.is_bottom(state)) {
    if (options.max_steps != 0 && run.steps >= options.max_steps) return run;
    state = step(lattice, state, p, rng, &picked);
    ++run.steps;
    if (options.keep_states) run.states.push_back(state);
    if (options.keep_picks) run.picks.push_back(picked);
  }
  run.absorption = run.steps;
  return run;
}

/// Absorption time of a single trajectory driven by rng; empty when max_steps
/// (nonzero) is hit first.
template <LatticeBackend L>
std::optional<std::size_t> absorption_time(const L& lattice, typename L::State state, double p, Rng& rng,
                                           std::size_t max_steps = 0) {
  std::size_t steps = 0;
  while (!lattice.is_bottom(state)) {
    if (max_steps != 0 && steps >= max_steps) return std::nullopt;
    state = step(lattice, state, p, rng);
    ++steps;
  }
  return steps;
}

struct IntVectorHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::uint64_t h = v.size();
    for (int x : v) h = mix64(h ^ static_cast<std::uint32_t>(x)) + 0x9e3779b97f4a7c15ULL;
    return static_cast<std::size_t>(h);
  }
};

/// Transition structure of the chain restricted to the states reachable from
/// a start state. Index 0 is the start.
template <class State>
struct TransitionTable {
  std::vector<State> states;
  /// (target, probability) pairs per state, self-loop included, targets distinct.
  std::vector<std::vector<std::pair<std::size_t, double>>> transitions;
};

inline constexpr std::size_t max_exact_covers = 20;

template <LatticeBackend L>
TransitionTable<typename L::State> transition_table(const L& lattice, double p, std::size_t state_cap = default_state_cap,
                                                    std::optional<typename L::State> start = std::nullopt) {
  require_probability(p);
  TransitionTable<typename L::State> table;
  std::unordered_map<std::vector<int>, std::size_t, IntVectorHash> index;
  auto intern = [&](const typename L::State& s) {
    auto key = lattice.encode(s);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (table.states.size() >= state_cap) throw state_explosion("exact solver state enumeration", state_cap);
    const std::size_t id = table.states.size();
    index.emplace(std::move(key), id);
    table.states.push_back(s);
    table.transitions.emplace_back();
    return id;
  };
  intern(start ? *start : lattice.top());
  for (std::size_t k = 0; k < table.states.size(); ++k) {
    const auto state = table.states[k];
    const auto covers = lattice.covers(state);
    const std::size_t c = covers.size();
    if (c > max_exact_covers) throw state_explosion("cover subsets per state", std::size_t{1} << max_exact_covers);
    std::unordered_map<std::size_t, double> aggregate;
    std::vector<int> chosen;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << c); ++mask) {
      chosen.clear();
      for (std::size_t b = 0; b < c; ++b) {
        if (mask >> b & 1U) chosen.push_back(covers[b]);
      }
      const std::size_t picked = chosen.size();
      const double weight = std::pow(p, static_cast<double>(picked)) * std::pow(1.0 - p, static_cast<double>(c - picked));
      if (weight == 0.0) continue;
      const std::size_t target = chosen.empty() ? k : intern(lattice.apply(state, chosen));
      aggregate[target] += weight;
    }
    std::vector<std::pair<std::size_t, double>> row(aggregate.begin(), aggregate.end());
    std::sort(row.begin(), row.end());
    table.transitions[k] = std::move(row);
  }
  return table;
}

template <class State>
struct ExactResult {
  std::vector<State> states;
  /// expected[k] = expected absorption time from states[k].
  std::vector<double> expected;
  /// Value at the start state (the top unless overridden).
  double start_value = 0.0;
};

namespace detail {

/// Back-substitution over an absorbing chain whose transitions only move
/// down apart from self-loops. Throws singular_system if that fails.
std::vector<double> solve_downward_chain(const std::vector<std::vector<std::pair<std::size_t, double>>>& transitions,
                                         const std::vector<bool>& absorbing);

}  // namespace detail

/// Exact E_L(x) for every x reachable from the start, by solving
/// E(x) = 1 + sum_y P(x -> y) E(y) with E = 0 at the bottom.
template <LatticeBackend L>
ExactResult<typename L::State> exact_expected_absorption(const L& lattice, double p, std::size_t state_cap = default_state_cap,
                                                         std::optional<typename L::State> start = std::nullopt) {
  auto table = transition_table(lattice, p, state_cap, std::move(start));
  std::vector<bool> absorbing(table.states.size());
  for (std::size_t k = 0; k < table.states.size(); ++k) absorbing[k] = lattice.is_bottom(table.states[k]);
  ExactResult<typename L::State> result;
  result.expected = detail::solve_downward_chain(table.transitions, absorbing);
  result.states = std::move(table.states);
  result.start_value = result.expected.front();
  return result;
}

struct MonteCarloOptions {
  std::size_t reps = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool keep_samples = true;
  /// Per-replica step limit; 0 means none. Truncated replicas are censored.
  std::size_t max_steps = 0;
};

struct MonteCarloResult {
  RunningStats stats;
  /// Absorption times in replica order (censored replicas omitted).
  std::vector<double> samples;
  std::size_t censored = 0;
};

/// Runs `reps` independent replicas; replica r uses Rng(derive_seed(seed, {r})),
/// so results do not depend on the thread count.
template <class Sampler>
MonteCarloResult monte_carlo(Sampler&& sample_one, const MonteCarloOptions& options) {
  if (options.reps == 0) throw invalid_input("reps must be at least 1");
  std::vector<double> values(options.reps, 0.0);
  std::vector<char> ok(options.reps, 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      Rng rng(derive_seed(options.seed, {r}));
      const std::optional<double> value = sample_one(rng);
      if (value) {
        values[r] = *value;
        ok[r] = 1;
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, options.reps);
  if (threads == 1) {
    work(0, options.reps);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t block = (options.reps + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = t * block;
      const std::size_t end = std::min(options.reps, begin + block);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }
  MonteCarloResult result;
  for (std::size_t r = 0; r < options.reps; ++r) {
    if (!ok[r]) {
      ++result.censored;
      continue;
    }
    result.stats.push(values[r]);
    if (options.keep_samples) result.samples.push_back(values[r]);
  }
  return result;
}

template <LatticeBackend L>
MonteCarloResult monte_carlo_expectation(const L& lattice, double p, const MonteCarloOptions& options,
                                         std::optional<typename L::State> start = std::nullopt) {
  require_probability(p);
  const auto origin = start ? *start : lattice.top();
  return monte_carlo(
      [&](Rng& rng) -> std::optional<double> {
        const auto t = absorption_time(lattice, origin, p, rng, options.max_steps);
        if (!t) return std::nullopt;
        return static_cast<double>(*t);
      },
      options);
}

enum class TailSide { upper, lower };

/// Tail bounds for a sum S of k i.i.d. geometric(p) variables:
///   upper: P(S > k/p + t sqrt(k/p^3)) <= exp(-t^2 / (2p + 2t sqrt(p/k)))
///   lower: P(S < k/p - t sqrt(k/p^3)) <= exp(-t^2 / (2p - t sqrt(p/k)))
/// Throws domain_error for t <= 0 or a nonpositive lower-tail denominator.
double geometric_tail_bound(std::size_t k, double p, double t, TailSide side);

struct SimpleWalk {};
struct LazyWalk {
  /// Probability of each of the moves +1 and -1; the walk stays put otherwise.
  double q = 0.25;
};
using WalkKind = std::variant<SimpleWalk, LazyWalk>;

/// First time t >= 1 with S_t = m (m nonzero). Empty when max_steps (nonzero)
/// pass first; simple-walk hitting times have infinite mean, so callers
/// sampling many of them should set a limit.
std::optional<std::uint64_t> walk_hitting_time(const WalkKind& kind, long m, Rng& rng, std::uint64_t max_steps = 0);

}  // namespace ungar
