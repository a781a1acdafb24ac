#include "ungar/chain.hpp"

#include <string>

namespace ungar {

namespace detail {

std::vector<double> solve_downward_chain(const std::vector<std::vector<std::pair<std::size_t, double>>>& transitions,
                                         const std::vector<bool>& absorbing) {
  const std::size_t n = transitions.size();
  std::vector<double> expected(n, 0.0);
  // Iterative post-order so every target is solved before its sources.
  std::vector<char> state(n, 0);  // 0 new, 1 open, 2 done
  for (std::size_t root = 0; root < n; ++root) {
    if (state[root]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [x, next] = stack.back();
      const auto& row = transitions[x];
      if (next < row.size()) {
        const std::size_t y = row[next++].first;
        if (y == x || state[y] == 2) continue;
        if (state[y] == 1) throw singular_system("transition graph has a cycle through " + std::to_string(y));
        state[y] = 1;
        stack.emplace_back(y, 0);
        continue;
      }
      if (absorbing[x]) {
        expected[x] = 0.0;
      } else {
        double stay = 0.0;
        double rhs = 1.0;
        for (const auto& [y, prob] : row) {
          if (y == x) {
            stay += prob;
          } else {
            rhs += prob * expected[y];
          }
        }
        if (!(1.0 - stay > 0.0)) throw singular_system("state " + std::to_string(x) + " never leaves itself");
        expected[x] = rhs / (1.0 - stay);
      }
      state[x] = 2;
      stack.pop_back();
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (absorbing[x]) continue;
    double total = 0.0;
    double residual = expected[x] - 1.0;
    for (const auto& [y, prob] : transitions[x]) {
      total += prob;
      residual -= prob * expected[y];
    }
    if (std::abs(total - 1.0) > 1e-10 || std::abs(residual) > 1e-10 * std::max(1.0, expected[x])) {
      throw singular_system("residual check failed at state " + std::to_string(x));
    }
  }
  return expected;
}

}  // namespace detail

double geometric_tail_bound(std::size_t k, double p, double t, TailSide side) {
  require_probability(p);
  if (k == 0) throw domain_error("geometric_tail_bound needs k >= 1");
  if (!(t > 0.0)) throw domain_error("geometric_tail_bound needs t > 0");
  const double skew = t * std::sqrt(p / static_cast<double>(k));
  if (side == TailSide::upper) return std::exp(-t * t / (2.0 * p + 2.0 * skew));
  const double denominator = 2.0 * p - skew;
  if (!(denominator > 0.0)) throw domain_error("lower-tail bound needs t sqrt(p/k) < 2p");
  return std::exp(-t * t / denominator);
}

std::optional<std::uint64_t> walk_hitting_time(const WalkKind& kind, long m, Rng& rng, std::uint64_t max_steps) {
  if (m == 0) throw domain_error("hitting time target must be nonzero");
  double q = 0.5;
  if (const auto* lazy = std::get_if<LazyWalk>(&kind)) {
    if (!(lazy->q > 0.0 && lazy->q < 0.5)) throw domain_error("lazy walk parameter must lie in (0, 1/2)");
    q = lazy->q;
  }
  long position = 0;
  std::uint64_t t = 0;
  while (position != m) {
    if (max_steps != 0 && t >= max_steps) return std::nullopt;
    const double u = rng.uniform();
    if (u < q) {
      ++position;
    } else if (u < 2.0 * q) {
      --position;
    }
    ++t;
  }
  return t;
}

}  // namespace ungar
