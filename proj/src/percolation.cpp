#include "ungar/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "ungar/chain.hpp"
#include "ungar/errors.hpp"

namespace ungar {

LppSample lpp_from_weights(const FinitePoset& poset, std::vector<std::uint64_t> weights) {
  if (weights.size() != poset.size()) throw size_mismatch("weight vector size differs from poset size");
  LppSample sample;
  sample.weights = std::move(weights);
  sample.passage.assign(poset.size(), 0);
  for (int x : poset.topological_order()) {
    std::uint64_t best = 0;
    for (int y : poset.lower_covers(x)) best = std::max(best, sample.passage[static_cast<std::size_t>(y)]);
    sample.passage[static_cast<std::size_t>(x)] = best + sample.weights[static_cast<std::size_t>(x)];
  }
  for (int x : poset.maximal_elements()) sample.total = std::max(sample.total, sample.passage[static_cast<std::size_t>(x)]);
  return sample;
}

LppSample lpp_sample(const FinitePoset& poset, double p, Rng& rng) {
  require_probability(p);
  std::vector<std::uint64_t> weights(poset.size());
  for (auto& w : weights) w = rng.geometric(p);
  return lpp_from_weights(poset, std::move(weights));
}

std::uint64_t lpp_grid_time(std::size_t rows, std::size_t cols, double p, Rng& rng) {
  require_probability(p);
  if (rows == 0 || cols == 0) throw invalid_input("grid dimensions must be positive");
  std::vector<std::uint64_t> row(cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    std::uint64_t left = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      row[j] = std::max(row[j], left) + rng.geometric(p);
      left = row[j];
    }
  }
  return row.back();
}

CoupledIdealRun coupled_ideal_run(const FinitePoset& poset, double p, Rng& rng, const std::optional<std::vector<bool>>& start,
                                  bool keep_states) {
  require_probability(p);
  auto ideal = start ? *start : std::vector<bool>(poset.size(), true);
  if (!is_downward_closed(poset, ideal)) throw invalid_input("start set is not an order ideal");
  CoupledIdealRun run;
  run.maximal_counts.assign(poset.size(), 0);
  if (keep_states) run.states.push_back(ideal);
  std::size_t remaining = static_cast<std::size_t>(std::count(ideal.begin(), ideal.end(), true));
  while (remaining > 0) {
    const auto maxima = ideal_maximal_elements(poset, ideal);
    for (int x : maxima) {
      ++run.maximal_counts[static_cast<std::size_t>(x)];
      if (rng.bernoulli(p)) {
        ideal[static_cast<std::size_t>(x)] = false;
        --remaining;
      }
    }
    ++run.absorption;
    if (keep_states) run.states.push_back(ideal);
  }
  run.lpp_total = lpp_from_weights(poset, run.maximal_counts).total;
  if (run.lpp_total != run.absorption) {
    throw coupling_violation("absorption " + std::to_string(run.absorption) + " differs from max-chain sum " +
                             std::to_string(run.lpp_total));
  }
  return run;
}

bool is_young_diagram(const std::vector<std::size_t>& rows) {
  return std::is_sorted(rows.begin(), rows.end(), std::greater<>());
}

YoungDiagram young_diagram_from_ideal(const GridPoset& grid, const std::vector<bool>& ideal) {
  if (ideal.size() != grid.rows * grid.cols) throw size_mismatch("ideal mask does not match grid");
  YoungDiagram rows(grid.rows, 0);
  for (std::size_t i = 0; i < grid.rows; ++i) {
    for (std::size_t j = 0; j < grid.cols; ++j) {
      if (!ideal[static_cast<std::size_t>(grid.index(i, j))]) ++rows[grid.rows - 1 - i];
    }
  }
  while (!rows.empty() && rows.back() == 0) rows.pop_back();
  return rows;
}

nlohmann::json young_diagram_to_json(const YoungDiagram& diagram) { return diagram; }

std::size_t tasep_run(std::size_t rows, std::size_t cols, double p, Rng& rng) {
  require_probability(p);
  if (rows == 0 || cols == 0) throw invalid_input("window dimensions must be positive");
  // Growth outside the window never affects the clipped diagram, so only the
  // window is simulated.
  std::vector<std::size_t> lambda(rows, 0);
  std::size_t full_rows = 0;
  std::size_t steps = 0;
  std::vector<std::size_t> grow;
  while (full_rows < rows) {
    grow.clear();
    for (std::size_t r = full_rows; r < rows; ++r) {
      const bool addable = lambda[r] < cols && (r == 0 || lambda[r - 1] > lambda[r]);
      if (addable && rng.bernoulli(p)) grow.push_back(r);
    }
    for (std::size_t r : grow) ++lambda[r];
    while (full_rows < rows && lambda[full_rows] == cols) ++full_rows;
    ++steps;
  }
  return steps;
}

std::vector<YoungDiagram> tasep_window_trajectory(std::size_t rows, std::size_t cols, double p, std::uint64_t seed,
                                                  std::size_t outer_rows, std::size_t outer_cols) {
  require_probability(p);
  if (rows == 0 || cols == 0) throw invalid_input("window dimensions must be positive");
  outer_rows = std::max(outer_rows, rows);
  outer_cols = std::max(outer_cols, cols);
  std::vector<std::size_t> lambda(outer_rows, 0);
  auto clipped = [&] {
    YoungDiagram out(rows, 0);
    for (std::size_t r = 0; r < rows; ++r) out[r] = std::min(lambda[r], cols);
    return out;
  };
  std::vector<YoungDiagram> trajectory{clipped()};
  std::vector<std::size_t> grow;
  for (std::uint64_t step = 1;; ++step) {
    const auto& current = trajectory.back();
    if (std::all_of(current.begin(), current.end(), [&](std::size_t len) { return len == cols; })) break;
    grow.clear();
    for (std::size_t r = 0; r < outer_rows; ++r) {
      const bool addable = lambda[r] < outer_cols && (r == 0 || lambda[r - 1] > lambda[r]);
      if (!addable) continue;
      const double u = to_unit_interval(derive_seed(seed, {r, lambda[r], step}));
      if (u < p) grow.push_back(r);
    }
    for (std::size_t r : grow) ++lambda[r];
    trajectory.push_back(clipped());
  }
  return trajectory;
}

RescalingConstants rescaling_constants(double p, double x, double y) {
  if (!(p > 0.0 && p < 1.0)) throw domain_error("rescaling constants need 0 < p < 1");
  if (!(x > 0.0 && y > 0.0)) throw domain_error("rescaling constants need x, y > 0");
  const double q = 1.0 - p;
  RescalingConstants c;
  c.phi = (x + y + 2.0 * std::sqrt(q * x * y)) / p;
  c.eta = std::pow(q, 1.0 / 6.0) / p * std::pow(x * y, -1.0 / 6.0) *
          std::pow(std::sqrt(x) + std::sqrt(q * y), 2.0 / 3.0) * std::pow(std::sqrt(y) + std::sqrt(q * x), 2.0 / 3.0);
  return c;
}

double upsilon(double p, double x, double tail_tol) {
  require_probability(p);
  if (!(x > 0.0)) throw domain_error("upsilon needs x > 0");
  if (p == 1.0) return 0.0;
  const double q = 1.0 - p;
  const double log_q = std::log(q);
  const double log_x = std::log(x);
  constexpr long max_terms = 50'000'000;
  auto t_at = [&](long k) { return std::exp(static_cast<double>(k) * log_q + log_x); };
  // Centre the sum where t_k is near 1.
  const long k0 = std::lround(-log_x / log_q);
  double sum = 0.0;
  long used = 0;
  // k -> +infinity: terms are below t_k, so the weighted tail past K is at
  // most p t_K q / (1 - q) = q t_K.
  for (long k = k0;; ++k) {
    const double t = t_at(k);
    sum += t * std::exp(-t);
    if (t <= 1.0 && q * t <= tail_tol) break;
    if (++used > max_terms) throw series_truncation_error("upsilon: positive tail did not converge");
  }
  // k -> -infinity: t grows by 1/q per step and the term ratio
  // rho = exp(-t (1/q - 1)) / q decreases, so the tail is a geometric series.
  for (long k = k0 - 1;; --k) {
    const double t = t_at(k);
    const double value = t * std::exp(-t);
    sum += value;
    const double rho = std::exp(-t * (1.0 / q - 1.0)) / q;
    if (t >= 1.0 && rho < 1.0 && p * value * rho / (1.0 - rho) <= tail_tol) break;
    if (++used > max_terms) throw series_truncation_error("upsilon: negative tail did not converge");
  }
  return p * sum;
}

ZetaLimits zeta_limits(double p) {
  require_probability(p);
  if (p == 1.0) return {};
  const double q = 1.0 - p;
  // Upsilon(q x) = Upsilon(x); one period in log x is [log q, 0].
  const double lo = std::log(q);
  const double hi = 0.0;
  auto at = [&](double s) { return upsilon(p, std::exp(s)); };
  constexpr int grid = 256;
  double best_min_s = lo;
  double best_max_s = lo;
  double best_min = at(lo);
  double best_max = best_min;
  for (int i = 1; i <= grid; ++i) {
    const double s = lo + (hi - lo) * i / grid;
    const double v = at(s);
    if (v < best_min) {
      best_min = v;
      best_min_s = s;
    }
    if (v > best_max) {
      best_max = v;
      best_max_s = s;
    }
  }
  const double width = (hi - lo) / grid;
  constexpr int bits = 40;
  auto refined_min = boost::math::tools::brent_find_minima(at, best_min_s - width, best_min_s + width, bits);
  auto refined_max = boost::math::tools::brent_find_minima([&](double s) { return -at(s); }, best_max_s - width,
                                                           best_max_s + width, bits);
  return {std::min(best_min, refined_min.second), std::max(best_max, -refined_max.second)};
}

double zeta_lower_bound(double p) {
  require_probability(p);
  return p * (1.0 - p) * std::exp(p - 1.0);
}

RunningStats zeta_estimate(double p, std::uint64_t n, std::size_t trials, std::uint64_t seed) {
  require_probability(p);
  if (n == 0) throw domain_error("zeta_estimate needs n >= 1");
  MonteCarloOptions options;
  options.reps = trials;
  options.seed = seed;
  options.keep_samples = false;
  if (n == 1 || p == 1.0) {
    RunningStats stats;
    // n = 1: a single maximum. p = 1: every variable equals 1.
    for (std::size_t i = 0; i < trials; ++i) stats.push(n == 1 ? 1.0 : 0.0);
    return stats;
  }
  const double log_q = std::log1p(-p);
  const double dn = static_cast<double>(n);
  // The maximum of G = 1 + floor(ln U / ln q) sits at the smallest uniform, so
  // only the two smallest order statistics matter.
  auto sampler = [&](Rng& rng) -> std::optional<double> {
    const double u1 = -std::expm1(std::log(rng.uniform_positive()) / dn);
    const double u2 = u1 + (1.0 - u1) * -std::expm1(std::log(rng.uniform_positive()) / (dn - 1.0));
    const double g1 = std::floor(std::log(u1) / log_q);
    const double g2 = std::floor(std::log(u2) / log_q);
    return g1 > g2 ? 1.0 : 0.0;
  };
  return monte_carlo(sampler, options).stats;
}

double tracy_widom_tail(double t) {
  if (!(t > 0.0)) throw domain_error("tracy_widom_tail needs t > 0");
  const double t32 = std::pow(t, 1.5);
  return std::exp(-4.0 * t32 / 3.0) / (32.0 * std::numbers::pi * t32);
}

FluctuationRow fluctuation_study(std::size_t n, std::size_t m, double p, std::size_t reps, std::uint64_t seed,
                                 unsigned threads) {
  require_probability(p);
  FluctuationRow row;
  row.n = n;
  row.m = m;
  row.p = p;
  row.reps = reps;
  const auto constants = rescaling_constants(p, static_cast<double>(n), static_cast<double>(m));
  row.phi = constants.phi;
  row.eta = constants.eta;
  MonteCarloOptions options;
  options.reps = reps;
  options.seed = seed;
  options.threads = threads;
  const auto result = monte_carlo(
      [&](Rng& rng) -> std::optional<double> { return static_cast<double>(lpp_grid_time(n, m, p, rng)); }, options);
  row.mean_t = result.stats.mean();
  RunningStats rescaled;
  std::size_t above = 0;
  for (double t : result.samples) {
    const double z = (t - row.phi) / row.eta;
    rescaled.push(z);
    above += z > row.tail_t;
  }
  row.mean_rescaled = rescaled.mean();
  row.sd_rescaled = rescaled.stddev();
  row.empirical_tail = static_cast<double>(above) / static_cast<double>(reps);
  row.asymptotic_tail = tracy_widom_tail(row.tail_t);
  return row;
}

}  // namespace ungar
