#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "ungar/poset.hpp"
#include "ungar/rng.hpp"
#include "ungar/stats.hpp"

namespace ungar {

/// Last-passage percolation on a poset: passage[x] = weights[x] + max of
/// passage over the elements x covers; total = max over maximal elements.
struct LppSample {
  std::vector<std::uint64_t> weights;
  std::vector<std::uint64_t> passage;
  std::uint64_t total = 0;
};

LppSample lpp_from_weights(const FinitePoset& poset, std::vector<std::uint64_t> weights);
/// Geometric(p) weights, i.i.d. over elements.
LppSample lpp_sample(const FinitePoset& poset, double p, Rng& rng);
/// Passage time of R_{rows,cols} with i.i.d. geometric(p) weights, without
/// materializing the poset.
std::uint64_t lpp_grid_time(std::size_t rows, std::size_t cols, double p, Rng& rng);

/// A run of the chain on J(P) together with, for each element, the number of
/// steps at whose start it was a maximal element of the current ideal.
struct CoupledIdealRun {
  std::size_t absorption = 0;
  std::vector<std::uint64_t> maximal_counts;
  /// Max-chain sum of maximal_counts; equals absorption on every run.
  std::uint64_t lpp_total = 0;
  std::vector<std::vector<bool>> states;
};

/// Starts from `start` (default: all of P). Throws coupling_violation if the
/// absorption time differs from the max-chain sum of the coupled counts.
CoupledIdealRun coupled_ideal_run(const FinitePoset& poset, double p, Rng& rng,
                                  const std::optional<std::vector<bool>>& start = std::nullopt, bool keep_states = false);

/// Young diagram rows, weakly decreasing, zero rows trimmed.
using YoungDiagram = std::vector<std::size_t>;

bool is_young_diagram(const std::vector<std::size_t>& rows);
/// The complement of an ideal of R_{rows,cols}, rotated by (i, j) -> (rows-1-i, cols-1-j).
YoungDiagram young_diagram_from_ideal(const GridPoset& grid, const std::vector<bool>& ideal);
nlohmann::json young_diagram_to_json(const YoungDiagram& diagram);

/// Multicorner growth from the empty diagram: every external corner is added
/// independently with probability p each step. Returns the first step at
/// which the diagram restricted to rows x cols is the full rectangle.
std::size_t tasep_run(std::size_t rows, std::size_t cols, double p, Rng& rng);

/// Coupled growth for window-independence checks. Corner decisions are keyed
/// by (row, column, step) under seed, so the same corner sees the same coin
/// however much of the plane is simulated. The plane simulated is
/// outer_rows x outer_cols (at least the window). Returns the clipped
/// diagram after each step until the window fills, starting from empty.
std::vector<YoungDiagram> tasep_window_trajectory(std::size_t rows, std::size_t cols, double p, std::uint64_t seed,
                                                  std::size_t outer_rows, std::size_t outer_cols);

struct RescalingConstants {
  double phi = 0.0;
  double eta = 0.0;
};

/// Phi_p(x,y) = (x + y + 2 sqrt((1-p) x y)) / p and
/// eta_p(x,y) = (1-p)^{1/6} / p (xy)^{-1/6} (sqrt x + sqrt((1-p) y))^{2/3} (sqrt y + sqrt((1-p) x))^{2/3}.
/// Throws domain_error unless x, y > 0 and 0 < p < 1.
RescalingConstants rescaling_constants(double p, double x, double y);

/// Upsilon_p(x) = p sum_{k in Z} t_k exp(-t_k), t_k = (1-p)^k x; zero at p = 1.
/// Bilateral truncation stops once both certified tails are below tail_tol.
double upsilon(double p, double x, double tail_tol = 1e-12);

struct ZetaLimits {
  double minus = 0.0;
  double plus = 0.0;
};
/// Minimum and maximum of Upsilon_p over one period.
ZetaLimits zeta_limits(double p);
/// p (1-p) e^{p-1}.
double zeta_lower_bound(double p);

/// Monte Carlo estimate of the probability that the maximum of n i.i.d.
/// geometric(p) variables is attained uniquely.
RunningStats zeta_estimate(double p, std::uint64_t n, std::size_t trials, std::uint64_t seed);

/// Asymptotic upper-tail form (1/(32 pi t^{3/2})) exp(-4 t^{3/2} / 3). Not a
/// CDF; meaningful only for large t. Throws domain_error for t <= 0.
double tracy_widom_tail(double t);

struct FluctuationRow {
  std::size_t n = 0;
  std::size_t m = 0;
  double p = 0.0;
  std::size_t reps = 0;
  double mean_t = 0.0;
  double phi = 0.0;
  double eta = 0.0;
  double mean_rescaled = 0.0;
  double sd_rescaled = 0.0;
  /// Empirical P((T - Phi)/eta > tail_t) next to the asymptotic tail form.
  double tail_t = 2.0;
  double empirical_tail = 0.0;
  double asymptotic_tail = 0.0;
};

/// Samples T(J(R_{n,m})) reps times by last-passage percolation.
FluctuationRow fluctuation_study(std::size_t n, std::size_t m, double p, std::size_t reps, std::uint64_t seed,
                                 unsigned threads = 1);

}  // namespace ungar
