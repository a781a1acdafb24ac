#include "ungar/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "ungar/errors.hpp"

namespace ungar {

void RunningStats::push(double x) noexcept {
  if (n_ == 0) {
    min_ = max_ = x;
  } else {
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) noexcept {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double delta = other.mean_ - mean_;
  const double total = na + nb;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  n_ += other.n_;
  min_ = std::min(min_, other.min_);
  max_ = std::max(max_, other.max_);
}

double RunningStats::variance() const noexcept {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double RunningStats::stddev() const noexcept { return std::sqrt(variance()); }

double RunningStats::stderr_mean() const noexcept {
  return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

RunningStats summarize_samples(std::span<const double> samples) noexcept {
  RunningStats stats;
  for (double x : samples) stats.push(x);
  return stats;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha) {
  if (a.empty() || b.empty()) throw invalid_input("ks_two_sample needs nonempty samples");
  if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("ks_two_sample alpha must lie in (0, 1)");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  // Advance through tied values together so discrete samples are handled exactly.
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult result;
  result.statistic = d;
  result.critical = std::sqrt(-0.5 * std::log(alpha / 2.0)) * std::sqrt((na + nb) / (na * nb));
  result.reject = d > result.critical;
  return result;
}

ChiSquareResult chi_square_test(std::span<const double> observed, std::span<const double> expected,
                                double alpha, double min_expected) {
  if (observed.size() != expected.size()) throw size_mismatch("chi_square_test: observed/expected sizes differ");
  double stat = 0.0;
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  std::size_t cells = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (expected[k] < min_expected) {
      pooled_obs += observed[k];
      pooled_exp += expected[k];
      continue;
    }
    const double diff = observed[k] - expected[k];
    stat += diff * diff / expected[k];
    ++cells;
  }
  if (pooled_exp > 0.0) {
    const double diff = pooled_obs - pooled_exp;
    stat += diff * diff / pooled_exp;
    ++cells;
  } else if (pooled_obs > 0.0) {
    throw invariant_violation("chi_square_test: observations in cells with zero expectation");
  }
  ChiSquareResult result;
  result.statistic = stat;
  result.dof = cells > 1 ? static_cast<double>(cells - 1) : 0.0;
  if (result.dof > 0.0) {
    boost::math::chi_squared dist(result.dof);
    result.p_value = boost::math::cdf(boost::math::complement(dist, stat));
  }
  result.reject = result.p_value < alpha;
  return result;
}

std::vector<double> survival_function(std::span<const double> samples) {
  if (samples.empty()) return {};
  const double top = *std::max_element(samples.begin(), samples.end());
  const auto size = static_cast<std::size_t>(std::max(0.0, top)) + 1;
  std::vector<double> counts(size + 1, 0.0);
  for (double x : samples) counts[static_cast<std::size_t>(std::max(0.0, x))] += 1.0;
  std::vector<double> survival(size, 0.0);
  double tail = 0.0;
  for (std::size_t t = size; t-- > 0;) {
    tail += counts[t];
    survival[t] = tail / static_cast<double>(samples.size());
  }
  return survival;
}

}  // namespace ungar
