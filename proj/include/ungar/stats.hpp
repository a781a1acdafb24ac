#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ungar {

/// Online mean/variance (Welford). Mergeable, so replica batches can be
/// combined in any order.
class RunningStats {
 public:
  void push(double x) noexcept;
  void merge(const RunningStats& other) noexcept;

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance; 0 with fewer than two samples.
  double variance() const noexcept;
  double stddev() const noexcept;
  /// Standard error of the mean.
  double stderr_mean() const noexcept;
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

RunningStats summarize_samples(std::span<const double> samples) noexcept;

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool reject = false;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic critical value
/// c(alpha) * sqrt((n1 + n2) / (n1 n2)), c(alpha) = sqrt(-ln(alpha / 2) / 2).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha);

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  bool reject = false;
};

/// Pearson goodness of fit. Cells with expected count below min_expected are
/// pooled into one cell before testing.
ChiSquareResult chi_square_test(std::span<const double> observed, std::span<const double> expected,
                                double alpha, double min_expected = 5.0);

/// Empirical survival P(X >= t) for t = 0..max.
std::vector<double> survival_function(std::span<const double> samples);

}  // namespace ungar
