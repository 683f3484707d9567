#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wasslab {

/// Monte Carlo estimate with its CLT standard error.
struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

// Pairwise summation; order of `values` fully determines the result.
double pairwise_sum(std::span<const double> values);

/// Sample mean and standard error (sample std / sqrt(n)) of `values`.
MCEstimate estimate_mean(std::span<const double> values, std::uint64_t seed);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct KsResult {
  double statistic = 0.0;  // sup |F_a - F_b|
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov
/// distribution (small-sample correction of Stephens).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

}  // namespace wasslab
