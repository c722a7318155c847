#ifndef BERMINE_STATS_HPP
#define BERMINE_STATS_HPP

#include <cstdint>
#include <span>

namespace bermine {

// One simulation block outcome. `errors` is real-valued so synthetic noise
// models can carry fractional pseudo-counts; Monte Carlo blocks always store
// integers. `value` is the clamped block BER max(errors, 3)/bits.
struct BerSample {
  double errors = 0.0;
  std::uint64_t bits = 0;
  double value = 0.0;
};

// Conservative block BER: assume at least three bit errors were detected,
// making 3/bits the smallest representable BER. Requires bits >= 3.
BerSample clamp_sample(double errors, std::uint64_t bits);

// Sample mean and unbiased (n-1 divisor) sample variance of block BERs.
struct PointEstimate {
  double mean = 0.0;
  double variance = 0.0;
  int n = 0;
};

// Requires at least two samples; the variance is undefined otherwise.
PointEstimate point_estimate(std::span<const BerSample> samples);
PointEstimate point_estimate_values(std::span<const double> values);

// Adaptive-sampling thresholds: relative accuracy beta at confidence gamma,
// sampling threshold t, and the per-point sample cap.
struct StoppingConfig {
  double beta = 0.1;
  double gamma = 0.9;
  double t_threshold = 1e-4;
  int max_samples = 50;
  int min_samples = 2;
};

// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

// CDF of the Student t distribution with dof >= 1 degrees of freedom,
// computed through the regularized incomplete beta. Absolute error <= 1e-10.
double student_t_cdf(double x, int dof);

// P(E[b] < T) ~= F_{n-1}((T - mean) / (sd/sqrt(n))). Zero sample variance is
// the degenerate-distribution limit: 1 below T, 0 above T, 0.5 at T.
double confidence_below(const PointEstimate& est, double T);

// Stopping rule 1: P(|E[b] - mean| < beta*mean) >= gamma, i.e. the two-sided
// t interval 2*F_{n-1}(beta*mean*sqrt(n)/sd) - 1 >= gamma. True when sd = 0.
bool rule_relative_accuracy(const PointEstimate& est, const StoppingConfig& cfg);

// Stopping rule 2: P(E[b] < t) >= gamma.
bool rule_threshold(const PointEstimate& est, const StoppingConfig& cfg);

}  // namespace bermine

#endif  // BERMINE_STATS_HPP
