#include "bermine/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bermine {

namespace {

// Continued fraction for the incomplete beta function, modified Lentz scheme.
double beta_cont_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  constexpr int kMaxIter = 500;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("regularized_incomplete_beta: continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("regularized_incomplete_beta: a and b must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("regularized_incomplete_beta: x outside [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cont_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_cont_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double x, int dof) {
  if (dof < 1) {
    throw std::invalid_argument("student_t_cdf: degrees of freedom must be >= 1");
  }
  if (std::isnan(x)) {
    throw std::invalid_argument("student_t_cdf: x must not be NaN");
  }
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  const double v = static_cast<double>(dof);
  const double tail = 0.5 * regularized_incomplete_beta(0.5 * v, 0.5, v / (v + x * x));
  return x >= 0.0 ? 1.0 - tail : tail;
}

BerSample clamp_sample(double errors, std::uint64_t bits) {
  if (bits < 3) {
    throw std::invalid_argument("clamp_sample: need at least 3 bits per block");
  }
  if (!(errors >= 0.0)) {
    throw std::invalid_argument("clamp_sample: negative error count");
  }
  BerSample s;
  s.errors = errors;
  s.bits = bits;
  s.value = std::max(errors, 3.0) / static_cast<double>(bits);
  return s;
}

PointEstimate point_estimate_values(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  if (n < 2) {
    throw std::invalid_argument("point_estimate: need at least 2 samples");
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  return PointEstimate{mean, ss / (n - 1), n};
}

PointEstimate point_estimate(std::span<const BerSample> samples) {
  std::vector<double> values;
  values.reserve(samples.size());
  for (const auto& s : samples) values.push_back(s.value);
  return point_estimate_values(values);
}

double confidence_below(const PointEstimate& est, double T) {
  if (est.n < 2) {
    throw std::invalid_argument("confidence_below: estimate needs n >= 2");
  }
  if (est.variance < 0.0) {
    throw std::invalid_argument("confidence_below: negative variance");
  }
  if (est.variance == 0.0) {
    if (est.mean < T) return 1.0;
    if (est.mean > T) return 0.0;
    return 0.5;
  }
  const double se = std::sqrt(est.variance / est.n);
  return student_t_cdf((T - est.mean) / se, est.n - 1);
}

bool rule_relative_accuracy(const PointEstimate& est, const StoppingConfig& cfg) {
  if (est.n < 2) {
    throw std::invalid_argument("rule_relative_accuracy: estimate needs n >= 2");
  }
  if (est.variance == 0.0) return true;
  const double sd = std::sqrt(est.variance);
  const double arg = cfg.beta * est.mean * std::sqrt(static_cast<double>(est.n)) / sd;
  return 2.0 * student_t_cdf(arg, est.n - 1) - 1.0 >= cfg.gamma;
}

bool rule_threshold(const PointEstimate& est, const StoppingConfig& cfg) {
  return confidence_below(est, cfg.t_threshold) >= cfg.gamma;
}

}  // namespace bermine
