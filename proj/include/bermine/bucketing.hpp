#ifndef BERMINE_BUCKETING_HPP
#define BERMINE_BUCKETING_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bermine/database.hpp"

namespace bermine {

// Maps database points into a 2D bucket lattice. Bucket k = ix*my + iy holds
// the member point cells; the default bucketing is the identity (one point
// per bucket).
struct BucketGrid {
  int mx = 0;
  int my = 0;
  std::vector<std::vector<std::pair<int, int>>> members;

  int index(int ix, int iy) const { return ix * my + iy; }
  static BucketGrid identity(const PerformanceDatabase& db);
};

// Mixture statistics of a bucket: mean, variance, total sample count, and the
// priors the mixture was formed with.
struct BucketEstimate {
  double mean = 0.0;
  double variance = 0.0;
  long long n_total = 0;
  std::vector<double> priors;
};

// Priors estimated from sample counts: p_k = n_k / sum(n_i).
std::vector<double> estimate_priors(std::span<const long long> counts);

// B = sum p_k b_k, Sigma^2 = sum p_k^2 sigma_k^2, N = sum n_k. With priors
// estimated from counts, the mixture mean equals the grand sample mean of all
// member observations; the mixture variance is not the pooled variance.
BucketEstimate bucket_estimate(std::span<const PointEstimate> points,
                               std::span<const double> priors);

// P(E[B] < T) with N-1 degrees of freedom; same zero-variance convention as
// confidence_below.
double bucket_confidence(const BucketEstimate& est, double T);

// Discretized confidence h = floor(scale*P + 0.5).
int hit_from_confidence(double confidence, int scale = 1000);

// M_X x M_Y integer hits with constant per-bucket support and a mask for
// buckets that have no usable data. Stored x-major like the database.
struct HitGrid {
  int mx = 0;
  int my = 0;
  int support_per_bucket = 1000;
  std::vector<int> hits;
  std::vector<std::uint8_t> missing;

  int index(int ix, int iy) const { return ix * my + iy; }
  int hit_at(int ix, int iy) const { return hits[index(ix, iy)]; }
  bool missing_at(int ix, int iy) const { return missing[index(ix, iy)] != 0; }
  long long total_buckets() const { return static_cast<long long>(mx) * my; }
};

struct ConfidenceMap {
  HitGrid grid;
  std::vector<double> prob;  // raw confidences, NaN where missing
};

// Per-bucket confidences and hits of a database. Buckets whose members are
// all absent (or have fewer than two samples) are masked, not zero-filled.
ConfidenceMap confidence_map(const PerformanceDatabase& db, const BucketGrid& buckets,
                             double T, int scale = 1000);
ConfidenceMap confidence_map(const PerformanceDatabase& db, double T, int scale = 1000);

}  // namespace bermine

#endif  // BERMINE_BUCKETING_HPP
