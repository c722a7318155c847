#include "bermine/bucketing.hpp"

#include <cmath>
#include <stdexcept>

namespace bermine {

BucketGrid BucketGrid::identity(const PerformanceDatabase& db) {
  BucketGrid g;
  g.mx = db.nx();
  g.my = db.ny();
  g.members.resize(static_cast<std::size_t>(g.mx) * g.my);
  for (int ix = 0; ix < g.mx; ++ix) {
    for (int iy = 0; iy < g.my; ++iy) {
      g.members[g.index(ix, iy)].emplace_back(ix, iy);
    }
  }
  return g;
}

std::vector<double> estimate_priors(std::span<const long long> counts) {
  if (counts.empty()) {
    throw std::invalid_argument("estimate_priors: empty bucket");
  }
  long long total = 0;
  for (long long c : counts) {
    if (c < 1) throw std::invalid_argument("estimate_priors: counts must be >= 1");
    total += c;
  }
  std::vector<double> priors;
  priors.reserve(counts.size());
  for (long long c : counts) {
    priors.push_back(static_cast<double>(c) / static_cast<double>(total));
  }
  return priors;
}

BucketEstimate bucket_estimate(std::span<const PointEstimate> points,
                               std::span<const double> priors) {
  if (points.size() != priors.size()) {
    throw std::invalid_argument("bucket_estimate: points and priors misaligned");
  }
  if (points.empty()) {
    throw std::invalid_argument("bucket_estimate: empty bucket");
  }
  BucketEstimate est;
  est.priors.assign(priors.begin(), priors.end());
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].n < 2) {
      throw std::invalid_argument("bucket_estimate: member points need n >= 2");
    }
    est.mean += priors[k] * points[k].mean;
    est.variance += priors[k] * priors[k] * points[k].variance;
    est.n_total += points[k].n;
  }
  return est;
}

double bucket_confidence(const BucketEstimate& est, double T) {
  if (est.n_total < 2) {
    throw std::invalid_argument("bucket_confidence: needs N >= 2");
  }
  if (est.variance == 0.0) {
    if (est.mean < T) return 1.0;
    if (est.mean > T) return 0.0;
    return 0.5;
  }
  const double se = std::sqrt(est.variance / static_cast<double>(est.n_total));
  return student_t_cdf((T - est.mean) / se, static_cast<int>(est.n_total) - 1);
}

int hit_from_confidence(double confidence, int scale) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw std::invalid_argument("hit_from_confidence: confidence outside [0, 1]");
  }
  if (scale < 1) {
    throw std::invalid_argument("hit_from_confidence: scale must be >= 1");
  }
  return static_cast<int>(std::floor(scale * confidence + 0.5));
}

ConfidenceMap confidence_map(const PerformanceDatabase& db, const BucketGrid& buckets,
                             double T, int scale) {
  ConfidenceMap map;
  map.grid.mx = buckets.mx;
  map.grid.my = buckets.my;
  map.grid.support_per_bucket = scale;
  map.grid.hits.assign(buckets.members.size(), 0);
  map.grid.missing.assign(buckets.members.size(), 1);
  map.prob.assign(buckets.members.size(), std::nan(""));

  for (std::size_t k = 0; k < buckets.members.size(); ++k) {
    std::vector<PointEstimate> points;
    std::vector<long long> counts;
    for (const auto& [ix, iy] : buckets.members[k]) {
      const auto& rec = db.at(ix, iy);
      // Points with fewer than two samples have no variance estimate and are
      // treated as missing.
      if (!rec || rec->samples.size() < 2) continue;
      points.push_back(point_estimate(rec->samples));
      counts.push_back(static_cast<long long>(rec->samples.size()));
    }
    if (points.empty()) continue;
    const auto priors = estimate_priors(counts);
    const BucketEstimate est = bucket_estimate(points, priors);
    const double p = bucket_confidence(est, T);
    map.prob[k] = p;
    map.grid.hits[k] = hit_from_confidence(p, scale);
    map.grid.missing[k] = 0;
  }
  return map;
}

ConfidenceMap confidence_map(const PerformanceDatabase& db, double T, int scale) {
  return confidence_map(db, BucketGrid::identity(db), T, scale);
}

}  // namespace bermine
