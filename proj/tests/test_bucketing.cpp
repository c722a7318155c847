#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "bermine/bucketing.hpp"
#include "bermine/sampler.hpp"

using namespace bermine;

TEST_CASE("estimate_priors") {
  const std::vector<long long> a{2, 2};
  const std::vector<long long> b{6, 3, 1};
  const std::vector<long long> c{5};
  CHECK(estimate_priors(a) == std::vector<double>{0.5, 0.5});
  CHECK(estimate_priors(b) == std::vector<double>{0.6, 0.3, 0.1});
  CHECK(estimate_priors(c) == std::vector<double>{1.0});
  const std::vector<long long> empty;
  CHECK_THROWS_AS(estimate_priors(empty), std::invalid_argument);
}

TEST_CASE("bucket_estimate mixtures") {
  SUBCASE("single point is a degenerate mixture") {
    const std::vector<PointEstimate> pts{{5e-4, 1e-8, 6}};
    const std::vector<double> priors{1.0};
    const BucketEstimate est = bucket_estimate(pts, priors);
    CHECK(est.mean == 5e-4);
    CHECK(est.variance == 1e-8);
    CHECK(est.n_total == 6);
  }
  SUBCASE("two equal-count points") {
    const std::vector<PointEstimate> pts{{1e-3, 4e-8, 4}, {3e-3, 8e-8, 4}};
    const std::vector<double> priors{0.5, 0.5};
    const BucketEstimate est = bucket_estimate(pts, priors);
    CHECK(est.mean == doctest::Approx(2e-3).epsilon(1e-12));
    CHECK(est.variance == doctest::Approx(3e-8).epsilon(1e-12));
    CHECK(est.n_total == 8);
  }
  SUBCASE("misaligned priors") {
    const std::vector<PointEstimate> pts{{1e-3, 0.0, 2}};
    const std::vector<double> priors{0.5, 0.5};
    CHECK_THROWS_AS(bucket_estimate(pts, priors), std::invalid_argument);
  }
}

TEST_CASE("bucket mean equals the grand sample mean of raw observations") {
  // Three points with counts 6, 3, 1 reconstructed from raw samples.
  const std::vector<std::vector<double>> raw{
      {1.1e-3, 0.9e-3, 1.3e-3, 0.7e-3, 1.2e-3, 0.8e-3},
      {2.2e-3, 2.6e-3, 1.8e-3},
      {5.0e-4, 5.0e-4},
  };
  std::vector<PointEstimate> pts;
  std::vector<long long> counts;
  double grand_sum = 0.0;
  long long grand_n = 0;
  for (const auto& samples : raw) {
    pts.push_back(point_estimate_values(samples));
    counts.push_back(static_cast<long long>(samples.size()));
    for (double v : samples) grand_sum += v;
    grand_n += static_cast<long long>(samples.size());
  }
  const auto priors = estimate_priors(counts);
  const BucketEstimate est = bucket_estimate(pts, priors);
  CHECK(est.mean == doctest::Approx(grand_sum / static_cast<double>(grand_n)).epsilon(1e-12));
  CHECK(est.n_total == grand_n);

  // The mixture variance is not the pooled sample variance: the samples are
  // drawn from the constituent distributions, not from the mixture.
  std::vector<double> all;
  for (const auto& samples : raw) all.insert(all.end(), samples.begin(), samples.end());
  const PointEstimate pooled = point_estimate_values(all);
  CHECK(std::fabs(est.variance - pooled.variance) > 1e-12);
}

TEST_CASE("bucket_confidence") {
  SUBCASE("paper worked example through a single-point bucket") {
    const double sd = 8.87e-4;
    BucketEstimate est;
    est.mean = 5e-4;
    est.variance = sd * sd;
    est.n_total = 6;
    CHECK(bucket_confidence(est, 1e-3) == doctest::Approx(0.887).epsilon(1.2e-3));
  }
  SUBCASE("mean at the threshold") {
    BucketEstimate est;
    est.mean = 1e-3;
    est.variance = 1e-9;
    est.n_total = 5;
    CHECK(bucket_confidence(est, 1e-3) == 0.5);
  }
  SUBCASE("degenerate limit") {
    BucketEstimate est;
    est.mean = 5e-4;
    est.variance = 0.0;
    est.n_total = 2;
    CHECK(bucket_confidence(est, 1e-3) == 1.0);
  }
}

TEST_CASE("hit_from_confidence rounding") {
  CHECK(hit_from_confidence(0.887) == 887);
  CHECK(hit_from_confidence(1.0) == 1000);
  CHECK(hit_from_confidence(0.0) == 0);
  CHECK(hit_from_confidence(0.99949) == 999);
  CHECK(hit_from_confidence(0.9995) == 1000);
  CHECK_THROWS_AS(hit_from_confidence(1.5), std::invalid_argument);
}

TEST_CASE("hit discretization error is at most half a step") {
  for (double p : {0.0, 0.1234, 0.5, 0.8871, 0.9994999, 1.0}) {
    const int h = hit_from_confidence(p);
    CHECK(std::fabs(static_cast<double>(h) / 1000.0 - p) <= 0.5 / 1000.0);
  }
}

TEST_CASE("confidence_map on the zero-noise oracle surface") {
  const GridSpec grid{3, 12, 1};
  const PerformanceDatabase db = synthetic_surface(grid, 2, 0.0, 1);
  const double T = 1e-3;
  const ConfidenceMap map = confidence_map(db, T);
  REQUIRE(map.grid.mx == 10);
  REQUIRE(map.grid.my == 10);
  for (int ix = 0; ix < 10; ++ix) {
    for (int iy = 0; iy < 10; ++iy) {
      const double oracle = closed_form_bep({db.xs[ix], db.ys[iy]});
      CHECK_FALSE(map.grid.missing_at(ix, iy));
      const double expected = oracle < T ? 1.0 : 0.0;
      CHECK(map.prob[map.grid.index(ix, iy)] == expected);
      CHECK(map.grid.hit_at(ix, iy) == static_cast<int>(1000 * expected));
    }
  }
}

TEST_CASE("confidence_map masks missing and single-sample cells") {
  PerformanceDatabase db = PerformanceDatabase::empty_grid({0.0, 1.0}, {0.0, 1.0});
  PointRecord two;
  two.point = {0, 0};
  two.samples = {clamp_sample(100, 1000000), clamp_sample(120, 1000000)};
  db.at(0, 0) = two;
  PointRecord one;
  one.point = {0, 1};
  one.samples = {clamp_sample(100, 1000000)};
  db.at(0, 1) = one;
  const ConfidenceMap map = confidence_map(db, 1e-3);
  CHECK_FALSE(map.grid.missing_at(0, 0));
  CHECK(map.grid.missing_at(0, 1));  // n = 1 treated as missing
  CHECK(map.grid.missing_at(1, 0));
  CHECK(map.grid.missing_at(1, 1));
  CHECK(std::isnan(map.prob[map.grid.index(1, 1)]));
}

TEST_CASE("single-point buckets reproduce the point-level map") {
  const GridSpec grid{5, 9, 1};
  const PerformanceDatabase db = synthetic_surface(grid, 4, 0.2, 3);
  const double T = 1e-3;
  const ConfidenceMap map = confidence_map(db, T);
  for (int ix = 0; ix < db.nx(); ++ix) {
    for (int iy = 0; iy < db.ny(); ++iy) {
      const PointEstimate est = point_estimate(db.at(ix, iy)->samples);
      CHECK(map.prob[map.grid.index(ix, iy)] ==
            doctest::Approx(confidence_below(est, T)).epsilon(1e-12));
    }
  }
}
