#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bermine/miner.hpp"

using namespace bermine;

namespace {

HitGrid make_grid(const std::vector<std::vector<int>>& columns, int scale = 1000) {
  HitGrid g;
  g.mx = static_cast<int>(columns.size());
  g.my = static_cast<int>(columns[0].size());
  g.support_per_bucket = scale;
  for (const auto& col : columns) {
    for (int h : col) {
      g.hits.push_back(h);
      g.missing.push_back(0);
    }
  }
  return g;
}

Region region_of(int col_lo, std::vector<std::pair<int, int>> intervals) {
  Region r;
  r.col_lo = col_lo;
  r.intervals = std::move(intervals);
  return r;
}

HitGrid random_grid(std::mt19937& gen, int mx, int my) {
  static const int palette[] = {0, 100, 250, 500, 750, 900, 1000};
  std::vector<std::vector<int>> cols(mx, std::vector<int>(my));
  for (auto& col : cols) {
    for (int& h : col) h = palette[gen() % 7];
  }
  return make_grid(cols);
}

}  // namespace

TEST_CASE("is_admissible") {
  CHECK(is_admissible(Region{}));  // empty region
  CHECK(is_admissible(region_of(0, {{0, 3}, {0, 3}})));  // full rectangle
  CHECK(is_admissible(region_of(2, {{1, 2}, {0, 3}, {1, 1}})));  // widen then narrow
  // Disjoint consecutive intervals break connectedness.
  CHECK_FALSE(is_admissible(region_of(0, {{1, 1}, {3, 3}})));
  // Top boundary falls then rises: not pseudoconcave.
  CHECK_FALSE(is_admissible(region_of(0, {{2, 3}, {2, 2}, {2, 3}})));
  // Bottom boundary rises then falls: not pseudoconvex.
  CHECK_FALSE(is_admissible(region_of(0, {{1, 3}, {2, 3}, {1, 3}})));
  // Inverted interval.
  CHECK_FALSE(is_admissible(region_of(0, {{2, 1}})));
  // Slants are admissible.
  CHECK(is_admissible(region_of(0, {{0, 1}, {1, 2}, {2, 3}})));
  CHECK(is_admissible(region_of(0, {{2, 3}, {1, 2}, {0, 1}})));
}

TEST_CASE("region cells round-trip through from_cells") {
  const Region r = region_of(1, {{1, 2}, {0, 3}, {2, 2}});
  const auto cells = r.cells();
  const auto back = Region::from_cells(cells);
  REQUIRE(back.has_value());
  CHECK(back->col_lo == r.col_lo);
  CHECK(back->intervals == r.intervals);
  // Broken column: rows not contiguous.
  const std::vector<std::pair<int, int>> split{{0, 0}, {0, 2}};
  CHECK_FALSE(Region::from_cells(split).has_value());
  // Column gap.
  const std::vector<std::pair<int, int>> gap{{0, 0}, {2, 0}};
  CHECK_FALSE(Region::from_cells(gap).has_value());
}

TEST_CASE("region_gain") {
  const HitGrid g = make_grid({{1000}, {500}});
  const Region both = region_of(0, {{0, 0}, {0, 0}});
  CHECK(region_gain(g, both, 0.5) == doctest::Approx(500.0));
  CHECK(region_gain(g, Region{}, 0.7) == 0.0);
  CHECK(region_gain(g, both, 0.0) == 1500.0);
  const Region oob = region_of(1, {{0, 0}, {0, 0}});
  CHECK_THROWS_AS(region_gain(g, oob, 0.5), std::invalid_argument);
}

TEST_CASE("optimize_gain basics") {
  SUBCASE("single bucket") {
    const HitGrid g = make_grid({{800}});
    const Region r = optimize_gain(g, 0.5);
    CHECK(r.eta() == 1);
    CHECK(r.gain(0.5) == doctest::Approx(300.0));
  }
  SUBCASE("tau zero returns the whole grid") {
    std::mt19937 gen(11);
    const HitGrid g = random_grid(gen, 3, 4);
    const Region r = optimize_gain(g, 0.0);
    CHECK(r.eta() == 12);
    long long total = 0;
    for (int h : g.hits) total += h;
    CHECK(r.hit == total);
    CHECK(r.gain(0.0) == static_cast<double>(total));
  }
  SUBCASE("diagonal grid at high slope picks one max bucket") {
    const HitGrid g = make_grid({{1000, 0}, {0, 1000}});
    const Region r = optimize_gain(g, 0.9);
    CHECK(r.eta() == 1);
    CHECK(r.hit == 1000);
    CHECK(r.gain(0.9) == doctest::Approx(100.0));
    const Region b = brute_force_optimize(g, 0.9);
    CHECK(b.gain(0.9) == r.gain(0.9));
  }
  SUBCASE("all-zero hits at positive slope yield the empty region") {
    const HitGrid g = make_grid({{0, 0}, {0, 0}});
    const Region r = optimize_gain(g, 0.5);
    CHECK(r.empty());
    CHECK(r.gain(0.5) == 0.0);
    CHECK(brute_force_optimize(g, 0.5).empty());
  }
}

TEST_CASE("optimize_gain equals brute force on random grids") {
  std::mt19937 gen(12345);
  int trials = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const int mx = 1 + static_cast<int>(gen() % 4);
    const int my = 1 + static_cast<int>(gen() % 4);
    const HitGrid g = random_grid(gen, mx, my);
    for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const Region dp = optimize_gain(g, tau);
      const Region bf = brute_force_optimize(g, tau);
      REQUIRE(is_admissible(dp));
      CHECK(dp.gain(tau) == bf.gain(tau));
      CHECK(dp.support == bf.support);
      CHECK(dp.hit == bf.hit);
      // The DP's answer must re-evaluate to its claimed hit count.
      const Region check = annotate(g, dp, MissingPolicy::Exclude);
      CHECK(check.hit == dp.hit);
      ++trials;
    }
  }
  CHECK(trials == 200);
}

TEST_CASE("optimize_gain equals brute force under missing buckets") {
  std::mt19937 gen(777);
  for (int rep = 0; rep < 15; ++rep) {
    HitGrid g = random_grid(gen, 3, 4);
    for (auto& m : g.missing) m = gen() % 5 == 0 ? 1 : 0;
    for (double tau : {0.25, 0.75}) {
      for (MissingPolicy policy : {MissingPolicy::Exclude, MissingPolicy::ZeroHit}) {
        const Region dp = optimize_gain(g, tau, policy);
        const Region bf = brute_force_optimize(g, tau, policy);
        CHECK(dp.gain(tau) == bf.gain(tau));
        CHECK(dp.support == bf.support);
      }
    }
  }
}

TEST_CASE("optimize_gain equals brute force on tall, wide, and flat grids") {
  std::mt19937 gen(31337);
  const std::pair<int, int> shapes[] = {{1, 8}, {8, 1}, {2, 10}, {10, 2}, {4, 5}, {5, 4}};
  for (const auto& [mx, my] : shapes) {
    for (int rep = 0; rep < 3; ++rep) {
      const HitGrid g = random_grid(gen, mx, my);
      for (double tau : {0.1, 0.37, 0.62, 0.93}) {
        const Region dp = optimize_gain(g, tau);
        const Region bf = brute_force_optimize(g, tau);
        CHECK(dp.gain(tau) == bf.gain(tau));
        CHECK(dp.support == bf.support);
      }
    }
  }
}

TEST_CASE("a fully missing column splits the grid under the exclude policy") {
  HitGrid g = make_grid({{1000, 1000}, {1000, 1000}, {1000, 1000}});
  g.missing[g.index(1, 0)] = 1;
  g.missing[g.index(1, 1)] = 1;
  const Region dp = optimize_gain(g, 0.5, MissingPolicy::Exclude);
  const Region bf = brute_force_optimize(g, 0.5, MissingPolicy::Exclude);
  CHECK(dp.gain(0.5) == bf.gain(0.5));
  // Only one side of the dead column fits in a single region.
  CHECK(dp.support == 2000);
  CHECK(dp.hit == 2000);
  // Under the zero policy crossing the dead column costs exactly its support,
  // which ties the single column on gain; larger support wins the tie.
  const Region z = optimize_gain(g, 0.5, MissingPolicy::ZeroHit);
  const Region zb = brute_force_optimize(g, 0.5, MissingPolicy::ZeroHit);
  CHECK(z.gain(0.5) == zb.gain(0.5));
  CHECK(z.support == 6000);
  CHECK(zb.support == 6000);
}

TEST_CASE("gain function is monotonic over disjoint unions") {
  // Additivity of G on disjoint bucket sets, the property behind the DP.
  std::mt19937 gen(5);
  const HitGrid g = random_grid(gen, 4, 4);
  const auto set_gain = [&](const std::vector<std::pair<int, int>>& cells, double tau) {
    double acc = 0.0;
    for (const auto& [x, y] : cells) {
      acc += g.hit_at(x, y) - tau * g.support_per_bucket;
    }
    return acc;
  };
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::pair<int, int>> left, right, extra;
    for (int x = 0; x < 4; ++x) {
      for (int y = 0; y < 4; ++y) {
        switch (gen() % 4) {
          case 0: left.emplace_back(x, y); break;
          case 1: right.emplace_back(x, y); break;
          case 2: extra.emplace_back(x, y); break;
          default: break;
        }
      }
    }
    const double tau = (gen() % 5) * 0.25;
    const double gl = set_gain(left, tau);
    const double gr = set_gain(right, tau);
    auto lu = left, ru = right;
    lu.insert(lu.end(), extra.begin(), extra.end());
    ru.insert(ru.end(), extra.begin(), extra.end());
    if (gl >= gr) {
      CHECK(set_gain(lu, tau) >= set_gain(ru, tau) - 1e-9);
    } else {
      CHECK(set_gain(lu, tau) <= set_gain(ru, tau) + 1e-9);
    }
  }
}

TEST_CASE("optimize_support examples") {
  const HitGrid g = make_grid({{1000, 1000}, {1000, 0}});
  SUBCASE("theta 0.95 keeps the three confident buckets") {
    const auto res = optimize_support(g, 0.95);
    REQUIRE(res.has_value());
    CHECK(res->region.support == 3000);
    CHECK(res->region.hit == 3000);
    CHECK(res->region.confidence() == 1.0);
    CHECK(is_admissible(res->region));
  }
  SUBCASE("theta 0.7 takes the whole grid") {
    const auto res = optimize_support(g, 0.7);
    REQUIRE(res.has_value());
    CHECK(res->region.support == 4000);
    CHECK(res->region.confidence() == doctest::Approx(0.75));
  }
  SUBCASE("theta 0 takes the whole grid") {
    const auto res = optimize_support(g, 0.0);
    REQUIRE(res.has_value());
    CHECK(res->region.eta() == 4);
  }
}

TEST_CASE("optimize_support soundness against enumeration") {
  std::mt19937 gen(2024);
  for (int rep = 0; rep < 12; ++rep) {
    const int mx = 2 + static_cast<int>(gen() % 3);
    const int my = 2 + static_cast<int>(gen() % 3);
    const HitGrid g = random_grid(gen, mx, my);
    for (double theta : {0.7, 0.9, 0.95, 0.99}) {
      const auto res = optimize_support(g, theta);

      // Independent enumeration of the true optimized-support optimum.
      long long best_support = -1;
      const int n = mx * my;
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::pair<int, int>> cells;
        long long hit = 0;
        for (int i = 0; i < n; ++i) {
          if (mask >> i & 1u) {
            cells.emplace_back(i / my, i % my);
            hit += g.hits[i];
          }
        }
        const auto region = Region::from_cells(cells);
        if (!region || !is_admissible(*region)) continue;
        const long long support =
            static_cast<long long>(g.support_per_bucket) * region->eta();
        if (static_cast<double>(hit) >= theta * static_cast<double>(support)) {
          best_support = std::max(best_support, support);
        }
      }

      if (res) {
        CHECK(is_admissible(res->region));
        CHECK(static_cast<double>(res->region.hit) >=
              theta * static_cast<double>(res->region.support));
        REQUIRE(best_support >= 0);
        CHECK(res->region.support <= best_support);
      } else {
        CHECK(best_support < 0);
      }
    }
  }
}

TEST_CASE("optimized-gain support is non-increasing in tau") {
  std::mt19937 gen(31);
  const HitGrid g = random_grid(gen, 6, 6);
  long long prev = -1;
  for (int i = 0; i <= 40; ++i) {
    const double tau = static_cast<double>(i) / 40.0;
    const Region r = optimize_gain(g, tau);
    if (prev >= 0) CHECK(r.support <= prev);
    prev = r.support;
  }
}

TEST_CASE("optimize_confidence examples") {
  const HitGrid g = make_grid({{1000, 1000}, {1000, 0}});
  SUBCASE("eta 3 floor") {
    const auto res = optimize_confidence(g, 3000);
    REQUIRE(res.has_value());
    CHECK(res->region.support == 3000);
    CHECK(res->region.confidence() == 1.0);
  }
  SUBCASE("support floor M forces the whole grid") {
    const auto res = optimize_confidence(g, 4000);
    REQUIRE(res.has_value());
    CHECK(res->region.eta() == 4);
    CHECK(res->region.confidence() == doctest::Approx(3000.0 / 4000.0));
  }
  SUBCASE("eta 0 returns the best single bucket on a spread grid") {
    const HitGrid spread = make_grid({{500, 200}, {100, 400}});
    const auto res = optimize_confidence(spread, 0);
    REQUIRE(res.has_value());
    CHECK(res->region.confidence() == doctest::Approx(0.5));
    CHECK(res->region.eta() == 1);
  }
}

TEST_CASE("gain symmetry on a diagonally symmetric grid") {
  std::mt19937 gen(99);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 4;
    std::vector<std::vector<int>> cols(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y <= x; ++y) {
        const int h = static_cast<int>(gen() % 1001);
        cols[x][y] = h;
        cols[y][x] = h;
      }
    }
    const HitGrid g = make_grid(cols);
    for (double tau : {0.25, 0.5, 0.9}) {
      const Region r = optimize_gain(g, tau);
      if (r.empty()) continue;
      // Reflect across the main diagonal and re-evaluate.
      auto cells = r.cells();
      for (auto& [x, y] : cells) std::swap(x, y);
      const auto reflected = Region::from_cells(cells);
      REQUIRE(reflected.has_value());
      CHECK(is_admissible(*reflected));
      CHECK(region_gain(g, *reflected, tau) == doctest::Approx(r.gain(tau)).epsilon(1e-12));
    }
  }
}

TEST_CASE("every optimizer output is admissible") {
  std::mt19937 gen(404);
  for (int rep = 0; rep < 10; ++rep) {
    const HitGrid g = random_grid(gen, 5, 3);
    CHECK(is_admissible(optimize_gain(g, 0.37)));
    const auto sup = optimize_support(g, 0.8);
    if (sup) CHECK(is_admissible(sup->region));
    const auto conf = optimize_confidence(g, 2000);
    if (conf) CHECK(is_admissible(conf->region));
  }
}

TEST_CASE("brute force refuses oversized grids") {
  std::mt19937 gen(1);
  const HitGrid g = random_grid(gen, 5, 5);
  CHECK_THROWS_AS(brute_force_optimize(g, 0.5), std::invalid_argument);
}

TEST_CASE("model_based_region_confidence") {
  SUBCASE("single bucket is rejected") {
    std::vector<BucketEstimate> buckets(1);
    buckets[0].mean = 5e-4;
    buckets[0].variance = 1e-8;
    buckets[0].n_total = 6;
    const std::vector<double> w{1.0};
    CHECK_THROWS_AS(model_based_region_confidence(buckets, w, 1e-3), std::invalid_argument);
  }
  SUBCASE("small variance, both means below T") {
    std::vector<BucketEstimate> buckets(2);
    for (auto& b : buckets) {
      b.variance = 1e-13;
      b.n_total = 4;
    }
    buckets[0].mean = 4e-4;
    buckets[1].mean = 6e-4;
    const std::vector<double> w{1.0, 1.0};
    CHECK(model_based_region_confidence(buckets, w, 1e-3) > 0.999);
  }
  SUBCASE("small variance, both means above T") {
    std::vector<BucketEstimate> buckets(2);
    for (auto& b : buckets) {
      b.variance = 1e-13;
      b.n_total = 4;
    }
    buckets[0].mean = 2e-3;
    buckets[1].mean = 3e-3;
    const std::vector<double> w{1.0, 1.0};
    CHECK(model_based_region_confidence(buckets, w, 1e-3) < 0.001);
  }
  SUBCASE("weights must be positive and aligned") {
    std::vector<BucketEstimate> buckets(2);
    for (auto& b : buckets) {
      b.mean = 1e-4;
      b.n_total = 2;
    }
    const std::vector<double> bad{1.0, -1.0};
    CHECK_THROWS_AS(model_based_region_confidence(buckets, bad, 1e-3), std::invalid_argument);
    const std::vector<double> misaligned{1.0};
    CHECK_THROWS_AS(model_based_region_confidence(buckets, misaligned, 1e-3),
                    std::invalid_argument);
  }
}
