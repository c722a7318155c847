#include "bermine/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace bermine {

BlockSimulator make_mc_simulator(const SimBlockConfig& cfg) {
  return [cfg](const PointConfig& p, int block_index) {
    SimBlockConfig block = cfg;
    block.seed = derive_block_seed(cfg.seed, p.s1_db, p.s2_db, block_index);
    const SampleRecord rec = simulate_block(p, block);
    return clamp_sample(static_cast<double>(rec.errors), rec.bits);
  };
}

BlockSimulator make_synthetic_simulator(double noise_sd_rel, const SimBlockConfig& cfg) {
  if (!(noise_sd_rel >= 0.0)) {
    throw std::invalid_argument("make_synthetic_simulator: noise_sd_rel must be >= 0");
  }
  const std::uint64_t bits = cfg.bits();
  return [noise_sd_rel, cfg, bits](const PointConfig& p, int block_index) {
    double value = closed_form_bep(p);
    if (noise_sd_rel > 0.0) {
      SplitMix64 rng(derive_block_seed(cfg.seed, p.s1_db, p.s2_db, block_index));
      value *= 1.0 + noise_sd_rel * rng.next_normal();
    }
    value = std::clamp(value, 0.0, 0.5);
    // Route through the pseudo error count so store/load round-trips exactly.
    return clamp_sample(value * static_cast<double>(bits), bits);
  };
}

PointRecord sample_point(const PointConfig& p, const StoppingConfig& cfg,
                         const BlockSimulator& sim) {
  if (cfg.min_samples < 2 || cfg.max_samples < cfg.min_samples) {
    throw std::invalid_argument("sample_point: need 2 <= min_samples <= max_samples");
  }
  PointRecord rec;
  rec.point = p;
  for (int i = 0; i < cfg.max_samples; ++i) {
    rec.samples.push_back(sim(p, i));
    const int n = static_cast<int>(rec.samples.size());
    if (n < cfg.min_samples) continue;
    const PointEstimate est = point_estimate(rec.samples);
    if (rule_relative_accuracy(est, cfg)) {
      rec.stop_reason = StopReason::RelativeAccuracy;
      return rec;
    }
    if (rule_threshold(est, cfg)) {
      rec.stop_reason = StopReason::Threshold;
      return rec;
    }
  }
  rec.stop_reason = StopReason::SampleCap;
  return rec;
}

PerformanceDatabase sweep(const GridSpec& grid, const StoppingConfig& cfg,
                          const BlockSimulator& sim, int jobs) {
  PerformanceDatabase db = PerformanceDatabase::empty_grid(grid);
  const int n = db.nx();

  // Upper triangle (s1 <= s2) only; the rest is reflected afterwards.
  std::vector<std::pair<int, int>> work;
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = ix; iy < n; ++iy) work.emplace_back(ix, iy);
  }

  const auto run_point = [&](int ix, int iy) {
    const PointConfig p{db.xs[ix], db.ys[iy]};
    db.at(ix, iy) = sample_point(p, cfg, sim);
  };

  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (const auto& [ix, iy] : work) run_point(ix, iy);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= work.size()) return;
          run_point(work[i].first, work[i].second);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < ix; ++iy) {
      const auto& src = db.at(iy, ix);
      PointRecord rec = *src;
      rec.point = PointConfig{db.xs[ix], db.ys[iy]};
      rec.mirrored = true;
      db.at(ix, iy) = std::move(rec);
    }
  }
  return db;
}

Diagnostics diagnostics(const PerformanceDatabase& db) {
  const double nan = std::nan("");
  Diagnostics d;
  d.sample_size.assign(db.cells.size(), nan);
  d.sd_over_mean.assign(db.cells.size(), nan);
  for (std::size_t i = 0; i < db.cells.size(); ++i) {
    const auto& rec = db.cells[i];
    if (!rec || rec->samples.size() < 2) continue;
    const PointEstimate est = point_estimate(rec->samples);
    d.sample_size[i] = static_cast<double>(est.n);
    d.sd_over_mean[i] = std::sqrt(est.variance) / est.mean;
  }
  return d;
}

PerformanceDatabase synthetic_surface(const GridSpec& grid, int samples_per_point,
                                      double noise_sd_rel, std::uint64_t seed,
                                      const SimBlockConfig& cfg) {
  if (samples_per_point < 1) {
    throw std::invalid_argument("synthetic_surface: samples_per_point must be >= 1");
  }
  SimBlockConfig block = cfg;
  block.seed = seed;
  const BlockSimulator sim = make_synthetic_simulator(noise_sd_rel, block);
  PerformanceDatabase db = PerformanceDatabase::empty_grid(grid);
  for (int ix = 0; ix < db.nx(); ++ix) {
    for (int iy = 0; iy < db.ny(); ++iy) {
      PointRecord rec;
      rec.point = PointConfig{db.xs[ix], db.ys[iy]};
      for (int i = 0; i < samples_per_point; ++i) {
        rec.samples.push_back(sim(rec.point, i));
      }
      db.at(ix, iy) = std::move(rec);
    }
  }
  return db;
}

}  // namespace bermine
