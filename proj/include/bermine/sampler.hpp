#ifndef BERMINE_SAMPLER_HPP
#define BERMINE_SAMPLER_HPP

#include <cstdint>
#include <functional>

#include "bermine/database.hpp"

namespace bermine {

// Draws block `block_index` for a point. Implementations must be pure
// functions of (point, block_index) so sweeps are order-independent.
using BlockSimulator = std::function<BerSample(const PointConfig&, int block_index)>;

// Monte Carlo blocks through simulate_block, clamped to the three-error floor.
BlockSimulator make_mc_simulator(const SimBlockConfig& cfg);

// Closed-form oracle with relative Gaussian noise: value = clip(bep*(1+eps)),
// eps ~ N(0, noise_sd_rel^2), clipped into (0, 0.5] via the clamp floor.
BlockSimulator make_synthetic_simulator(double noise_sd_rel, const SimBlockConfig& cfg);

// Draws blocks until stopping rule 1 or 2 fires (checked after every block
// once n >= max(2, cfg.min_samples)) or the sample cap is reached. Rule 1 is
// recorded when both fire on the same block.
PointRecord sample_point(const PointConfig& p, const StoppingConfig& cfg,
                         const BlockSimulator& sim);

// Full-grid sweep. On a square grid only points with s1 <= s2 are simulated;
// the lower triangle is filled by symmetric reflection and marked mirrored.
// Points are independent work units; `jobs` > 1 runs them on worker threads
// with results identical to the sequential order.
PerformanceDatabase sweep(const GridSpec& grid, const StoppingConfig& cfg,
                          const BlockSimulator& sim, int jobs = 1);

// Per-point sample sizes and sd-to-mean ratios, aligned with the database
// grid; NaN marks missing cells.
struct Diagnostics {
  std::vector<double> sample_size;
  std::vector<double> sd_over_mean;
};

Diagnostics diagnostics(const PerformanceDatabase& db);

// Test fixture: a database with a fixed number of noisy oracle samples per
// point, no stopping rules. noise_sd_rel = 0 reproduces the oracle surface.
PerformanceDatabase synthetic_surface(const GridSpec& grid, int samples_per_point,
                                      double noise_sd_rel, std::uint64_t seed,
                                      const SimBlockConfig& cfg = {});

}  // namespace bermine

#endif  // BERMINE_SAMPLER_HPP
