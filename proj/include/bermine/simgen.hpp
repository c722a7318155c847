#ifndef BERMINE_SIMGEN_HPP
#define BERMINE_SIMGEN_HPP

#include <cstdint>

#include "bermine/stats.hpp"

namespace bermine {

// One configuration: the average SNRs of the two transmit branches, in dB.
struct PointConfig {
  double s1_db = 0.0;
  double s2_db = 0.0;
};

// One Monte Carlo block: frames * bits_per_frame information bits with one
// fading draw per branch per frame.
struct SimBlockConfig {
  int frames = 10000;
  int bits_per_frame = 80;
  std::uint64_t seed = 0;
  std::uint64_t bits() const {
    return static_cast<std::uint64_t>(frames) * static_cast<std::uint64_t>(bits_per_frame);
  }
};

// Raw outcome of one simulated block.
struct SampleRecord {
  std::uint64_t errors = 0;
  std::uint64_t bits = 0;
};

double db_to_linear(double db);
double linear_to_db(double lin);

// Gaussian tail probability Q(x).
double q_function(double x);

// Branch power imbalance factor alpha = 10^(-0.1 |S1 - S2|); 1 at balance.
double imbalance_factor(const PointConfig& p);

// Effective SNR S = 10 log10((10^(0.1 S1) + 10^(0.1 S2)) / 2), in dB.
// Fixing S fixes total transmit power.
double effective_snr_db(const PointConfig& p);

// Exact average BEP of BPSK with maximal-ratio combining of two independent
// Rayleigh branches with mean linear SNRs gbar1, gbar2. Used as the
// verification oracle for the Monte Carlo path.
double bep_two_branch(double gbar1, double gbar2);
double closed_form_bep(const PointConfig& p);

// SplitMix64 (Steele, Lea & Flood 2014). Small, portable, and splittable by
// seed derivation, which keeps sweep results independent of scheduling order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform in [0, 1) with 53 random bits.
  double next_unit();
  // Exponential with the given mean.
  double next_exponential(double mean);
  // Standard normal via Box-Muller (one variate per call).
  double next_normal();

 private:
  std::uint64_t state_;
};

// Per-block seed as a hash of (master seed, point coordinates, block index).
std::uint64_t derive_block_seed(std::uint64_t master, double s1_db, double s2_db,
                                int block_index);

// Semi-analytic Monte Carlo of one block: per frame draw the two branch SNRs
// from their exponential fading distributions, then draw Bernoulli bit errors
// at p = Q(sqrt(2 (g1 + g2))). Deterministic given (p, cfg.seed).
SampleRecord simulate_block(const PointConfig& p, const SimBlockConfig& cfg);

}  // namespace bermine

#endif  // BERMINE_SIMGEN_HPP
