#include "bermine/simgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace bermine {

double db_to_linear(double db) { return std::pow(10.0, 0.1 * db); }

double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double imbalance_factor(const PointConfig& p) {
  return std::pow(10.0, -0.1 * std::fabs(p.s1_db - p.s2_db));
}

double effective_snr_db(const PointConfig& p) {
  return 10.0 * std::log10(0.5 * (db_to_linear(p.s1_db) + db_to_linear(p.s2_db)));
}

double bep_two_branch(double gbar1, double gbar2) {
  if (!(gbar1 >= 0.0) || !(gbar2 >= 0.0)) {
    throw std::invalid_argument("bep_two_branch: mean SNRs must be non-negative");
  }
  if (gbar1 == 0.0 && gbar2 == 0.0) return 0.5;
  const double hi = std::max(gbar1, gbar2);
  // Confluent (equal-means) limit: P = ((1-mu)/2)^2 (2+mu).
  if (std::fabs(gbar1 - gbar2) <= 1e-12 * hi) {
    const double g = 0.5 * (gbar1 + gbar2);
    const double mu = std::sqrt(g / (1.0 + g));
    const double q = 0.5 * (1.0 - mu);
    return q * q * (2.0 + mu);
  }
  const double mu1 = std::sqrt(gbar1 / (1.0 + gbar1));
  const double mu2 = std::sqrt(gbar2 / (1.0 + gbar2));
  return 0.5 * (1.0 - (gbar1 * mu1 - gbar2 * mu2) / (gbar1 - gbar2));
}

double closed_form_bep(const PointConfig& p) {
  return bep_two_branch(db_to_linear(p.s1_db), db_to_linear(p.s2_db));
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_exponential(double mean) {
  return -mean * std::log1p(-next_unit());
}

double SplitMix64::next_normal() {
  // Box-Muller; u1 shifted away from zero so the log is finite.
  const double u1 = (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_block_seed(std::uint64_t master, double s1_db, double s2_db,
                                int block_index) {
  std::uint64_t h = mix64(master + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ std::bit_cast<std::uint64_t>(s1_db));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(s2_db));
  h = mix64(h ^ static_cast<std::uint64_t>(block_index));
  return h;
}

SampleRecord simulate_block(const PointConfig& p, const SimBlockConfig& cfg) {
  if (cfg.frames < 1 || cfg.bits_per_frame < 1) {
    throw std::invalid_argument("simulate_block: frames and bits_per_frame must be positive");
  }
  const double gbar1 = db_to_linear(p.s1_db);
  const double gbar2 = db_to_linear(p.s2_db);
  SplitMix64 rng(cfg.seed);
  std::uint64_t errors = 0;
  for (int f = 0; f < cfg.frames; ++f) {
    // Quasi-static fading: one SNR draw per branch per frame.
    const double g = rng.next_exponential(gbar1) + rng.next_exponential(gbar2);
    const double pe = q_function(std::sqrt(2.0 * g));
    for (int b = 0; b < cfg.bits_per_frame; ++b) {
      errors += rng.next_unit() < pe ? 1 : 0;
    }
  }
  return SampleRecord{errors, cfg.bits()};
}

}  // namespace bermine
