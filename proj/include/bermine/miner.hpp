#ifndef BERMINE_MINER_HPP
#define BERMINE_MINER_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bermine/bucketing.hpp"

namespace bermine {

// Connected rectilinear region in column-interval form: columns col_lo..
// col_lo+intervals.size()-1, with a contiguous row interval [s, t] per
// column. hit/support are filled in by whoever evaluated the region.
struct Region {
  int col_lo = 0;
  std::vector<std::pair<int, int>> intervals;
  long long hit = 0;
  long long support = 0;

  bool empty() const { return intervals.empty(); }
  int eta() const;
  double confidence() const;
  double gain(double tau) const;
  int col_hi() const { return col_lo + static_cast<int>(intervals.size()) - 1; }
  std::vector<std::pair<int, int>> cells() const;

  // Column-interval form of an arbitrary cell set, or nullopt when some
  // column's rows are not contiguous. hit/support are left unset.
  static std::optional<Region> from_cells(std::span<const std::pair<int, int>> cells);
};

// How masked buckets are treated by the optimizers: Exclude bans regions from
// covering them; ZeroHit treats them as hit 0.
enum class MissingPolicy { Exclude, ZeroHit };

const char* to_string(MissingPolicy p);

// Admissible = rectilinear and Manhattan-connected: all intervals nonempty,
// consecutive intervals overlap, the top boundary is pseudoconcave and the
// bottom boundary is pseudoconvex.
bool is_admissible(const Region& region);

// Exact gain/confidence comparisons for slopes quantized to tau = p / 2^48.
// Quantization makes gain ties exact integer identities, so the DP and the
// brute-force oracle break them identically.
class GainCmp {
 public:
  static GainCmp from_tau(double tau);
  // Sign of (gain, support) lexicographic comparison of (h1,s1) vs (h2,s2).
  int cmp(long long h1, long long s1, long long h2, long long s2) const;
  double tau() const;
  std::int64_t numerator() const { return p_; }

 private:
  explicit GainCmp(std::int64_t p) : p_(p) {}
  std::int64_t p_;
};

// G = H - tau*S over the effective hits; throws when the region leaves the
// grid or covers a masked bucket under the Exclude policy.
double region_gain(const HitGrid& grid, const Region& region, double tau,
                   MissingPolicy policy = MissingPolicy::Exclude);

// Recompute hit/support of a region against a grid (same error conditions).
Region annotate(const HitGrid& grid, Region region, MissingPolicy policy);

// Maximum-gain admissible region for a slope via the four-phase
// boundary-state dynamic program, O(M_X M_Y^2). Ties prefer larger support;
// the empty region (gain 0) is a valid result.
Region optimize_gain(const HitGrid& grid, double tau,
                     MissingPolicy policy = MissingPolicy::Exclude);

// Exhaustive oracle over all 2^M subsets; refuses grids larger than 20
// buckets. Tie-breaking: larger support, then smaller first column, then
// lexicographically smallest bottom then top boundary vectors.
Region brute_force_optimize(const HitGrid& grid, double tau,
                            MissingPolicy policy = MissingPolicy::Exclude);

struct MineResult {
  Region region;
  double tau_final = 0.0;
};

// Largest region with confidence >= theta, by binary search on the slope to
// precision (1000 M)^-2 over optimize_gain; returns the best qualifying
// region across all visited slopes, or nullopt when none qualifies.
std::optional<MineResult> optimize_support(const HitGrid& grid, double theta,
                                           MissingPolicy policy = MissingPolicy::Exclude);

// Most confident region with support >= min_support (= 1000 eta), same
// binary-search scheme.
std::optional<MineResult> optimize_confidence(const HitGrid& grid, long long min_support,
                                              MissingPolicy policy = MissingPolicy::Exclude);

// Strongly model-based region confidence F_{eta-1}((T - Q)/(Psi/sqrt(eta)))
// with Q the weighted bucket-mean mixture and Psi^2 its estimate variance.
// Provided for comparison with the hit-ratio confidence; requires eta >= 2.
double model_based_region_confidence(std::span<const BucketEstimate> buckets,
                                     std::span<const double> weights, double T);

}  // namespace bermine

#endif  // BERMINE_MINER_HPP
