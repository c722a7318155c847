#ifndef BERMINE_ANALYSIS_HPP
#define BERMINE_ANALYSIS_HPP

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bermine/database.hpp"
#include "bermine/miner.hpp"

namespace bermine {

// Loess surface: local linear least squares over the span-fraction nearest
// neighbors with tricube weights (1 - (d/d_max)^3)^3.
class FittedSurface {
 public:
  struct Sample {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
  };
  struct Eval {
    double value = 0.0;
    bool fallback = false;  // degenerate neighborhood, weighted mean used
  };

  FittedSurface(std::vector<Sample> points, double span);

  Eval at(double x, double y) const;
  bool in_domain(double x, double y) const;
  double span() const { return span_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Sample> points_;
  double span_;
  int neighbors_;
  double min_x_, max_x_, min_y_, max_y_;
};

FittedSurface loess_fit(std::vector<FittedSurface::Sample> points, double span = 0.05);

// Database points as (s1, s2, log10 mean BER) training samples for the fit.
std::vector<FittedSurface::Sample> log_ber_samples(const PerformanceDatabase& db);

struct SlicePoint {
  double coordinate = 0.0;  // effective SNR or imbalance factor
  double value = 0.0;
  bool masked = false;  // outside the training domain
};

// 1D slices through the fitted surface: fixed imbalance factor with varying
// effective SNR, and fixed effective SNR with varying imbalance. The (alpha,
// S) pair is inverted to branch SNRs with S1 <= S2.
PointConfig invert_alpha_snr(double alpha, double effective_snr);
std::vector<SlicePoint> slice_fixed_alpha(const FittedSurface& surface, double alpha,
                                          std::span<const double> snr_values);
std::vector<SlicePoint> slice_fixed_snr(const FittedSurface& surface, double effective_snr,
                                        std::span<const double> alpha_values);

// Right-continuous empirical CDF steps (value, cumulative fraction), one step
// per sample, sorted ascending.
std::vector<std::pair<double, double>> ecdf(std::span<const double> samples);

// Leave-one-slice-out cross-validation: fold j drops sample index j from
// every point that has it, recomputes the hit grid, and mines the
// optimized-support region. Points left with fewer than two samples are
// masked for that fold and flagged.
struct CrossValReport {
  int folds = 0;
  double T = 0.0;
  double theta = 0.0;
  std::vector<std::optional<MineResult>> fold_results;
  struct Overlap {
    int fold_a = 0;
    int fold_b = 0;
    double jaccard = 0.0;
  };
  std::vector<Overlap> overlaps;
  // (fold, ix, iy) of points masked for a fold.
  std::vector<std::array<int, 3>> excluded;
};

CrossValReport cross_validate(const PerformanceDatabase& db, int folds, double T,
                              double theta, MissingPolicy policy = MissingPolicy::Exclude,
                              int scale = 1000);

// Bucket-set Jaccard index of two regions; 1.0 when both are empty.
double region_jaccard(const Region& a, const Region& b);

}  // namespace bermine

#endif  // BERMINE_ANALYSIS_HPP
