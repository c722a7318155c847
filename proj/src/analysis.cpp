#include "bermine/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bermine/bucketing.hpp"

namespace bermine {

FittedSurface::FittedSurface(std::vector<Sample> points, double span)
    : points_(std::move(points)), span_(span) {
  if (points_.size() < 3) {
    throw std::invalid_argument("FittedSurface: need at least 3 training points");
  }
  if (!(span > 0.0 && span <= 1.0)) {
    throw std::invalid_argument("FittedSurface: span must lie in (0, 1]");
  }
  neighbors_ = std::max(3, static_cast<int>(std::ceil(span * static_cast<double>(points_.size()))));
  neighbors_ = std::min(neighbors_, static_cast<int>(points_.size()));
  min_x_ = max_x_ = points_[0].x;
  min_y_ = max_y_ = points_[0].y;
  for (const auto& p : points_) {
    min_x_ = std::min(min_x_, p.x);
    max_x_ = std::max(max_x_, p.x);
    min_y_ = std::min(min_y_, p.y);
    max_y_ = std::max(max_y_, p.y);
  }
}

bool FittedSurface::in_domain(double x, double y) const {
  return x >= min_x_ && x <= max_x_ && y >= min_y_ && y <= max_y_;
}

FittedSurface::Eval FittedSurface::at(double x, double y) const {
  struct Neighbor {
    double d2, dx, dy, z;
    bool operator<(const Neighbor& o) const {
      if (d2 != o.d2) return d2 < o.d2;
      if (dx != o.dx) return dx < o.dx;
      if (dy != o.dy) return dy < o.dy;
      return z < o.z;
    }
  };
  std::vector<Neighbor> nb;
  nb.reserve(points_.size());
  for (const auto& p : points_) {
    const double dx = p.x - x;
    const double dy = p.y - y;
    nb.push_back(Neighbor{dx * dx + dy * dy, dx, dy, p.z});
  }
  // Full deterministic order keeps the fit invariant to training permutation.
  std::sort(nb.begin(), nb.end());
  nb.resize(neighbors_);

  const double dmax = std::sqrt(nb.back().d2);
  if (dmax == 0.0) {
    double zsum = 0.0;
    for (const auto& p : nb) zsum += p.z;
    return Eval{zsum / static_cast<double>(nb.size()), true};
  }

  // Tricube weights and normal equations of the local plane in coordinates
  // centered at the query, so the intercept is the prediction.
  double s = 0, su = 0, sv = 0, suu = 0, suv = 0, svv = 0, sz = 0, suz = 0, svz = 0;
  for (const auto& p : nb) {
    const double r = std::sqrt(p.d2) / dmax;
    const double c = 1.0 - r * r * r;
    const double w = c * c * c;
    s += w;
    su += w * p.dx;
    sv += w * p.dy;
    suu += w * p.dx * p.dx;
    suv += w * p.dx * p.dy;
    svv += w * p.dy * p.dy;
    sz += w * p.z;
    suz += w * p.dx * p.z;
    svz += w * p.dy * p.z;
  }

  double a[3][4] = {
      {s, su, sv, sz},
      {su, suu, suv, suz},
      {sv, suv, svv, svz},
  };
  double scale = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) scale = std::max(scale, std::fabs(a[i][j]));
  }
  // Gaussian elimination with partial pivoting; a tiny pivot means the
  // neighborhood is collinear or otherwise degenerate.
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (std::fabs(a[piv][col]) <= 1e-12 * scale) {
      return Eval{sz / s, true};
    }
    if (piv != col) std::swap(a[piv], a[col]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int j = col; j < 4; ++j) a[r][j] -= f * a[col][j];
    }
  }
  double sol[3];
  for (int i = 2; i >= 0; --i) {
    double acc = a[i][3];
    for (int j = i + 1; j < 3; ++j) acc -= a[i][j] * sol[j];
    sol[i] = acc / a[i][i];
  }
  return Eval{sol[0], false};
}

FittedSurface loess_fit(std::vector<FittedSurface::Sample> points, double span) {
  return FittedSurface(std::move(points), span);
}

std::vector<FittedSurface::Sample> log_ber_samples(const PerformanceDatabase& db) {
  std::vector<FittedSurface::Sample> out;
  for (int ix = 0; ix < db.nx(); ++ix) {
    for (int iy = 0; iy < db.ny(); ++iy) {
      const auto& rec = db.at(ix, iy);
      if (!rec || rec->samples.empty()) continue;
      double sum = 0.0;
      for (const auto& smp : rec->samples) sum += smp.value;
      const double mean = sum / static_cast<double>(rec->samples.size());
      out.push_back({db.xs[ix], db.ys[iy], std::log10(mean)});
    }
  }
  return out;
}

PointConfig invert_alpha_snr(double alpha, double effective_snr) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("imbalance factor must lie in (0, 1]");
  }
  const double delta_db = -10.0 * std::log10(alpha);
  const double g1 = 2.0 * db_to_linear(effective_snr) * alpha / (1.0 + alpha);
  const double s1 = linear_to_db(g1);
  return PointConfig{s1, s1 + delta_db};
}

std::vector<SlicePoint> slice_fixed_alpha(const FittedSurface& surface, double alpha,
                                          std::span<const double> snr_values) {
  std::vector<SlicePoint> out;
  out.reserve(snr_values.size());
  for (double snr : snr_values) {
    const PointConfig p = invert_alpha_snr(alpha, snr);
    SlicePoint sp;
    sp.coordinate = snr;
    if (surface.in_domain(p.s1_db, p.s2_db)) {
      sp.value = surface.at(p.s1_db, p.s2_db).value;
    } else {
      sp.masked = true;
      sp.value = std::nan("");
    }
    out.push_back(sp);
  }
  return out;
}

std::vector<SlicePoint> slice_fixed_snr(const FittedSurface& surface, double effective_snr,
                                        std::span<const double> alpha_values) {
  std::vector<SlicePoint> out;
  out.reserve(alpha_values.size());
  for (double alpha : alpha_values) {
    const PointConfig p = invert_alpha_snr(alpha, effective_snr);
    SlicePoint sp;
    sp.coordinate = alpha;
    if (surface.in_domain(p.s1_db, p.s2_db)) {
      sp.value = surface.at(p.s1_db, p.s2_db).value;
    } else {
      sp.masked = true;
      sp.value = std::nan("");
    }
    out.push_back(sp);
  }
  return out;
}

std::vector<std::pair<double, double>> ecdf(std::span<const double> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("ecdf: empty sample");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> steps;
  steps.reserve(sorted.size());
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    steps.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
  }
  return steps;
}

double region_jaccard(const Region& a, const Region& b) {
  auto ca = a.cells();
  auto cb = b.cells();
  if (ca.empty() && cb.empty()) return 1.0;
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  std::vector<std::pair<int, int>> inter;
  std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(inter));
  const double uni = static_cast<double>(ca.size() + cb.size() - inter.size());
  return static_cast<double>(inter.size()) / uni;
}

CrossValReport cross_validate(const PerformanceDatabase& db, int folds, double T,
                              double theta, MissingPolicy policy, int scale) {
  if (folds < 2) {
    throw std::invalid_argument("cross_validate: need at least 2 folds");
  }
  CrossValReport report;
  report.folds = folds;
  report.T = T;
  report.theta = theta;

  for (int j = 0; j < folds; ++j) {
    PerformanceDatabase fold = db;
    for (int ix = 0; ix < fold.nx(); ++ix) {
      for (int iy = 0; iy < fold.ny(); ++iy) {
        auto& rec = fold.at(ix, iy);
        if (!rec) continue;
        if (j < static_cast<int>(rec->samples.size())) {
          rec->samples.erase(rec->samples.begin() + j);
        }
        if (rec->samples.size() < 2) {
          rec.reset();
          report.excluded.push_back({j, ix, iy});
        }
      }
    }
    const ConfidenceMap map = confidence_map(fold, T, scale);
    report.fold_results.push_back(optimize_support(map.grid, theta, policy));
  }

  const Region empty;
  for (int a = 0; a < folds; ++a) {
    for (int b = a + 1; b < folds; ++b) {
      const Region& ra = report.fold_results[a] ? report.fold_results[a]->region : empty;
      const Region& rb = report.fold_results[b] ? report.fold_results[b]->region : empty;
      report.overlaps.push_back({a, b, region_jaccard(ra, rb)});
    }
  }
  return report;
}

}  // namespace bermine
