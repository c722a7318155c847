#include "bermine/miner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace bermine {

namespace {

constexpr int kSlopeBits = 48;
constexpr std::int64_t kSlopeOne = std::int64_t{1} << kSlopeBits;

using int128 = __int128;

}  // namespace

int Region::eta() const {
  int n = 0;
  for (const auto& [s, t] : intervals) n += t - s + 1;
  return n;
}

double Region::confidence() const {
  return support > 0 ? static_cast<double>(hit) / static_cast<double>(support) : 0.0;
}

double Region::gain(double tau) const {
  return static_cast<double>(hit) - tau * static_cast<double>(support);
}

std::vector<std::pair<int, int>> Region::cells() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    for (int y = intervals[i].first; y <= intervals[i].second; ++y) {
      out.emplace_back(col_lo + static_cast<int>(i), y);
    }
  }
  return out;
}

std::optional<Region> Region::from_cells(std::span<const std::pair<int, int>> cells) {
  Region r;
  if (cells.empty()) return r;
  std::map<int, std::array<int, 3>> cols;  // x -> {min y, max y, count}
  for (const auto& [x, y] : cells) {
    auto it = cols.find(x);
    if (it == cols.end()) {
      cols[x] = {y, y, 1};
    } else {
      it->second[0] = std::min(it->second[0], y);
      it->second[1] = std::max(it->second[1], y);
      it->second[2] += 1;
    }
  }
  const int xmin = cols.begin()->first;
  const int xmax = cols.rbegin()->first;
  if (xmax - xmin + 1 != static_cast<int>(cols.size())) return std::nullopt;
  r.col_lo = xmin;
  for (const auto& [x, mm] : cols) {
    if (mm[1] - mm[0] + 1 != mm[2]) return std::nullopt;  // rows not contiguous
    r.intervals.emplace_back(mm[0], mm[1]);
  }
  return r;
}

const char* to_string(MissingPolicy p) {
  return p == MissingPolicy::Exclude ? "exclude" : "zero";
}

bool is_admissible(const Region& region) {
  const auto& iv = region.intervals;
  if (iv.empty()) return true;
  for (const auto& [s, t] : iv) {
    if (s > t) return false;
  }
  for (std::size_t i = 0; i + 1 < iv.size(); ++i) {
    if (iv[i + 1].first > iv[i].second || iv[i].first > iv[i + 1].second) {
      return false;  // consecutive intervals do not overlap
    }
  }
  bool top_falling = false;
  for (std::size_t i = 0; i + 1 < iv.size(); ++i) {
    if (iv[i + 1].second < iv[i].second) top_falling = true;
    else if (iv[i + 1].second > iv[i].second && top_falling) return false;
  }
  bool bottom_rising = false;
  for (std::size_t i = 0; i + 1 < iv.size(); ++i) {
    if (iv[i + 1].first > iv[i].first) bottom_rising = true;
    else if (iv[i + 1].first < iv[i].first && bottom_rising) return false;
  }
  return true;
}

GainCmp GainCmp::from_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("slope tau must lie in [0, 1]");
  }
  return GainCmp(static_cast<std::int64_t>(std::llround(tau * static_cast<double>(kSlopeOne))));
}

int GainCmp::cmp(long long h1, long long s1, long long h2, long long s2) const {
  const int128 dgain = (static_cast<int128>(h1 - h2) << kSlopeBits) -
                       static_cast<int128>(p_) * static_cast<int128>(s1 - s2);
  if (dgain > 0) return 1;
  if (dgain < 0) return -1;
  if (s1 != s2) return s1 > s2 ? 1 : -1;
  return 0;
}

double GainCmp::tau() const {
  return static_cast<double>(p_) * std::pow(2.0, -kSlopeBits);
}

namespace {

long long effective_hit(const HitGrid& grid, int x, int y, MissingPolicy policy) {
  if (grid.missing_at(x, y)) {
    if (policy == MissingPolicy::Exclude) {
      throw std::invalid_argument("region covers a missing bucket under the exclude policy");
    }
    return 0;
  }
  return grid.hit_at(x, y);
}

}  // namespace

Region annotate(const HitGrid& grid, Region region, MissingPolicy policy) {
  region.hit = 0;
  region.support = 0;
  for (std::size_t i = 0; i < region.intervals.size(); ++i) {
    const int x = region.col_lo + static_cast<int>(i);
    const auto [s, t] = region.intervals[i];
    if (x < 0 || x >= grid.mx || s < 0 || t >= grid.my || s > t) {
      throw std::invalid_argument("region outside grid bounds");
    }
    for (int y = s; y <= t; ++y) {
      region.hit += effective_hit(grid, x, y, policy);
      region.support += grid.support_per_bucket;
    }
  }
  return region;
}

double region_gain(const HitGrid& grid, const Region& region, double tau,
                   MissingPolicy policy) {
  const Region r = annotate(grid, region, policy);
  return static_cast<double>(r.hit) - tau * static_cast<double>(r.support);
}

namespace {

struct Cand {
  long long h = 0;
  long long s = -1;  // -1 marks an unreachable state
  bool valid() const { return s >= 0; }
};

struct ArgCand {
  Cand c;
  std::int16_t as = -1;
  std::int16_t at = -1;
};

void take_better(const GainCmp& cmp, ArgCand& into, const ArgCand& from) {
  if (!from.c.valid()) return;
  if (!into.c.valid() || cmp.cmp(from.c.h, from.c.s, into.c.h, into.c.s) > 0) into = from;
}

}  // namespace

Region optimize_gain(const HitGrid& grid, double tau, MissingPolicy policy) {
  if (grid.mx <= 0 || grid.my <= 0) {
    throw std::invalid_argument("optimize_gain: empty grid");
  }
  const GainCmp cmp = GainCmp::from_tau(tau);
  const int MX = grid.mx;
  const int MY = grid.my;
  const long long sup = grid.support_per_bucket;

  // Boundary phases: W widening, U slanting up, D slanting down, N narrowing.
  // Admissible step words are W* then U* or D* then N*, so the tables feed
  // forward as W -> {U, D} -> N and never back.
  enum Phase : std::uint8_t { W = 0, U = 1, D = 2, N = 3 };
  enum Kind : std::uint8_t { kFresh = 0, kIntra = 1, kPred = 2, kNone = 3 };
  struct Parent {
    Kind kind = kNone;
    std::uint8_t phase = 0;
    std::int16_t s = -1;
    std::int16_t t = -1;
  };

  const auto iv = [MY](int s, int t) { return s * MY + t; };
  std::vector<Parent> parents(static_cast<std::size_t>(MX) * 4 * MY * MY);
  const auto pidx = [MY](int m, int ph, int s, int t) {
    return ((static_cast<std::size_t>(m) * 4 + ph) * MY + s) * MY + t;
  };

  std::array<std::vector<Cand>, 4> prev;
  std::array<std::vector<Cand>, 4> cur;
  for (auto& v : prev) v.assign(static_cast<std::size_t>(MY) * MY, Cand{});
  for (auto& v : cur) v.assign(static_cast<std::size_t>(MY) * MY, Cand{});
  std::vector<ArgCand> A(static_cast<std::size_t>(MY) * MY);
  std::vector<ArgCand> gU(A.size()), MUt(A.size()), gD(A.size()), MDt(A.size()), BN(A.size());

  Cand best{0, 0};  // the empty region is always a candidate
  int best_m = -1, best_s = -1, best_t = -1;
  bool have_prev = false;

  std::vector<long long> pref(MY + 1, 0);
  std::vector<char> banned(MY, 0);

  for (int m = 0; m < MX; ++m) {
    for (int y = 0; y < MY; ++y) {
      banned[y] = 0;
      long long h = 0;
      if (grid.missing_at(m, y)) {
        if (policy == MissingPolicy::Exclude) banned[y] = 1;
      } else {
        h = grid.hit_at(m, y);
      }
      pref[y + 1] = pref[y] + h;
    }

    if (have_prev) {
      // A[s][t]: best W-state of the previous column contained in [s, t].
      for (int s = MY - 1; s >= 0; --s) {
        for (int t = s; t < MY; ++t) {
          ArgCand a;
          const Cand own = prev[W][iv(s, t)];
          if (own.valid()) a = ArgCand{own, static_cast<std::int16_t>(s), static_cast<std::int16_t>(t)};
          if (s + 1 <= t) take_better(cmp, a, A[iv(s + 1, t)]);
          if (t - 1 >= s) take_better(cmp, a, A[iv(s, t - 1)]);
          A[iv(s, t)] = a;
        }
      }
      // U step: predecessor [s', t'] with s' <= s and s <= t' <= t.
      for (int tp = 0; tp < MY; ++tp) {
        ArgCand acc;
        for (int sp = 0; sp < MY; ++sp) {
          if (sp <= tp) {
            const Cand c = prev[U][iv(sp, tp)];
            if (c.valid()) {
              take_better(cmp, acc,
                          ArgCand{c, static_cast<std::int16_t>(sp), static_cast<std::int16_t>(tp)});
            }
          }
          gU[iv(sp, tp)] = acc;  // max over s' <= min(sp, tp)
        }
      }
      for (int s = 0; s < MY; ++s) {
        ArgCand acc;
        for (int t = s; t < MY; ++t) {
          take_better(cmp, acc, gU[iv(s, t)]);
          MUt[iv(s, t)] = acc;
        }
      }
      // D step: predecessor [s', t'] with t' >= t and s <= s' <= t.
      for (int sp = 0; sp < MY; ++sp) {
        ArgCand acc;
        for (int tp = MY - 1; tp >= sp; --tp) {
          const Cand c = prev[D][iv(sp, tp)];
          if (c.valid()) {
            take_better(cmp, acc,
                        ArgCand{c, static_cast<std::int16_t>(sp), static_cast<std::int16_t>(tp)});
          }
          gD[iv(sp, tp)] = acc;  // max over t' >= tp
        }
      }
      for (int t = 0; t < MY; ++t) {
        ArgCand acc;
        for (int s = t; s >= 0; --s) {
          take_better(cmp, acc, gD[iv(s, t)]);
          MDt[iv(s, t)] = acc;
        }
      }
      // N step: predecessor interval contains [s, t].
      for (int s = 0; s < MY; ++s) {
        for (int t = MY - 1; t >= s; --t) {
          ArgCand a;
          const Cand own = prev[N][iv(s, t)];
          if (own.valid()) a = ArgCand{own, static_cast<std::int16_t>(s), static_cast<std::int16_t>(t)};
          if (s - 1 >= 0) take_better(cmp, a, BN[iv(s - 1, t)]);
          if (t + 1 < MY) take_better(cmp, a, BN[iv(s, t + 1)]);
          BN[iv(s, t)] = a;
        }
      }
    }

    for (auto& v : cur) v.assign(static_cast<std::size_t>(MY) * MY, Cand{});
    for (int s = 0; s < MY; ++s) {
      if (banned[s]) continue;
      for (int t = s; t < MY && !banned[t]; ++t) {
        const long long wh = pref[t + 1] - pref[s];
        const long long ws = sup * (t - s + 1);
        const auto extend = [&](const ArgCand& a) {
          return Cand{a.c.h + wh, a.c.s + ws};
        };

        Cand cw{wh, ws};
        Parent pw{kFresh, W, -1, -1};
        if (have_prev) {
          const ArgCand& a = A[iv(s, t)];
          if (a.c.valid()) {
            const Cand ext = extend(a);
            if (cmp.cmp(ext.h, ext.s, cw.h, cw.s) > 0) {
              cw = ext;
              pw = Parent{kPred, W, a.as, a.at};
            }
          }
        }
        cur[W][iv(s, t)] = cw;
        parents[pidx(m, W, s, t)] = pw;

        Cand cu = cw;
        Parent pu{kIntra, W, static_cast<std::int16_t>(s), static_cast<std::int16_t>(t)};
        if (have_prev) {
          const ArgCand& a = MUt[iv(s, t)];
          if (a.c.valid()) {
            const Cand ext = extend(a);
            if (cmp.cmp(ext.h, ext.s, cu.h, cu.s) > 0) {
              cu = ext;
              pu = Parent{kPred, U, a.as, a.at};
            }
          }
        }
        cur[U][iv(s, t)] = cu;
        parents[pidx(m, U, s, t)] = pu;

        Cand cd = cw;
        Parent pd{kIntra, W, static_cast<std::int16_t>(s), static_cast<std::int16_t>(t)};
        if (have_prev) {
          const ArgCand& a = MDt[iv(s, t)];
          if (a.c.valid()) {
            const Cand ext = extend(a);
            if (cmp.cmp(ext.h, ext.s, cd.h, cd.s) > 0) {
              cd = ext;
              pd = Parent{kPred, D, a.as, a.at};
            }
          }
        }
        cur[D][iv(s, t)] = cd;
        parents[pidx(m, D, s, t)] = pd;

        Cand cn = cu;
        Parent pn{kIntra, U, static_cast<std::int16_t>(s), static_cast<std::int16_t>(t)};
        if (cmp.cmp(cd.h, cd.s, cn.h, cn.s) > 0) {
          cn = cd;
          pn = Parent{kIntra, D, static_cast<std::int16_t>(s), static_cast<std::int16_t>(t)};
        }
        if (have_prev) {
          const ArgCand& a = BN[iv(s, t)];
          if (a.c.valid()) {
            const Cand ext = extend(a);
            if (cmp.cmp(ext.h, ext.s, cn.h, cn.s) > 0) {
              cn = ext;
              pn = Parent{kPred, N, a.as, a.at};
            }
          }
        }
        cur[N][iv(s, t)] = cn;
        parents[pidx(m, N, s, t)] = pn;

        if (cmp.cmp(cn.h, cn.s, best.h, best.s) > 0) {
          best = cn;
          best_m = m;
          best_s = s;
          best_t = t;
        }
      }
    }
    std::swap(prev, cur);
    have_prev = true;
  }

  Region region;
  if (best_m < 0) return region;  // empty region, gain 0

  std::vector<std::pair<int, int>> ivs;
  int m = best_m, ph = N, s = best_s, t = best_t;
  for (;;) {
    const Parent& p = parents[pidx(m, ph, s, t)];
    if (p.kind == kIntra) {
      ph = p.phase;
      continue;
    }
    ivs.emplace_back(s, t);
    if (p.kind == kFresh) {
      region.col_lo = m;
      break;
    }
    ph = p.phase;
    s = p.s;
    t = p.t;
    --m;
  }
  std::reverse(ivs.begin(), ivs.end());
  region.intervals = std::move(ivs);
  region.hit = best.h;
  region.support = best.s;
  return region;
}

namespace {

// Full deterministic order for the oracle: gain, support, then smaller first
// column, then lexicographically smaller bottom and top boundaries.
bool oracle_better(const GainCmp& cmp, const Region& a, const Region& b) {
  const int c = cmp.cmp(a.hit, a.support, b.hit, b.support);
  if (c != 0) return c > 0;
  if (a.col_lo != b.col_lo) return a.col_lo < b.col_lo;
  const auto bottom = [](const Region& r) {
    std::vector<int> v;
    for (const auto& p : r.intervals) v.push_back(p.first);
    return v;
  };
  const auto top = [](const Region& r) {
    std::vector<int> v;
    for (const auto& p : r.intervals) v.push_back(p.second);
    return v;
  };
  const auto ba = bottom(a), bb = bottom(b);
  if (ba != bb) return std::lexicographical_compare(ba.begin(), ba.end(), bb.begin(), bb.end());
  const auto ta = top(a), tb = top(b);
  return std::lexicographical_compare(ta.begin(), ta.end(), tb.begin(), tb.end());
}

}  // namespace

Region brute_force_optimize(const HitGrid& grid, double tau, MissingPolicy policy) {
  const long long M = grid.total_buckets();
  if (M > 20) {
    throw std::invalid_argument("brute_force_optimize: refusing grids larger than 20 buckets");
  }
  const GainCmp cmp = GainCmp::from_tau(tau);
  const int n = static_cast<int>(M);

  std::uint32_t banned_mask = 0;
  std::vector<long long> eff(n, 0);
  std::vector<std::pair<int, int>> coords(n);
  for (int ix = 0; ix < grid.mx; ++ix) {
    for (int iy = 0; iy < grid.my; ++iy) {
      const int i = grid.index(ix, iy);
      coords[i] = {ix, iy};
      if (grid.missing_at(ix, iy)) {
        if (policy == MissingPolicy::Exclude) banned_mask |= 1u << i;
      } else {
        eff[i] = grid.hit_at(ix, iy);
      }
    }
  }

  Region best;  // empty, gain 0
  std::vector<std::pair<int, int>> cells;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (mask & banned_mask) continue;
    cells.clear();
    long long H = 0;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1u) {
        cells.push_back(coords[i]);
        H += eff[i];
      }
    }
    auto region = Region::from_cells(cells);
    if (!region || !is_admissible(*region)) continue;
    region->hit = H;
    region->support = static_cast<long long>(grid.support_per_bucket) * region->eta();
    if (oracle_better(cmp, *region, best)) best = std::move(*region);
  }
  return best;
}

namespace {

bool confidence_at_least(const Region& r, double theta) {
  return static_cast<double>(r.hit) >= theta * static_cast<double>(r.support);
}

}  // namespace

std::optional<MineResult> optimize_support(const HitGrid& grid, double theta,
                                           MissingPolicy policy) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("optimize_support: theta must lie in [0, 1]");
  }
  const double span = static_cast<double>(grid.support_per_bucket) *
                      static_cast<double>(grid.total_buckets());
  const double dtau = 1.0 / (span * span);
  const std::int64_t step = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(dtau * static_cast<double>(kSlopeOne)));

  std::optional<MineResult> best;
  const auto eval = [&](std::int64_t p) {
    const double tau = static_cast<double>(p) * std::pow(2.0, -kSlopeBits);
    Region r = optimize_gain(grid, tau, policy);
    const bool ok = !r.empty() && confidence_at_least(r, theta);
    if (ok && (!best || r.support > best->region.support ||
               (r.support == best->region.support && r.hit > best->region.hit))) {
      best = MineResult{std::move(r), tau};
      return true;
    }
    return ok;
  };

  eval(0);
  eval(kSlopeOne);
  std::int64_t lo = 0, hi = kSlopeOne;
  while (hi - lo > step) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (eval(mid)) {
      hi = mid;  // qualifying: cheaper slopes may give more support
    } else {
      lo = mid;
    }
  }
  return best;
}

std::optional<MineResult> optimize_confidence(const HitGrid& grid, long long min_support,
                                              MissingPolicy policy) {
  const long long max_support = static_cast<long long>(grid.support_per_bucket) *
                                grid.total_buckets();
  if (min_support < 0 || min_support > max_support) {
    throw std::invalid_argument("optimize_confidence: min_support outside [0, 1000 M]");
  }

  std::optional<MineResult> best;
  const auto conf_better = [](const Region& a, const Region& b) {
    const int128 d = static_cast<int128>(a.hit) * b.support - static_cast<int128>(b.hit) * a.support;
    if (d != 0) return d > 0;
    return a.support > b.support;
  };
  const auto eval = [&](std::int64_t p) {
    const double tau = static_cast<double>(p) * std::pow(2.0, -kSlopeBits);
    Region r = optimize_gain(grid, tau, policy);
    const bool ok = !r.empty() && r.support >= min_support;
    if (ok && (!best || conf_better(r, best->region))) {
      best = MineResult{std::move(r), tau};
      return true;
    }
    return ok;
  };

  const double span = static_cast<double>(grid.support_per_bucket) *
                      static_cast<double>(grid.total_buckets());
  const double dtau = 1.0 / (span * span);
  const std::int64_t step = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(dtau * static_cast<double>(kSlopeOne)));

  eval(0);
  eval(kSlopeOne);
  std::int64_t lo = 0, hi = kSlopeOne;
  while (hi - lo > step) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (eval(mid)) {
      lo = mid;  // qualifying: larger slopes may give more confidence
    } else {
      hi = mid;
    }
  }
  return best;
}

double model_based_region_confidence(std::span<const BucketEstimate> buckets,
                                     std::span<const double> weights, double T) {
  if (buckets.size() != weights.size()) {
    throw std::invalid_argument("model_based_region_confidence: weights misaligned");
  }
  const int eta = static_cast<int>(buckets.size());
  if (eta < 2) {
    throw std::invalid_argument(
        "model_based_region_confidence: undefined for regions of fewer than 2 buckets");
  }
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) {
      throw std::invalid_argument("model_based_region_confidence: weights must be positive");
    }
    wsum += w;
  }
  double q = 0.0;
  double psi2 = 0.0;
  for (int i = 0; i < eta; ++i) {
    q += weights[i] * buckets[i].mean;
    psi2 += weights[i] * weights[i] * buckets[i].variance;
  }
  q /= wsum;
  psi2 /= wsum * wsum;
  if (psi2 == 0.0) {
    if (q < T) return 1.0;
    if (q > T) return 0.0;
    return 0.5;
  }
  const double se = std::sqrt(psi2 / eta);
  return student_t_cdf((T - q) / se, eta - 1);
}

}  // namespace bermine
