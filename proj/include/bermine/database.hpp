#ifndef BERMINE_DATABASE_HPP
#define BERMINE_DATABASE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bermine/simgen.hpp"
#include "bermine/stats.hpp"

namespace bermine {

// Inclusive lattice lo, lo+step, ..., hi.
struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
  std::vector<double> values() const;
  int size() const;
};

GridSpec parse_grid_spec(const std::string& text);  // "lo:hi:step"

enum class StopReason {
  RelativeAccuracy,  // rule 1
  Threshold,         // rule 2
  SampleCap,         // rule 3
  Unknown,           // loaded from disk or generated by a fixture
};

const char* to_string(StopReason r);

struct PointRecord {
  PointConfig point;
  std::vector<BerSample> samples;
  StopReason stop_reason = StopReason::Unknown;
  bool mirrored = false;
};

// The sampled configuration space: ordinal domains on both axes and one
// optional record per lattice cell. Cells are stored x-major: (ix, iy) lives
// at index ix*ny + iy.
struct PerformanceDatabase {
  std::vector<double> xs;  // domain of S1, ascending
  std::vector<double> ys;  // domain of S2, ascending
  std::vector<std::optional<PointRecord>> cells;

  int nx() const { return static_cast<int>(xs.size()); }
  int ny() const { return static_cast<int>(ys.size()); }
  int index(int ix, int iy) const { return ix * ny() + iy; }
  const std::optional<PointRecord>& at(int ix, int iy) const { return cells[index(ix, iy)]; }
  std::optional<PointRecord>& at(int ix, int iy) { return cells[index(ix, iy)]; }

  static PerformanceDatabase empty_grid(const GridSpec& grid);
  static PerformanceDatabase empty_grid(std::vector<double> xs, std::vector<double> ys);
};

}  // namespace bermine

#endif  // BERMINE_DATABASE_HPP
