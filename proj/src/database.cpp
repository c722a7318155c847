#include "bermine/database.hpp"

#include <cmath>
#include <stdexcept>

namespace bermine {

std::vector<double> GridSpec::values() const {
  if (!(step > 0.0)) {
    throw std::invalid_argument("GridSpec: step must be positive");
  }
  if (hi < lo) {
    throw std::invalid_argument("GridSpec: hi must be >= lo");
  }
  std::vector<double> v;
  for (int i = 0;; ++i) {
    double x = lo + i * step;
    if (x > hi + 0.5 * step) break;
    // Snap accumulated rounding onto the endpoint so lattices like
    // 0.1:1:0.1 end exactly at hi.
    if (std::fabs(x - hi) <= 1e-9 * step) x = hi;
    v.push_back(x);
  }
  return v;
}

int GridSpec::size() const { return static_cast<int>(values().size()); }

GridSpec parse_grid_spec(const std::string& text) {
  GridSpec g;
  const auto a = text.find(':');
  const auto b = text.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) {
    throw std::invalid_argument("grid spec must be lo:hi:step");
  }
  std::size_t used = 0;
  try {
    g.lo = std::stod(text.substr(0, a), &used);
    g.hi = std::stod(text.substr(a + 1, b - a - 1), &used);
    g.step = std::stod(text.substr(b + 1), &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("grid spec must be lo:hi:step with numeric fields");
  }
  if (!(g.step > 0.0) || g.hi < g.lo || !std::isfinite(g.lo) || !std::isfinite(g.hi)) {
    throw std::invalid_argument("grid spec must satisfy lo <= hi and step > 0");
  }
  return g;
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::RelativeAccuracy: return "relative_accuracy";
    case StopReason::Threshold: return "threshold";
    case StopReason::SampleCap: return "sample_cap";
    case StopReason::Unknown: return "unknown";
  }
  return "unknown";
}

PerformanceDatabase PerformanceDatabase::empty_grid(const GridSpec& grid) {
  auto vals = grid.values();
  return empty_grid(vals, vals);
}

PerformanceDatabase PerformanceDatabase::empty_grid(std::vector<double> xs,
                                                    std::vector<double> ys) {
  PerformanceDatabase db;
  db.xs = std::move(xs);
  db.ys = std::move(ys);
  db.cells.assign(static_cast<std::size_t>(db.nx()) * db.ny(), std::nullopt);
  return db;
}

}  // namespace bermine
