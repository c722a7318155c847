#ifndef BERMINE_IO_HPP
#define BERMINE_IO_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bermine/analysis.hpp"
#include "bermine/database.hpp"
#include "bermine/miner.hpp"

namespace bermine {

// Filesystem and format failures; the CLI maps these to its I/O exit code.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

// Database CSV with header s1_db,s2_db,sample_idx,bits,errors,mirrored and
// one row per sample block. Lossless: load(store(db)) reproduces coordinates,
// samples, and mirrored flags exactly; stop reasons are not persisted and
// load as Unknown.
void store_database(const PerformanceDatabase& db, const std::string& path);
PerformanceDatabase load_database(const std::string& path);

// Region persistence (JSON). Column entries carry domain values, not indices.
struct RegionFileData {
  std::string objective;
  double tau_final = 0.0;
  std::optional<double> theta;
  std::optional<long long> min_support;
  double T = 0.0;
  long long support = 0;
  long long hit = 0;
  double confidence = 0.0;
  struct Column {
    double x = 0.0;
    double s = 0.0;
    double t = 0.0;
  };
  std::vector<Column> columns;
  std::string missing_policy;
  std::string tie_break;
};

RegionFileData make_region_file(const Region& region, const PerformanceDatabase& db,
                                const std::string& objective, double tau_final,
                                std::optional<double> theta, std::optional<long long> min_support,
                                double T, MissingPolicy policy);
void store_region_file(const RegionFileData& data, const std::string& path);
RegionFileData load_region_file(const std::string& path);

// Region read back as grid indices against a database's domains.
Region region_from_file(const RegionFileData& data, const PerformanceDatabase& db);

// Labeled matrix CSV: first row "y\\x" plus x values, then one row per y
// value. NaN cells are written as "nan". Values are x-major, index ix*ny+iy.
void write_matrix_csv(const std::string& path, const std::vector<double>& xs,
                      const std::vector<double>& ys, const std::vector<double>& values);

void write_ecdf_csv(const std::string& path,
                    const std::vector<std::pair<double, double>>& steps);

void write_slice_csv(const std::string& path, const std::string& coord_name,
                     const std::vector<SlicePoint>& slice);

}  // namespace bermine

#endif  // BERMINE_IO_HPP
