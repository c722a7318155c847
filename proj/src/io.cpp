#include "bermine/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bermine {

namespace {

[[noreturn]] void fail_io(const std::string& what) { throw IoError("io: " + what); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail_io("bad numeric field '" + s + "' on line " + std::to_string(line_no));
  }
  return 0.0;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void store_database(const PerformanceDatabase& db, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail_io("cannot open '" + path + "' for writing");
  out << "s1_db,s2_db,sample_idx,bits,errors,mirrored\n";
  for (int ix = 0; ix < db.nx(); ++ix) {
    for (int iy = 0; iy < db.ny(); ++iy) {
      const auto& rec = db.at(ix, iy);
      if (!rec) continue;
      for (std::size_t idx = 0; idx < rec->samples.size(); ++idx) {
        const BerSample& s = rec->samples[idx];
        out << format_double(rec->point.s1_db) << ',' << format_double(rec->point.s2_db) << ','
            << idx << ',' << s.bits << ',' << format_double(s.errors) << ','
            << (rec->mirrored ? 1 : 0) << '\n';
      }
    }
  }
  if (!out.good()) fail_io("write failed for '" + path + "'");
}

PerformanceDatabase load_database(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != "s1_db,s2_db,sample_idx,bits,errors,mirrored") {
    fail_io("'" + path + "' is not a database file (bad header)");
  }

  struct Row {
    std::size_t idx;
    BerSample sample;
    bool mirrored;
  };
  std::map<std::pair<double, double>, std::vector<Row>> points;
  std::set<double> xs, ys;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 6) {
      fail_io("expected 6 fields on line " + std::to_string(line_no));
    }
    const double s1 = parse_double(fields[0], line_no);
    const double s2 = parse_double(fields[1], line_no);
    const double idx = parse_double(fields[2], line_no);
    const double bits = parse_double(fields[3], line_no);
    const double errors = parse_double(fields[4], line_no);
    const double mirrored = parse_double(fields[5], line_no);
    if (bits < 3 || bits != std::floor(bits)) {
      fail_io("bits must be an integer >= 3 on line " + std::to_string(line_no));
    }
    if (mirrored != 0.0 && mirrored != 1.0) {
      fail_io("mirrored must be 0 or 1 on line " + std::to_string(line_no));
    }
    if (idx < 0 || idx != std::floor(idx)) {
      fail_io("sample_idx must be a non-negative integer on line " + std::to_string(line_no));
    }
    Row row;
    row.idx = static_cast<std::size_t>(idx);
    row.sample = clamp_sample(errors, static_cast<std::uint64_t>(bits));
    row.mirrored = mirrored == 1.0;
    points[{s1, s2}].push_back(row);
    xs.insert(s1);
    ys.insert(s2);
  }
  if (points.empty()) fail_io("'" + path + "' holds no samples");

  PerformanceDatabase db = PerformanceDatabase::empty_grid(
      std::vector<double>(xs.begin(), xs.end()), std::vector<double>(ys.begin(), ys.end()));
  const auto find_index = [](const std::vector<double>& vals, double v) {
    const auto it = std::lower_bound(vals.begin(), vals.end(), v);
    return static_cast<int>(it - vals.begin());
  };
  for (auto& [coord, rows] : points) {
    PointRecord rec;
    rec.point = PointConfig{coord.first, coord.second};
    rec.stop_reason = StopReason::Unknown;
    rec.samples.resize(rows.size());
    std::vector<bool> seen(rows.size(), false);
    for (const Row& row : rows) {
      if (row.idx >= rows.size() || seen[row.idx]) {
        fail_io("sample_idx values for point (" + format_double(coord.first) + ", " +
                format_double(coord.second) + ") are not unique and contiguous");
      }
      seen[row.idx] = true;
      rec.samples[row.idx] = row.sample;
      rec.mirrored = row.mirrored;
    }
    db.at(find_index(db.xs, coord.first), find_index(db.ys, coord.second)) = std::move(rec);
  }
  return db;
}

RegionFileData make_region_file(const Region& region, const PerformanceDatabase& db,
                                const std::string& objective, double tau_final,
                                std::optional<double> theta, std::optional<long long> min_support,
                                double T, MissingPolicy policy) {
  RegionFileData data;
  data.objective = objective;
  data.tau_final = tau_final;
  data.theta = theta;
  data.min_support = min_support;
  data.T = T;
  data.support = region.support;
  data.hit = region.hit;
  data.confidence = region.confidence();
  data.missing_policy = to_string(policy);
  data.tie_break = "support_then_lex";
  for (std::size_t i = 0; i < region.intervals.size(); ++i) {
    RegionFileData::Column col;
    col.x = db.xs[region.col_lo + static_cast<int>(i)];
    col.s = db.ys[region.intervals[i].first];
    col.t = db.ys[region.intervals[i].second];
    data.columns.push_back(col);
  }
  return data;
}

void store_region_file(const RegionFileData& data, const std::string& path) {
  nlohmann::json j;
  j["objective"] = data.objective;
  j["tau_final"] = data.tau_final;
  j["theta"] = data.theta ? nlohmann::json(*data.theta) : nlohmann::json(nullptr);
  j["min_support"] =
      data.min_support ? nlohmann::json(*data.min_support) : nlohmann::json(nullptr);
  j["T"] = data.T;
  j["support"] = data.support;
  j["hit"] = data.hit;
  j["confidence"] = data.confidence;
  j["missing_policy"] = data.missing_policy;
  j["tie_break"] = data.tie_break;
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : data.columns) {
    cols.push_back({{"x", c.x}, {"s", c.s}, {"t", c.t}});
  }
  j["columns"] = cols;
  std::ofstream out(path);
  if (!out) fail_io("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out.good()) fail_io("write failed for '" + path + "'");
}

RegionFileData load_region_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open '" + path + "' for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail_io("'" + path + "' is not valid JSON: " + e.what());
  }
  RegionFileData data;
  try {
    data.objective = j.at("objective").get<std::string>();
    data.tau_final = j.at("tau_final").get<double>();
    if (!j.at("theta").is_null()) data.theta = j.at("theta").get<double>();
    if (j.contains("min_support") && !j.at("min_support").is_null()) {
      data.min_support = j.at("min_support").get<long long>();
    }
    data.T = j.at("T").get<double>();
    data.support = j.at("support").get<long long>();
    data.hit = j.at("hit").get<long long>();
    data.confidence = j.at("confidence").get<double>();
    data.missing_policy = j.at("missing_policy").get<std::string>();
    data.tie_break = j.at("tie_break").get<std::string>();
    for (const auto& c : j.at("columns")) {
      data.columns.push_back({c.at("x").get<double>(), c.at("s").get<double>(),
                              c.at("t").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    fail_io("'" + path + "' is missing region fields: " + e.what());
  }
  return data;
}

Region region_from_file(const RegionFileData& data, const PerformanceDatabase& db) {
  Region region;
  if (data.columns.empty()) return region;
  const auto index_of = [](const std::vector<double>& vals, double v, const char* axis) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (vals[i] == v) return static_cast<int>(i);
    }
    fail_io(std::string("region coordinate not on the database ") + axis + " axis");
    return -1;
  };
  region.col_lo = index_of(db.xs, data.columns.front().x, "x");
  for (std::size_t i = 0; i < data.columns.size(); ++i) {
    const auto& c = data.columns[i];
    if (index_of(db.xs, c.x, "x") != region.col_lo + static_cast<int>(i)) {
      fail_io("region columns are not contiguous on the database x axis");
    }
    region.intervals.emplace_back(index_of(db.ys, c.s, "y"), index_of(db.ys, c.t, "y"));
  }
  region.hit = data.hit;
  region.support = data.support;
  return region;
}

void write_matrix_csv(const std::string& path, const std::vector<double>& xs,
                      const std::vector<double>& ys, const std::vector<double>& values) {
  if (values.size() != xs.size() * ys.size()) {
    throw std::invalid_argument("write_matrix_csv: values not aligned with axes");
  }
  std::ofstream out(path);
  if (!out) fail_io("cannot open '" + path + "' for writing");
  out << "y\\x";
  for (double x : xs) out << ',' << format_double(x);
  out << '\n';
  const std::size_t ny = ys.size();
  for (std::size_t iy = 0; iy < ny; ++iy) {
    out << format_double(ys[iy]);
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
      out << ',' << format_double(values[ix * ny + iy]);
    }
    out << '\n';
  }
  if (!out.good()) fail_io("write failed for '" + path + "'");
}

void write_ecdf_csv(const std::string& path,
                    const std::vector<std::pair<double, double>>& steps) {
  std::ofstream out(path);
  if (!out) fail_io("cannot open '" + path + "' for writing");
  out << "value,cumulative_fraction\n";
  for (const auto& [v, f] : steps) {
    out << format_double(v) << ',' << format_double(f) << '\n';
  }
  if (!out.good()) fail_io("write failed for '" + path + "'");
}

void write_slice_csv(const std::string& path, const std::string& coord_name,
                     const std::vector<SlicePoint>& slice) {
  std::ofstream out(path);
  if (!out) fail_io("cannot open '" + path + "' for writing");
  out << coord_name << ",log10_ber,masked\n";
  for (const auto& p : slice) {
    out << format_double(p.coordinate) << ',' << format_double(p.value) << ','
        << (p.masked ? 1 : 0) << '\n';
  }
  if (!out.good()) fail_io("write failed for '" + path + "'");
}

}  // namespace bermine
