#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bermine/analysis.hpp"
#include "bermine/bucketing.hpp"
#include "bermine/io.hpp"
#include "bermine/miner.hpp"
#include "bermine/sampler.hpp"

namespace py = pybind11;
using namespace bermine;

PYBIND11_MODULE(_bermine, m) {
  m.doc() = "Monte Carlo BER performance databases and confidence-region mining";

  // stats
  py::class_<BerSample>(m, "BerSample")
      .def(py::init<>())
      .def_readwrite("errors", &BerSample::errors)
      .def_readwrite("bits", &BerSample::bits)
      .def_readwrite("value", &BerSample::value)
      .def("__repr__", [](const BerSample& s) {
        return "BerSample(errors=" + std::to_string(s.errors) +
               ", bits=" + std::to_string(s.bits) + ", value=" + std::to_string(s.value) + ")";
      });
  py::class_<PointEstimate>(m, "PointEstimate")
      .def(py::init<>())
      .def(py::init([](double mean, double variance, int n) {
             return PointEstimate{mean, variance, n};
           }),
           py::arg("mean"), py::arg("variance"), py::arg("n"))
      .def_readwrite("mean", &PointEstimate::mean)
      .def_readwrite("variance", &PointEstimate::variance)
      .def_readwrite("n", &PointEstimate::n);
  py::class_<StoppingConfig>(m, "StoppingConfig")
      .def(py::init<>())
      .def_readwrite("beta", &StoppingConfig::beta)
      .def_readwrite("gamma", &StoppingConfig::gamma)
      .def_readwrite("t_threshold", &StoppingConfig::t_threshold)
      .def_readwrite("max_samples", &StoppingConfig::max_samples)
      .def_readwrite("min_samples", &StoppingConfig::min_samples);

  m.def("student_t_cdf", &student_t_cdf, py::arg("x"), py::arg("dof"));
  m.def("regularized_incomplete_beta", &regularized_incomplete_beta, py::arg("a"), py::arg("b"),
        py::arg("x"));
  m.def("clamp_sample", &clamp_sample, py::arg("errors"), py::arg("bits"));
  m.def("point_estimate", [](const std::vector<BerSample>& samples) {
    return point_estimate(samples);
  });
  m.def("point_estimate_values", [](const std::vector<double>& values) {
    return point_estimate_values(values);
  });
  m.def("confidence_below", &confidence_below, py::arg("est"), py::arg("T"));
  m.def("rule_relative_accuracy", &rule_relative_accuracy, py::arg("est"), py::arg("cfg"));
  m.def("rule_threshold", &rule_threshold, py::arg("est"), py::arg("cfg"));

  // simgen
  py::class_<PointConfig>(m, "PointConfig")
      .def(py::init<>())
      .def(py::init([](double s1, double s2) { return PointConfig{s1, s2}; }),
           py::arg("s1_db"), py::arg("s2_db"))
      .def_readwrite("s1_db", &PointConfig::s1_db)
      .def_readwrite("s2_db", &PointConfig::s2_db);
  py::class_<SimBlockConfig>(m, "SimBlockConfig")
      .def(py::init<>())
      .def_readwrite("frames", &SimBlockConfig::frames)
      .def_readwrite("bits_per_frame", &SimBlockConfig::bits_per_frame)
      .def_readwrite("seed", &SimBlockConfig::seed)
      .def("bits", &SimBlockConfig::bits);
  py::class_<SampleRecord>(m, "SampleRecord")
      .def_readonly("errors", &SampleRecord::errors)
      .def_readonly("bits", &SampleRecord::bits);

  m.def("db_to_linear", &db_to_linear);
  m.def("linear_to_db", &linear_to_db);
  m.def("q_function", &q_function);
  m.def("imbalance_factor", &imbalance_factor);
  m.def("effective_snr_db", &effective_snr_db);
  m.def("bep_two_branch", &bep_two_branch, py::arg("gbar1"), py::arg("gbar2"));
  m.def("closed_form_bep", &closed_form_bep);
  m.def("simulate_block", &simulate_block, py::arg("point"), py::arg("cfg"));
  m.def("derive_block_seed", &derive_block_seed);

  // database / sampler
  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](double lo, double hi, double step) {
             return GridSpec{lo, hi, step};
           }),
           py::arg("lo"), py::arg("hi"), py::arg("step") = 1.0)
      .def_readwrite("lo", &GridSpec::lo)
      .def_readwrite("hi", &GridSpec::hi)
      .def_readwrite("step", &GridSpec::step)
      .def("values", &GridSpec::values)
      .def("size", &GridSpec::size);
  py::enum_<StopReason>(m, "StopReason")
      .value("RelativeAccuracy", StopReason::RelativeAccuracy)
      .value("Threshold", StopReason::Threshold)
      .value("SampleCap", StopReason::SampleCap)
      .value("Unknown", StopReason::Unknown);
  py::class_<PointRecord>(m, "PointRecord")
      .def_readonly("point", &PointRecord::point)
      .def_readonly("samples", &PointRecord::samples)
      .def_readonly("stop_reason", &PointRecord::stop_reason)
      .def_readonly("mirrored", &PointRecord::mirrored);
  py::class_<PerformanceDatabase>(m, "PerformanceDatabase")
      .def_readonly("xs", &PerformanceDatabase::xs)
      .def_readonly("ys", &PerformanceDatabase::ys)
      .def("nx", &PerformanceDatabase::nx)
      .def("ny", &PerformanceDatabase::ny)
      .def("record",
           [](const PerformanceDatabase& db, int ix, int iy) -> py::object {
             const auto& rec = db.at(ix, iy);
             if (!rec) return py::none();
             return py::cast(*rec);
           },
           py::arg("ix"), py::arg("iy"));

  m.def("make_mc_simulator", &make_mc_simulator);
  m.def("make_synthetic_simulator", &make_synthetic_simulator, py::arg("noise_sd_rel"),
        py::arg("cfg"));
  m.def("sample_point", &sample_point, py::arg("point"), py::arg("cfg"), py::arg("sim"));
  m.def("sweep", &sweep, py::arg("grid"), py::arg("cfg"), py::arg("sim"), py::arg("jobs") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("synthetic_surface", &synthetic_surface, py::arg("grid"), py::arg("samples_per_point"),
        py::arg("noise_sd_rel"), py::arg("seed"), py::arg("cfg") = SimBlockConfig{});
  py::class_<Diagnostics>(m, "Diagnostics")
      .def_readonly("sample_size", &Diagnostics::sample_size)
      .def_readonly("sd_over_mean", &Diagnostics::sd_over_mean);
  m.def("diagnostics", &diagnostics);

  // bucketing
  py::class_<BucketEstimate>(m, "BucketEstimate")
      .def(py::init<>())
      .def(py::init([](double mean, double variance, long long n_total) {
             BucketEstimate est;
             est.mean = mean;
             est.variance = variance;
             est.n_total = n_total;
             return est;
           }),
           py::arg("mean"), py::arg("variance"), py::arg("n_total"))
      .def_readwrite("mean", &BucketEstimate::mean)
      .def_readwrite("variance", &BucketEstimate::variance)
      .def_readwrite("n_total", &BucketEstimate::n_total)
      .def_readonly("priors", &BucketEstimate::priors);
  m.def("estimate_priors", [](const std::vector<long long>& counts) {
    return estimate_priors(counts);
  });
  m.def("bucket_estimate",
        [](const std::vector<PointEstimate>& points, const std::vector<double>& priors) {
          return bucket_estimate(points, priors);
        });
  m.def("bucket_confidence", &bucket_confidence, py::arg("est"), py::arg("T"));
  m.def("hit_from_confidence", &hit_from_confidence, py::arg("confidence"),
        py::arg("scale") = 1000);

  py::class_<HitGrid>(m, "HitGrid")
      .def(py::init<>())
      .def(py::init([](const std::vector<std::vector<int>>& columns, int scale) {
             HitGrid g;
             g.mx = static_cast<int>(columns.size());
             g.my = columns.empty() ? 0 : static_cast<int>(columns[0].size());
             g.support_per_bucket = scale;
             for (const auto& col : columns) {
               if (static_cast<int>(col.size()) != g.my) {
                 throw std::invalid_argument("HitGrid: ragged columns");
               }
               for (int h : col) {
                 g.hits.push_back(h);
                 g.missing.push_back(0);
               }
             }
             return g;
           }),
           py::arg("columns"), py::arg("scale") = 1000)
      .def_readwrite("mx", &HitGrid::mx)
      .def_readwrite("my", &HitGrid::my)
      .def_readwrite("support_per_bucket", &HitGrid::support_per_bucket)
      .def_readwrite("hits", &HitGrid::hits)
      .def_readwrite("missing", &HitGrid::missing)
      .def("hit_at", &HitGrid::hit_at)
      .def("missing_at", &HitGrid::missing_at);
  py::class_<ConfidenceMap>(m, "ConfidenceMap")
      .def_readonly("grid", &ConfidenceMap::grid)
      .def_readonly("prob", &ConfidenceMap::prob);
  m.def(
      "confidence_map",
      [](const PerformanceDatabase& db, double T, int scale) {
        return confidence_map(db, T, scale);
      },
      py::arg("db"), py::arg("T"), py::arg("scale") = 1000);

  // miner
  py::class_<Region>(m, "Region")
      .def(py::init<>())
      .def_readwrite("col_lo", &Region::col_lo)
      .def_readwrite("intervals", &Region::intervals)
      .def_readonly("hit", &Region::hit)
      .def_readonly("support", &Region::support)
      .def("empty", &Region::empty)
      .def("eta", &Region::eta)
      .def("confidence", &Region::confidence)
      .def("gain", &Region::gain, py::arg("tau"))
      .def("cells", &Region::cells)
      .def_static("from_cells", [](const std::vector<std::pair<int, int>>& cells) -> py::object {
        auto r = Region::from_cells(cells);
        if (!r) return py::none();
        return py::cast(*r);
      });
  py::enum_<MissingPolicy>(m, "MissingPolicy")
      .value("Exclude", MissingPolicy::Exclude)
      .value("ZeroHit", MissingPolicy::ZeroHit);
  py::class_<MineResult>(m, "MineResult")
      .def_readonly("region", &MineResult::region)
      .def_readonly("tau_final", &MineResult::tau_final);

  m.def("is_admissible", &is_admissible);
  m.def("region_gain", &region_gain, py::arg("grid"), py::arg("region"), py::arg("tau"),
        py::arg("policy") = MissingPolicy::Exclude);
  m.def("optimize_gain", &optimize_gain, py::arg("grid"), py::arg("tau"),
        py::arg("policy") = MissingPolicy::Exclude);
  m.def("brute_force_optimize", &brute_force_optimize, py::arg("grid"), py::arg("tau"),
        py::arg("policy") = MissingPolicy::Exclude);
  m.def(
      "optimize_support",
      [](const HitGrid& grid, double theta, MissingPolicy policy) -> py::object {
        auto res = optimize_support(grid, theta, policy);
        if (!res) return py::none();
        return py::cast(*res);
      },
      py::arg("grid"), py::arg("theta"), py::arg("policy") = MissingPolicy::Exclude);
  m.def(
      "optimize_confidence",
      [](const HitGrid& grid, long long min_support, MissingPolicy policy) -> py::object {
        auto res = optimize_confidence(grid, min_support, policy);
        if (!res) return py::none();
        return py::cast(*res);
      },
      py::arg("grid"), py::arg("min_support"), py::arg("policy") = MissingPolicy::Exclude);
  m.def("model_based_region_confidence",
        [](const std::vector<BucketEstimate>& buckets, const std::vector<double>& weights,
           double T) { return model_based_region_confidence(buckets, weights, T); });

  // analysis
  py::class_<FittedSurface>(m, "FittedSurface")
      .def(py::init([](const std::vector<std::tuple<double, double, double>>& pts, double span) {
             std::vector<FittedSurface::Sample> samples;
             for (const auto& [x, y, z] : pts) samples.push_back({x, y, z});
             return FittedSurface(std::move(samples), span);
           }),
           py::arg("points"), py::arg("span") = 0.05)
      .def("at",
           [](const FittedSurface& s, double x, double y) {
             const auto e = s.at(x, y);
             return std::make_pair(e.value, e.fallback);
           })
      .def("in_domain", &FittedSurface::in_domain)
      .def("span", &FittedSurface::span)
      .def("size", &FittedSurface::size);
  m.def("log_ber_samples", [](const PerformanceDatabase& db) {
    std::vector<std::tuple<double, double, double>> out;
    for (const auto& s : log_ber_samples(db)) out.emplace_back(s.x, s.y, s.z);
    return out;
  });
  m.def("invert_alpha_snr", &invert_alpha_snr, py::arg("alpha"), py::arg("effective_snr"));
  m.def("ecdf", [](const std::vector<double>& samples) { return ecdf(samples); });
  m.def("region_jaccard", &region_jaccard);

  py::class_<CrossValReport::Overlap>(m, "CrossValOverlap")
      .def_readonly("fold_a", &CrossValReport::Overlap::fold_a)
      .def_readonly("fold_b", &CrossValReport::Overlap::fold_b)
      .def_readonly("jaccard", &CrossValReport::Overlap::jaccard);
  py::class_<CrossValReport>(m, "CrossValReport")
      .def_readonly("folds", &CrossValReport::folds)
      .def_readonly("T", &CrossValReport::T)
      .def_readonly("theta", &CrossValReport::theta)
      .def("fold_region",
           [](const CrossValReport& r, int j) -> py::object {
             if (j < 0 || j >= static_cast<int>(r.fold_results.size()) || !r.fold_results[j]) {
               return py::none();
             }
             return py::cast(r.fold_results[j]->region);
           })
      .def_readonly("overlaps", &CrossValReport::overlaps)
      .def_readonly("excluded", &CrossValReport::excluded);
  m.def("cross_validate", &cross_validate, py::arg("db"), py::arg("folds"), py::arg("T"),
        py::arg("theta"), py::arg("policy") = MissingPolicy::Exclude, py::arg("scale") = 1000);

  // io
  m.def("store_database", &store_database, py::arg("db"), py::arg("path"));
  m.def("load_database", &load_database, py::arg("path"));
  m.def("format_double", &format_double);
}
