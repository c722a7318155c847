#include "bermine/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bermine/analysis.hpp"
#include "bermine/bucketing.hpp"
#include "bermine/io.hpp"
#include "bermine/miner.hpp"
#include "bermine/sampler.hpp"

#include <json.hpp>

namespace bermine::cli {

namespace {

int default_jobs() {
  if (const char* env = std::getenv("BERMINE_JOBS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

MissingPolicy parse_missing(const std::string& text) {
  if (text == "exclude") return MissingPolicy::Exclude;
  if (text == "zero") return MissingPolicy::ZeroHit;
  throw CLI::ValidationError("--missing must be 'exclude' or 'zero'");
}

struct SimulateOpts {
  std::string grid;
  int frames = 10000;
  int bits_per_frame = 80;
  double beta = 0.1;
  double gamma = 0.9;
  double t = 1e-4;
  int max_samples = 50;
  int min_samples = 2;
  std::uint64_t seed = 0;
  std::string noise_model = "mc";
  int jobs = default_jobs();
  std::string out;
};

int run_simulate(const SimulateOpts& o) {
  const GridSpec grid = parse_grid_spec(o.grid);
  StoppingConfig cfg;
  cfg.beta = o.beta;
  cfg.gamma = o.gamma;
  cfg.t_threshold = o.t;
  cfg.max_samples = o.max_samples;
  cfg.min_samples = o.min_samples;

  SimBlockConfig block;
  block.frames = o.frames;
  block.bits_per_frame = o.bits_per_frame;
  block.seed = o.seed;

  BlockSimulator sim;
  if (o.noise_model == "mc") {
    sim = make_mc_simulator(block);
  } else if (o.noise_model.rfind("synthetic:", 0) == 0) {
    const double sd = std::stod(o.noise_model.substr(10));
    sim = make_synthetic_simulator(sd, block);
  } else {
    throw std::invalid_argument("--noise-model must be 'mc' or 'synthetic:SD'");
  }

  const PerformanceDatabase db = sweep(grid, cfg, sim, o.jobs);
  store_database(db, o.out);

  long long simulated = 0, mirrored = 0, samples = 0;
  for (const auto& cell : db.cells) {
    if (!cell) continue;
    (cell->mirrored ? mirrored : simulated) += 1;
    samples += static_cast<long long>(cell->samples.size());
  }
  std::cout << "simulated " << simulated << " points (" << mirrored << " mirrored, "
            << samples << " samples) -> " << o.out << "\n";
  return kExitOk;
}

struct MapOpts {
  std::string db;
  double T = 1e-3;
  int scale = 1000;
  std::string out_prefix;
};

int run_map(const MapOpts& o) {
  const PerformanceDatabase db = load_database(o.db);
  const ConfidenceMap map = confidence_map(db, o.T, o.scale);
  const Diagnostics diag = diagnostics(db);

  std::vector<double> hits(map.grid.hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    hits[i] = map.grid.missing[i] ? std::nan("") : static_cast<double>(map.grid.hits[i]);
  }
  write_matrix_csv(o.out_prefix + "confidence.csv", db.xs, db.ys, map.prob);
  write_matrix_csv(o.out_prefix + "hit.csv", db.xs, db.ys, hits);
  write_matrix_csv(o.out_prefix + "n.csv", db.xs, db.ys, diag.sample_size);
  write_matrix_csv(o.out_prefix + "sd_over_mean.csv", db.xs, db.ys, diag.sd_over_mean);
  std::cout << "wrote " << o.out_prefix << "{confidence,hit,n,sd_over_mean}.csv\n";
  return kExitOk;
}

struct MineOpts {
  std::string db;
  double T = 1e-3;
  std::string objective = "support";
  double tau = 0.5;
  double theta = 0.99;
  long long min_support = 0;
  std::string missing = "exclude";
  int scale = 1000;
  std::string out;
};

int run_mine(const MineOpts& o, const CLI::App& cmd) {
  const PerformanceDatabase db = load_database(o.db);
  const ConfidenceMap map = confidence_map(db, o.T, o.scale);
  const MissingPolicy policy = parse_missing(o.missing);

  std::optional<MineResult> result;
  std::optional<double> theta;
  std::optional<long long> min_support;
  if (o.objective == "gain") {
    result = MineResult{optimize_gain(map.grid, o.tau, policy), o.tau};
  } else if (o.objective == "support") {
    theta = o.theta;
    result = optimize_support(map.grid, o.theta, policy);
  } else if (o.objective == "confidence") {
    if (!cmd.count("--min-support")) {
      throw std::invalid_argument("--objective confidence requires --min-support");
    }
    min_support = o.min_support;
    result = optimize_confidence(map.grid, o.min_support, policy);
  } else {
    throw std::invalid_argument("--objective must be gain, support, or confidence");
  }

  const bool qualified = result.has_value();
  const Region region = qualified ? result->region : Region{};
  const double tau_final = qualified ? result->tau_final : 1.0;
  const RegionFileData data =
      make_region_file(region, db, o.objective, tau_final, theta, min_support, o.T, policy);
  store_region_file(data, o.out);

  std::cout << "objective=" << o.objective << " support=" << region.support
            << " confidence=" << region.confidence() << " tau=" << tau_final << " eta="
            << region.eta() << " -> " << o.out << "\n";
  if (!qualified) {
    std::cout << "no qualifying region\n";
    return kExitNoRegion;
  }
  return kExitOk;
}

struct SliceOpts {
  std::string db;
  double span = 0.05;
  double alpha = 1.0;
  double snr = 0.0;
  std::string snr_range;
  std::string alpha_range;
  std::string out;
};

int run_slice(const SliceOpts& o, const CLI::App& cmd) {
  const PerformanceDatabase db = load_database(o.db);
  const FittedSurface surface = loess_fit(log_ber_samples(db), o.span);

  const bool fixed_alpha = cmd.count("--alpha") > 0;
  const bool fixed_snr = cmd.count("--snr") > 0;
  if (fixed_alpha == fixed_snr) {
    throw std::invalid_argument("pass exactly one of --alpha (with --snr-range) "
                                "or --snr (with --alpha-range)");
  }
  if (fixed_alpha) {
    if (o.snr_range.empty()) throw std::invalid_argument("--alpha requires --snr-range");
    const auto values = parse_grid_spec(o.snr_range).values();
    write_slice_csv(o.out, "effective_snr_db", slice_fixed_alpha(surface, o.alpha, values));
  } else {
    if (o.alpha_range.empty()) throw std::invalid_argument("--snr requires --alpha-range");
    const auto values = parse_grid_spec(o.alpha_range).values();
    write_slice_csv(o.out, "imbalance_factor", slice_fixed_snr(surface, o.snr, values));
  }
  std::cout << "wrote " << o.out << "\n";
  return kExitOk;
}

struct CrossvalOpts {
  std::string db;
  int folds = 3;
  double T = 1e-3;
  double theta = 0.95;
  std::string missing = "exclude";
  int scale = 1000;
  std::string out;
};

int run_crossval(const CrossvalOpts& o) {
  const PerformanceDatabase db = load_database(o.db);
  const CrossValReport report =
      cross_validate(db, o.folds, o.T, o.theta, parse_missing(o.missing), o.scale);

  nlohmann::json j;
  j["folds"] = report.folds;
  j["T"] = report.T;
  j["theta"] = report.theta;
  nlohmann::json regions = nlohmann::json::array();
  for (const auto& res : report.fold_results) {
    if (!res) {
      regions.push_back(nullptr);
      continue;
    }
    const RegionFileData data = make_region_file(res->region, db, "support", res->tau_final,
                                                 report.theta, std::nullopt, report.T,
                                                 parse_missing(o.missing));
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : data.columns) {
      cols.push_back({{"x", c.x}, {"s", c.s}, {"t", c.t}});
    }
    regions.push_back({{"support", data.support},
                       {"hit", data.hit},
                       {"confidence", data.confidence},
                       {"tau_final", data.tau_final},
                       {"columns", cols}});
  }
  j["fold_regions"] = regions;
  nlohmann::json overlaps = nlohmann::json::array();
  for (const auto& ov : report.overlaps) {
    overlaps.push_back({{"fold_a", ov.fold_a}, {"fold_b", ov.fold_b}, {"jaccard", ov.jaccard}});
  }
  j["overlaps"] = overlaps;
  nlohmann::json excluded = nlohmann::json::array();
  for (const auto& e : report.excluded) {
    excluded.push_back({{"fold", e[0]}, {"s1_db", db.xs[e[1]]}, {"s2_db", db.ys[e[2]]}});
  }
  j["excluded_points"] = excluded;

  std::ofstream out(o.out);
  if (!out) throw IoError("io: cannot open '" + o.out + "' for writing");
  out << j.dump(2) << '\n';
  if (!out.good()) throw IoError("io: write failed for '" + o.out + "'");

  std::cout << "cross-validated " << report.folds << " folds -> " << o.out << "\n";
  return kExitOk;
}

struct EcdfOpts {
  std::string db;
  std::string point;
  std::string out;
};

int run_ecdf(const EcdfOpts& o) {
  const PerformanceDatabase db = load_database(o.db);
  const auto comma = o.point.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("--point must be 's1_db,s2_db'");
  }
  const double s1 = std::stod(o.point.substr(0, comma));
  const double s2 = std::stod(o.point.substr(comma + 1));

  const PointRecord* rec = nullptr;
  for (const auto& cell : db.cells) {
    if (cell && cell->point.s1_db == s1 && cell->point.s2_db == s2) {
      rec = &*cell;
      break;
    }
  }
  if (!rec) {
    throw std::invalid_argument("point (" + o.point + ") is not in the database");
  }
  std::vector<double> values;
  for (const auto& s : rec->samples) values.push_back(s.value);
  write_ecdf_csv(o.out, ecdf(values));
  std::cout << "wrote " << values.size() << " steps -> " << o.out << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Monte Carlo BER performance databases and confidence-region mining"};
  app.require_subcommand(1);

  SimulateOpts sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Sample a configuration grid");
  simulate->add_option("--grid", sim.grid, "Grid spec lo:hi:step in dB")->required();
  simulate->add_option("--frames", sim.frames, "Frames per block");
  simulate->add_option("--bits-per-frame", sim.bits_per_frame, "Bits per frame");
  simulate->add_option("--beta", sim.beta, "Relative accuracy threshold");
  simulate->add_option("--gamma", sim.gamma, "Confidence level for the stopping rules");
  simulate->add_option("--t", sim.t, "Sampling threshold");
  simulate->add_option("--max-samples", sim.max_samples, "Per-point sample cap");
  simulate->add_option("--min-samples", sim.min_samples, "Per-point sample floor (>= 2)");
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--noise-model", sim.noise_model, "mc or synthetic:SD");
  simulate->add_option("--jobs", sim.jobs, "Worker threads (default $BERMINE_JOBS or 1)");
  simulate->add_option("--out", sim.out, "Output database CSV")->required();

  MapOpts map;
  CLI::App* map_cmd = app.add_subcommand("map", "Export confidence/hit/diagnostic grids");
  map_cmd->add_option("--db", map.db, "Database CSV")->required();
  map_cmd->add_option("--T", map.T, "Performance threshold");
  map_cmd->add_option("--scale", map.scale, "Hit discretization constant");
  map_cmd->add_option("--out-prefix", map.out_prefix, "Prefix for output CSVs")->required();

  MineOpts mine;
  CLI::App* mine_cmd = app.add_subcommand("mine", "Mine an optimized admissible region");
  mine_cmd->add_option("--db", mine.db, "Database CSV")->required();
  mine_cmd->add_option("--T", mine.T, "Performance threshold");
  mine_cmd->add_option("--objective", mine.objective, "gain, support, or confidence");
  mine_cmd->add_option("--tau", mine.tau, "Slope for the gain objective");
  mine_cmd->add_option("--theta", mine.theta, "Confidence floor for the support objective");
  mine_cmd->add_option("--min-support", mine.min_support,
                       "Support floor for the confidence objective");
  mine_cmd->add_option("--missing", mine.missing, "exclude or zero");
  mine_cmd->add_option("--scale", mine.scale, "Hit discretization constant");
  mine_cmd->add_option("--out", mine.out, "Output region JSON")->required();

  SliceOpts slice;
  CLI::App* slice_cmd = app.add_subcommand("slice", "1D slices of the fitted surface");
  slice_cmd->add_option("--db", slice.db, "Database CSV")->required();
  slice_cmd->add_option("--span", slice.span, "Loess span fraction");
  slice_cmd->add_option("--alpha", slice.alpha, "Fixed imbalance factor");
  slice_cmd->add_option("--snr-range", slice.snr_range, "Effective SNR range lo:hi:step");
  slice_cmd->add_option("--snr", slice.snr, "Fixed effective SNR in dB");
  slice_cmd->add_option("--alpha-range", slice.alpha_range, "Imbalance range lo:hi:step");
  slice_cmd->add_option("--out", slice.out, "Output CSV")->required();

  CrossvalOpts crossval;
  CLI::App* crossval_cmd = app.add_subcommand("crossval", "Cross-validate mined regions");
  crossval_cmd->add_option("--db", crossval.db, "Database CSV")->required();
  crossval_cmd->add_option("--folds", crossval.folds, "Number of folds");
  crossval_cmd->add_option("--T", crossval.T, "Performance threshold");
  crossval_cmd->add_option("--theta", crossval.theta, "Confidence floor");
  crossval_cmd->add_option("--missing", crossval.missing, "exclude or zero");
  crossval_cmd->add_option("--scale", crossval.scale, "Hit discretization constant");
  crossval_cmd->add_option("--out", crossval.out, "Output report JSON")->required();

  EcdfOpts ecdf_opts;
  CLI::App* ecdf_cmd = app.add_subcommand("ecdf", "Empirical CDF of one point's samples");
  ecdf_cmd->add_option("--db", ecdf_opts.db, "Database CSV")->required();
  ecdf_cmd->add_option("--point", ecdf_opts.point, "Point as s1_db,s2_db")->required();
  ecdf_cmd->add_option("--out", ecdf_opts.out, "Output CSV")->required();

  // CLI11's vector overload consumes arguments from the back.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (map_cmd->parsed()) return run_map(map);
    if (mine_cmd->parsed()) return run_mine(mine, *mine_cmd);
    if (slice_cmd->parsed()) return run_slice(slice, *slice_cmd);
    if (crossval_cmd->parsed()) return run_crossval(crossval);
    if (ecdf_cmd->parsed()) return run_ecdf(ecdf_opts);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace bermine::cli
