#include "rwl1cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>

#include "rwl1/bench.hpp"
#include "rwl1/binary_io.hpp"
#include "rwl1/error.hpp"
#include "rwl1/parallel.hpp"
#include "rwl1/rng.hpp"
#include "rwl1/reweight.hpp"
#include "rwl1/sensing.hpp"
#include "rwl1/signalgen.hpp"
#include "rwl1/theory.hpp"
#include "rwl1cli/checks.hpp"
#include "rwl1cli/config_json.hpp"

namespace fs = std::filesystem;

namespace rwl1::cli {

namespace {

/// Registers flags whose values, when given, are written into a JSON config
/// at a fixed pointer. Applied after the config file so flags win.
class Binder {
 public:
  explicit Binder(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* bind(const std::string& flag, const std::string& pointer, const std::string& desc) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app_->add_option(flag, *value, desc);
    setters_.push_back([opt, value, ptr = json::json_pointer(pointer)](json& j) {
      if (opt->count() > 0) j[ptr] = *value;
    });
    return opt;
  }

  CLI::Option* bind_methods(const std::string& flag, const std::string& pointer,
                            const std::string& desc) {
    return bind<std::vector<std::string>>(flag, pointer, desc)->delimiter(',');
  }

  void apply(json& j) const {
    for (const auto& s : setters_) s(j);
  }

 private:
  CLI::App* app_;
  std::vector<std::function<void(json&)>> setters_;
};

void bind_outer(Binder& b, const std::string& root) {
  b.bind<double>("--tol", root + "/tol", "Outer-loop relative change threshold");
  b.bind<int>("--max-outer", root + "/max_outer", "Maximum outer (reweighting) iterations");
  b.bind<double>("--irl1-a-scale", root + "/irl1_a_scale",
                 "IRL1 stability parameter as a fraction of max |x|");
  b.bind<double>("--irl1-a-floor", root + "/irl1_a_floor", "Lower bound on the IRL1 parameter");
  b.bind<double>("--p-hat", root + "/p_hat", "SDRL1 energy fraction used to size the support");
  b.bind<double>("--omega1", root + "/omega1", "SDRL1 weight on the support estimate");
  b.bind<double>("--omega2", root + "/omega2", "SDRL1 weight on the stable part of the support");
  b.bind<std::size_t>("--k-hat", root + "/k_hat_override",
                      "Override the SDRL1 support-size cap");
  b.bind<int>("--max-iters", root + "/solver/max_iters", "Inner solver iteration cap");
  b.bind<double>("--abs-tol", root + "/solver/abs_tol", "Inner solver absolute tolerance");
  b.bind<double>("--rel-tol", root + "/solver/rel_tol", "Inner solver relative tolerance");
  b.bind<double>("--penalty", root + "/solver/penalty", "Initial ADMM penalty");
}

json effective(json defaults, const std::string& config_path, const Binder& b) {
  if (!config_path.empty()) overlay(defaults, read_json_file(config_path));
  b.apply(defaults);
  return defaults;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct OutputFiles {
  std::ofstream csv;
  std::ofstream summary;
  fs::path csv_path;
  fs::path summary_path;
};

OutputFiles open_outputs(const std::string& dir, const std::string& stem) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec && fs::is_directory(dir), ErrorCode::kIo,
          "cannot create output directory " + dir + (ec ? ": " + ec.message() : ""));
  OutputFiles f;
  f.csv_path = fs::path(dir) / (stem + ".csv");
  f.summary_path = fs::path(dir) / (stem + ".json");
  f.csv.open(f.csv_path, std::ios::binary | std::ios::trunc);
  require(f.csv.good(), ErrorCode::kIo, "cannot write " + f.csv_path.string());
  f.summary.open(f.summary_path, std::ios::binary | std::ios::trunc);
  require(f.summary.good(), ErrorCode::kIo, "cannot write " + f.summary_path.string());
  return f;
}

json aggregates_json(const std::vector<bench::GridAggregate>& aggs) {
  json a = json::array();
  for (const auto& g : aggs) {
    json e = {{"method", std::string(to_string(g.method))},
              {"N", g.N},
              {"n", g.n},
              {"trials", g.trials},
              {"successes", g.successes},
              {"failed_runs", g.errors},
              {"recovery_percent", g.recovery_percent},
              {"mean_rel_err", g.mean_rel_err},
              {"mean_mse", g.mean_mse}};
    if (g.k) e["k"] = *g.k;
    if (g.p) e["p"] = *g.p;
    a.push_back(std::move(e));
  }
  return a;
}

std::size_t report_failures(const std::vector<bench::TrialRecord>& records, std::ostream& err) {
  std::size_t failed = 0;
  for (const auto& r : records) {
    if (r.error.empty()) continue;
    if (failed++ < 5)
      err << "warning: " << to_string(r.method) << " trial " << r.trial << " (seed " << r.seed
          << ") failed: " << r.error << '\n';
  }
  if (failed > 5) err << "warning: " << failed << " failed runs in total\n";
  return failed;
}

void finish_outputs(OutputFiles& f, const json& summary) {
  f.csv.close();
  require(!f.csv.fail(), ErrorCode::kIo, "error writing " + f.csv_path.string());
  f.summary << summary.dump(2) << '\n';
  f.summary.close();
  require(!f.summary.fail(), ErrorCode::kIo, "error writing " + f.summary_path.string());
}

struct ExperimentFlags {
  std::string out_dir = ".";
  std::string config;
  bool timing = false;
};

void add_experiment_flags(CLI::App* app, ExperimentFlags& f) {
  app->add_option("--out", f.out_dir, "Output directory (created if missing)")
      ->capture_default_str();
  app->add_option("--config", f.config,
                  "JSON config file; keys mirror the summary's \"config\" object. Flags override it");
  app->add_flag("--timing", f.timing, "Fill the wall_ms CSV column (output no longer reproducible)");
}

int cmd_sparse_grid(const ExperimentFlags& f, const Binder& b, std::ostream& out,
                    std::ostream& err) {
  bench::SparseGridConfig defaults;
  defaults.workers = default_workers();
  const auto cfg = sparse_grid_from_json(effective(to_json(defaults), f.config, b));
  auto files = open_outputs(f.out_dir, "sparse_grid");

  const auto records = bench::run_sparse_grid(cfg);
  bench::write_csv(files.csv, records, {f.timing});
  const auto aggs = bench::aggregate(records);
  for (const auto& g : aggs) {
    out << "sparse-grid N=" << g.N << " n=" << g.n << " k=" << *g.k << " " << to_string(g.method)
        << ": " << fmt("%.1f", g.recovery_percent) << "% exact (" << g.successes << "/"
        << g.trials << ")\n";
  }
  const std::size_t failed = report_failures(records, err);
  finish_outputs(files, {{"schema_version", bench::kSchemaVersion},
                         {"experiment", "sparse-grid"},
                         {"csv", files.csv_path.filename().string()},
                         {"csv_header", bench::kCsvHeader},
                         {"recovery_tol", cfg.recovery_tol},
                         {"records", records.size()},
                         {"failed_runs", failed},
                         {"config", to_json(cfg)},
                         {"aggregates", aggregates_json(aggs)}});
  return kExitOk;
}

int cmd_compressible(const ExperimentFlags& f, const Binder& b, std::ostream& out,
                     std::ostream& err) {
  bench::CompressibleConfig defaults;
  defaults.workers = default_workers();
  const auto cfg = compressible_from_json(effective(to_json(defaults), f.config, b));
  auto files = open_outputs(f.out_dir, "compressible");

  const auto records = bench::run_compressible(cfg);
  bench::write_csv(files.csv, records, {f.timing});
  const auto aggs = bench::aggregate(records);
  for (const auto& g : aggs) {
    out << "compressible N=" << g.N << " n=" << g.n << " p=" << *g.p << " "
        << to_string(g.method) << ": mean MSE " << fmt("%.6g", g.mean_mse) << "\n";
  }

  json ratios = json::array();
  const bool has_pair = std::find(cfg.methods.begin(), cfg.methods.end(), Method::kSdrl1) !=
                            cfg.methods.end() &&
                        std::find(cfg.methods.begin(), cfg.methods.end(), Method::kIrl1) !=
                            cfg.methods.end();
  if (has_pair) {
    for (const auto& r : bench::mse_ratios(records)) {
      ratios.push_back({{"p", r.p},
                        {"numerator", "sdrl1"},
                        {"denominator", "irl1"},
                        {"median", r.median ? json(*r.median) : json(nullptr)},
                        {"undefined", r.undefined},
                        {"ratios", r.ratios}});
      out << "compressible p=" << r.p << ": median MSE(sdrl1)/MSE(irl1) "
          << (r.median ? fmt("%.4g", *r.median) : std::string("undefined")) << " over "
          << r.ratios.size() << " trials";
      if (r.undefined > 0) out << " (" << r.undefined << " undefined)";
      out << "\n";
    }
  }
  const std::size_t failed = report_failures(records, err);
  finish_outputs(files, {{"schema_version", bench::kSchemaVersion},
                         {"experiment", "compressible"},
                         {"csv", files.csv_path.filename().string()},
                         {"csv_header", bench::kCsvHeader},
                         {"records", records.size()},
                         {"failed_runs", failed},
                         {"config", to_json(cfg)},
                         {"aggregates", aggregates_json(aggs)},
                         {"mse_ratios", ratios}});
  return kExitOk;
}

struct RecoverFlags {
  std::string method;
  std::string matrix;
  std::string y;
  double eps = 0.0;
  std::string out;
  std::string sidecar;
  std::string config;
};

int cmd_recover(const RecoverFlags& f, const Binder& b, std::ostream& out, std::ostream& err) {
  const Method method = parse_method(f.method);
  const auto cfg = outer_from_json(effective(to_json(OuterConfig{}), f.config, b));
  const SensingMatrix A(io::read_matrix(f.matrix));
  const Vector y = io::read_vector(f.y);
  require(y.size() == A.rows(), ErrorCode::kInvalidArgument,
          "dimension mismatch: " + f.matrix + " is " + std::to_string(A.rows()) + "x" +
              std::to_string(A.cols()) + " but " + f.y + " has " + std::to_string(y.size()) +
              " entries (expected " + std::to_string(A.rows()) + ")");
  require(f.eps >= 0.0, ErrorCode::kInvalidArgument, "--eps must be nonnegative");

  const MeasurementSet m{y, f.eps};
  const RecoveryResult r = run(method, A, m, cfg);
  io::write_vector(f.out, r.solution);

  json trace = json::array();
  for (const auto& it : r.trace) {
    json e = {{"t", it.t},
              {"solution_norm", it.solution_norm},
              {"relative_change", std::isfinite(it.relative_change) ? json(it.relative_change)
                                                                    : json(nullptr)},
              {"objective", it.objective},
              {"feasibility_gap", it.feasibility_gap},
              {"solver_iterations", it.solver_iterations},
              {"solver_converged", it.solver_converged}};
    if (method == Method::kSdrl1) {
      e["weight_support_size"] = it.weight_support.size();
      e["omega_size"] = it.omega.size();
      e["s"] = it.s;
    }
    trace.push_back(std::move(e));
  }
  json side = {{"schema_version", bench::kSchemaVersion},
               {"method", std::string(to_string(method))},
               {"n", A.rows()},
               {"N", A.cols()},
               {"eps", f.eps},
               {"converged", r.all_converged},
               {"outer_iterations", r.outer_iterations},
               {"l1_norm", r.solution.lpNorm<1>()},
               {"residual_norm", (A.entries() * r.solution - y).norm()},
               {"config", to_json(cfg)},
               {"trace", trace}};
  if (method == Method::kSdrl1) side["k_hat"] = r.k_hat;
  const std::string sidecar = f.sidecar.empty() ? f.out + ".json" : f.sidecar;
  std::ofstream s(sidecar, std::ios::binary | std::ios::trunc);
  s << side.dump(2) << '\n';
  s.close();
  require(!s.fail(), ErrorCode::kIo, "cannot write " + sidecar);

  out << to_string(method) << ": " << r.outer_iterations << " outer iterations, residual "
      << fmt("%.3g", side["residual_norm"].get<double>()) << ", wrote " << f.out << "\n";
  if (!r.all_converged) {
    err << "warning: at least one inner solve hit its iteration cap\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

struct InstanceFlags {
  std::size_t n = 0;
  std::size_t N = 0;
  std::string kind = "sparse";
  std::size_t k = 0;
  double p = 1.5;
  double c = 1.0;
  double noise = 0.0;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

int cmd_instance(const InstanceFlags& f, std::ostream& out) {
  require(f.n >= 1 && f.N >= 1, ErrorCode::kInvalidArgument, "--n and --N must be positive");
  SignalSpec spec;
  spec.N = f.N;
  spec.k = f.k;
  spec.p = f.p;
  spec.c = f.c;
  spec.seed = derive_seed(f.seed, 2);
  if (f.kind == "sparse") {
    spec.kind = SignalKind::kSparse;
  } else if (f.kind == "compressible") {
    spec.kind = SignalKind::kCompressible;
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown --kind '" + f.kind + "' (sparse|compressible)");
  }
  const auto A = gen_gaussian(static_cast<Eigen::Index>(f.n), static_cast<Eigen::Index>(f.N),
                              derive_seed(f.seed, 1));
  const Vector x = generate(spec);
  const auto m = measure(A, x, f.noise, derive_seed(f.seed, 3));

  std::error_code ec;
  fs::create_directories(f.out_dir, ec);
  require(!ec && fs::is_directory(f.out_dir), ErrorCode::kIo,
          "cannot create output directory " + f.out_dir);
  const fs::path dir(f.out_dir);
  io::write_matrix(dir / "A.bin", A.entries());
  io::write_vector(dir / "x.bin", x);
  io::write_vector(dir / "y.bin", m.y);
  out << "wrote " << (dir / "A.bin").string() << " (" << f.n << "x" << f.N << "), x.bin, y.bin\n";
  return kExitOk;
}

struct VerifyFlags {
  bool rip = false;
  bool prop2 = false;
  std::string matrix;
  std::size_t k = 0;
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
};

int cmd_verify(const VerifyFlags& f, std::ostream& out) {
  if (f.rip) {
    require(!f.matrix.empty() && f.k >= 1, ErrorCode::kInvalidArgument,
            "--rip needs --matrix FILE and --k K");
    const SensingMatrix A(io::read_matrix(f.matrix));
    for (std::size_t j = 1; j <= f.k; ++j) {
      const auto est = theory::brute_force_rip(A, j);
      out << "delta_" << j << " = " << fmt("%.10g", est.delta)
          << (est.valid() ? "" : "  (>= 1: no RIP of this order)") << "\n";
    }
    if (!f.prop2) return kExitOk;
  }
  std::vector<CheckResult> checks;
  if (!f.rip && !f.prop2) checks = theory_checks(f.seed);
  auto p2 = prop2_checks(f.trials, f.seed);
  checks.insert(checks.end(), p2.begin(), p2.end());
  return print_table(out, checks) ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse recovery by reweighted l1 minimization", "rwl1"};
  app.require_subcommand(1);

  ExperimentFlags sg_flags;
  auto* sg = app.add_subcommand(
      "sparse-grid", "Exact-recovery percentage over a (n/N, k/n) grid of sparse signals");
  Binder sg_b(sg);
  sg_b.bind<std::size_t>("--N", "/N", "Signal length (default 2000)");
  sg_b.bind<std::vector<double>>("--n-fractions", "/n_fractions",
                                 "Comma-separated measurement fractions n/N")
      ->delimiter(',');
  sg_b.bind<std::vector<double>>("--k-over-n", "/k_over_n", "Comma-separated sparsity ratios k/n")
      ->delimiter(',');
  sg_b.bind<std::size_t>("--trials", "/trials", "Trials per grid point");
  sg_b.bind<std::uint64_t>("--seed", "/seed", "Master seed");
  sg_b.bind<double>("--recovery-tol", "/recovery_tol",
                    "Relative l2 error counted as exact recovery");
  sg_b.bind_methods("--methods", "/methods", "Comma-separated subset of l1,irl1,sdrl1");
  sg_b.bind<unsigned>("--workers", "/workers",
                      "Worker threads (default RWL1_WORKERS or hardware concurrency)");
  bind_outer(sg_b, "/outer");
  add_experiment_flags(sg, sg_flags);

  ExperimentFlags cp_flags;
  auto* cp = app.add_subcommand(
      "compressible", "MSE of SDRL1 vs IRL1 on power-law compressible signals");
  Binder cp_b(cp);
  cp_b.bind<std::size_t>("--N", "/N", "Signal length (default 2000)");
  cp_b.bind<double>("--n-over-N", "/n_over_N", "Measurement fraction n/N");
  cp_b.bind<std::vector<double>>("--p", "/p", "Comma-separated decay exponents")->delimiter(',');
  cp_b.bind<double>("--c", "/c", "Magnitude scale c in c i^-p");
  cp_b.bind<std::size_t>("--trials", "/trials", "Trials per exponent");
  cp_b.bind<std::uint64_t>("--seed", "/seed", "Master seed");
  cp_b.bind_methods("--methods", "/methods", "Comma-separated subset of l1,irl1,sdrl1");
  cp_b.bind<unsigned>("--workers", "/workers",
                      "Worker threads (default RWL1_WORKERS or hardware concurrency)");
  bind_outer(cp_b, "/outer");
  add_experiment_flags(cp, cp_flags);

  RecoverFlags rc_flags;
  auto* rc = app.add_subcommand("recover", "Recover a signal from a matrix and measurements");
  rc->add_option("--method", rc_flags.method, "l1, irl1 or sdrl1")->required();
  rc->add_option("--matrix", rc_flags.matrix, "Sensing matrix file (binary format)")->required();
  rc->add_option("--y", rc_flags.y, "Measurement vector file (binary format)")->required();
  rc->add_option("--eps", rc_flags.eps, "Noise bound on ||Au - y||")->capture_default_str();
  rc->add_option("--out", rc_flags.out, "Output file for the recovered signal")->required();
  rc->add_option("--sidecar", rc_flags.sidecar, "Diagnostics JSON path (default OUT.json)");
  rc->add_option("--config", rc_flags.config, "JSON file with outer/solver settings");
  Binder rc_b(rc);
  bind_outer(rc_b, "");

  InstanceFlags in_flags;
  auto* in = app.add_subcommand(
      "instance", "Write a seeded Gaussian matrix, signal and measurements (A.bin, x.bin, y.bin)");
  in->add_option("--n", in_flags.n, "Measurements")->required();
  in->add_option("--N", in_flags.N, "Signal length")->required();
  in->add_option("--kind", in_flags.kind, "sparse or compressible")->capture_default_str();
  in->add_option("--k", in_flags.k, "Nonzeros (sparse)");
  in->add_option("--p", in_flags.p, "Decay exponent (compressible)")->capture_default_str();
  in->add_option("--c", in_flags.c, "Magnitude scale (compressible)")->capture_default_str();
  in->add_option("--noise", in_flags.noise, "Noise norm ||e||")->capture_default_str();
  in->add_option("--seed", in_flags.seed, "Seed")->capture_default_str();
  in->add_option("--out", in_flags.out_dir, "Output directory")->capture_default_str();

  VerifyFlags vf;
  auto* vr = app.add_subcommand("verify", "Check the theory module against known values");
  vr->add_flag("--rip", vf.rip, "Print brute-force delta_1..delta_k of --matrix");
  vr->add_option("--matrix", vf.matrix, "Matrix file for --rip");
  vr->add_option("--k", vf.k, "Largest order for --rip");
  vr->add_flag("--prop2", vf.prop2, "Run only the intersection-accuracy checks");
  vr->add_option("--trials", vf.trials, "Simulation trials")->capture_default_str();
  vr->add_option("--seed", vf.seed, "Seed")->capture_default_str();

  std::uint64_t st_seed = 1;
  auto* st = app.add_subcommand("selftest", "Solver and harness sanity checks");
  st->add_option("--seed", st_seed, "Seed")->capture_default_str();

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("rwl1");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sg->parsed()) return cmd_sparse_grid(sg_flags, sg_b, out, err);
    if (cp->parsed()) return cmd_compressible(cp_flags, cp_b, out, err);
    if (rc->parsed()) return cmd_recover(rc_flags, rc_b, out, err);
    if (in->parsed()) return cmd_instance(in_flags, out);
    if (vr->parsed()) return cmd_verify(vf, out);
    if (st->parsed()) {
      auto checks = solver_checks(st_seed);
      return print_table(out, checks) ? kExitOk : kExitCheckFailed;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace rwl1::cli
