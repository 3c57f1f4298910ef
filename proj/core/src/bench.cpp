#include "rwl1/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <thread>

#include "rwl1/error.hpp"
#include "rwl1/parallel.hpp"
#include "rwl1/rng.hpp"
#include "rwl1/sensing.hpp"
#include "rwl1/signalgen.hpp"

namespace rwl1 {

unsigned default_workers() {
  if (const char* env = std::getenv("RWL1_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace bench {

bool exact_recovery(const Vector& x_hat, const Vector& x, double tol) {
  require(x_hat.size() == x.size(), ErrorCode::kInvalidArgument, "length mismatch");
  const double base = x.norm();
  require(base > 0.0, ErrorCode::kUndefinedCriterion,
          "exact recovery is undefined for a zero signal");
  return (x_hat - x).norm() / base <= tol;
}

double mse(const Vector& x_hat, const Vector& x) {
  require(x_hat.size() == x.size() && x.size() > 0, ErrorCode::kInvalidArgument,
          "length mismatch");
  return (x_hat - x).squaredNorm() / static_cast<double>(x.size());
}

std::size_t measurements_for(std::size_t N, double fraction) {
  require(fraction > 0.0 && fraction <= 1.0, ErrorCode::kInvalidArgument,
          "fractions must lie in (0, 1]");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(N))));
}

namespace {

struct Instance {
  std::string experiment;
  std::size_t N = 0;
  std::size_t n = 0;
  std::optional<std::size_t> k;
  std::optional<double> p;
  std::size_t grid_index = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
};

void run_methods(const Instance& inst, const Vector& x, const std::vector<Method>& methods,
                 const OuterConfig& outer, double recovery_tol, TrialRecord* out) {
  const SensingMatrix A = gen_gaussian(static_cast<Eigen::Index>(inst.n),
                                       static_cast<Eigen::Index>(inst.N), derive_seed(inst.seed, 1));
  const MeasurementSet m = measure(A, x, 0.0, derive_seed(inst.seed, 3));
  for (std::size_t j = 0; j < methods.size(); ++j) {
    TrialRecord& r = out[j];
    r.experiment = inst.experiment;
    r.method = methods[j];
    r.N = inst.N;
    r.n = inst.n;
    r.k = inst.k;
    r.p = inst.p;
    r.grid_index = inst.grid_index;
    r.trial = inst.trial;
    r.seed = inst.seed;
    const auto start = std::chrono::steady_clock::now();
    try {
      const RecoveryResult res = run(methods[j], A, m, outer);
      r.rel_err = (res.solution - x).norm() / x.norm();
      r.exact = r.rel_err <= recovery_tol;
      r.mse = mse(res.solution, x);
      r.outer_iters = res.outer_iterations;
      r.converged = res.all_converged;
    } catch (const std::exception& e) {
      r.error = e.what();
      r.rel_err = std::numeric_limits<double>::quiet_NaN();
      r.mse = std::numeric_limits<double>::quiet_NaN();
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
  }
}

}  // namespace

std::vector<TrialRecord> run_sparse_grid(const SparseGridConfig& cfg) {
  require(cfg.trials >= 1 && !cfg.methods.empty() && cfg.N >= 2, ErrorCode::kInvalidArgument,
          "sparse grid needs N >= 2, trials >= 1 and at least one method");
  for (double f : cfg.k_over_n)
    require(f > 0.0 && f <= 1.0, ErrorCode::kInvalidArgument, "k/n fractions must lie in (0, 1]");

  std::vector<Instance> instances;
  for (std::size_t a = 0; a < cfg.n_fractions.size(); ++a) {
    const std::size_t n = measurements_for(cfg.N, cfg.n_fractions[a]);
    for (std::size_t b = 0; b < cfg.k_over_n.size(); ++b) {
      const std::size_t k = std::clamp<std::size_t>(
          static_cast<std::size_t>(std::llround(cfg.k_over_n[b] * static_cast<double>(n))), 1, cfg.N);
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        Instance inst;
        inst.experiment = "sparse-grid";
        inst.N = cfg.N;
        inst.n = n;
        inst.k = k;
        inst.grid_index = a * cfg.k_over_n.size() + b;
        inst.trial = t;
        inst.seed = derive_seed(cfg.master_seed, a, b, t);
        instances.push_back(std::move(inst));
      }
    }
  }

  const std::size_t per = cfg.methods.size();
  std::vector<TrialRecord> records(instances.size() * per);
  parallel_for(instances.size(), cfg.workers, [&](std::size_t i) {
    const Instance& inst = instances[i];
    SignalSpec spec;
    spec.kind = SignalKind::kSparse;
    spec.N = inst.N;
    spec.k = *inst.k;
    spec.seed = derive_seed(inst.seed, 2);
    run_methods(inst, gen_sparse(spec), cfg.methods, cfg.outer, cfg.recovery_tol,
                records.data() + i * per);
  });
  return records;
}

std::vector<TrialRecord> run_compressible(const CompressibleConfig& cfg) {
  require(cfg.trials >= 1 && !cfg.methods.empty() && cfg.N >= 2, ErrorCode::kInvalidArgument,
          "compressible run needs N >= 2, trials >= 1 and at least one method");
  for (double p : cfg.p_values)
    require(p > 1.0, ErrorCode::kInvalidArgument, "decay exponents must exceed 1");
  const std::size_t n = measurements_for(cfg.N, cfg.n_over_N);

  std::vector<Instance> instances;
  for (std::size_t a = 0; a < cfg.p_values.size(); ++a) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      Instance inst;
      inst.experiment = "compressible";
      inst.N = cfg.N;
      inst.n = n;
      inst.p = cfg.p_values[a];
      inst.grid_index = a;
      inst.trial = t;
      inst.seed = derive_seed(cfg.master_seed, 0x636F6D70ULL, a, t);
      instances.push_back(std::move(inst));
    }
  }

  const std::size_t per = cfg.methods.size();
  std::vector<TrialRecord> records(instances.size() * per);
  parallel_for(instances.size(), cfg.workers, [&](std::size_t i) {
    const Instance& inst = instances[i];
    SignalSpec spec;
    spec.kind = SignalKind::kCompressible;
    spec.N = inst.N;
    spec.p = *inst.p;
    spec.c = cfg.c;
    spec.seed = derive_seed(inst.seed, 2);
    run_methods(inst, gen_compressible(spec), cfg.methods, cfg.outer, 0.0,
                records.data() + i * per);
  });
  // Exact recovery is meaningless for compressible signals.
  for (auto& r : records) r.exact = false;
  return records;
}

std::vector<GridAggregate> aggregate(const std::vector<TrialRecord>& records) {
  std::vector<GridAggregate> out;
  std::map<std::tuple<std::string, std::size_t, Method>, std::size_t> slot;
  for (const auto& r : records) {
    const auto key = std::make_tuple(r.experiment, r.grid_index, r.method);
    auto [it, inserted] = slot.try_emplace(key, out.size());
    if (inserted) {
      GridAggregate g;
      g.experiment = r.experiment;
      g.method = r.method;
      g.N = r.N;
      g.n = r.n;
      g.k = r.k;
      g.p = r.p;
      out.push_back(g);
    }
    GridAggregate& g = out[it->second];
    ++g.trials;
    if (!r.error.empty()) {
      ++g.errors;
      continue;
    }
    if (r.exact) ++g.successes;
    g.mean_rel_err += r.rel_err;
    g.mean_mse += r.mse;
  }
  for (auto& g : out) {
    g.recovery_percent = 100.0 * static_cast<double>(g.successes) / static_cast<double>(g.trials);
    const std::size_t ok = g.trials - g.errors;
    if (ok > 0) {
      g.mean_rel_err /= static_cast<double>(ok);
      g.mean_mse /= static_cast<double>(ok);
    }
  }
  return out;
}

std::vector<RatioSummary> mse_ratios(const std::vector<TrialRecord>& records, Method numerator,
                                     Method denominator) {
  // (p index, trial) -> (numerator mse, denominator mse)
  std::map<std::pair<std::size_t, std::size_t>, std::pair<const TrialRecord*, const TrialRecord*>> pairs;
  std::map<std::size_t, double> p_of;
  for (const auto& r : records) {
    if (r.experiment != "compressible" || !r.p) continue;
    p_of[r.grid_index] = *r.p;
    auto& slot = pairs[{r.grid_index, r.trial}];
    if (r.method == numerator) slot.first = &r;
    if (r.method == denominator) slot.second = &r;
  }
  std::map<std::size_t, RatioSummary> by_p;
  for (const auto& [key, pr] : pairs) {
    RatioSummary& s = by_p[key.first];
    s.p = p_of[key.first];
    const auto* num = pr.first;
    const auto* den = pr.second;
    if (num == nullptr || den == nullptr || !num->error.empty() || !den->error.empty() ||
        !(den->mse > 0.0)) {
      ++s.undefined;
      continue;
    }
    s.ratios.push_back(num->mse / den->mse);
  }
  std::vector<RatioSummary> out;
  for (auto& [idx, s] : by_p) {
    if (!s.ratios.empty()) {
      std::vector<double> sorted = s.ratios;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t m = sorted.size();
      s.median = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records, const CsvOptions& opts) {
  out << kCsvHeader << "\r\n";
  for (const auto& r : records) {
    const bool failed = !r.error.empty();
    out << csv_field(r.experiment) << ',' << to_string(r.method) << ',' << r.N << ',' << r.n << ','
        << (r.k ? std::to_string(*r.k) : std::string()) << ','
        << (r.p ? format_double(*r.p) : std::string()) << ',' << r.trial << ',' << r.seed << ','
        << (r.exact ? 1 : 0) << ',' << (failed ? std::string() : format_double(r.rel_err)) << ','
        << (failed ? std::string() : format_double(r.mse)) << ',' << r.outer_iters << ','
        << (opts.include_timing ? format_double(r.wall_ms) : std::string()) << "\r\n";
  }
}

}  // namespace bench
}  // namespace rwl1
