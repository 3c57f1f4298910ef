#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rwl1/reweight.hpp"
#include "rwl1/sigcore.hpp"

namespace rwl1::bench {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCsvHeader =
    "experiment,method,N,n,k,p,trial,seed,exact,rel_err,mse,outer_iters,wall_ms";

struct SparseGridConfig {
  std::size_t N = 2000;
  std::vector<double> n_fractions{0.1, 0.25, 0.5};
  std::vector<double> k_over_n{0.1, 0.2, 0.3, 0.4, 0.5};
  std::size_t trials = 100;
  std::uint64_t master_seed = 1;
  double recovery_tol = 1e-3;
  std::vector<Method> methods{Method::kL1, Method::kIrl1, Method::kSdrl1};
  OuterConfig outer;
  unsigned workers = 1;
};

struct CompressibleConfig {
  std::size_t N = 2000;
  double n_over_N = 0.1;
  std::vector<double> p_values{1.1, 1.5, 2.0};
  double c = 1.0;
  std::size_t trials = 100;
  std::uint64_t master_seed = 1;
  std::vector<Method> methods{Method::kSdrl1, Method::kIrl1};
  OuterConfig outer;
  unsigned workers = 1;
};

struct TrialRecord {
  std::string experiment;  // "sparse-grid" or "compressible"
  Method method = Method::kL1;
  std::size_t N = 0;
  std::size_t n = 0;
  std::optional<std::size_t> k;
  std::optional<double> p;
  std::size_t grid_index = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool exact = false;
  double rel_err = 0.0;
  double mse = 0.0;
  int outer_iters = 0;
  double wall_ms = 0.0;
  bool converged = false;
  std::string error;  // non-empty when the driver threw
};

/// ||x_hat - x|| / ||x|| <= tol. Throws undefined-criterion when x == 0.
bool exact_recovery(const Vector& x_hat, const Vector& x, double tol);

/// ||x_hat - x||^2 / N
double mse(const Vector& x_hat, const Vector& x);

/// Rows: grid point (n fraction major, k/n minor), then trial, then method.
std::vector<TrialRecord> run_sparse_grid(const SparseGridConfig& cfg);

/// Rows: p value, then trial, then method.
std::vector<TrialRecord> run_compressible(const CompressibleConfig& cfg);

/// Measurement count used for a fraction of N (rounded, at least 1).
std::size_t measurements_for(std::size_t N, double fraction);

struct GridAggregate {
  std::string experiment;
  Method method = Method::kL1;
  std::size_t N = 0;
  std::size_t n = 0;
  std::optional<std::size_t> k;
  std::optional<double> p;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t errors = 0;
  double recovery_percent = 0.0;
  double mean_rel_err = 0.0;
  double mean_mse = 0.0;
};

/// One aggregate per (grid point, method), in record order.
std::vector<GridAggregate> aggregate(const std::vector<TrialRecord>& records);

struct RatioSummary {
  double p = 0.0;
  std::vector<double> ratios;  // per trial MSE(numerator) / MSE(denominator)
  std::size_t undefined = 0;   // denominator MSE was zero or a run failed
  std::optional<double> median;
};

/// Per-p MSE ratios for compressible records.
std::vector<RatioSummary> mse_ratios(const std::vector<TrialRecord>& records,
                                     Method numerator = Method::kSdrl1,
                                     Method denominator = Method::kIrl1);

struct CsvOptions {
  bool include_timing = false;  // wall_ms left empty otherwise, keeping output reproducible
};

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records,
               const CsvOptions& opts = {});

/// 17 significant digits, "nan"/"inf" spelled out.
std::string format_double(double v);

/// RFC 4180 quoting when the field holds a comma, quote, CR or LF.
std::string csv_field(const std::string& s);

}  // namespace rwl1::bench
