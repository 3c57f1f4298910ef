#include "rwl1/reweight.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "rwl1/error.hpp"

namespace rwl1 {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kL1: return "l1";
    case Method::kIrl1: return "irl1";
    case Method::kSdrl1: return "sdrl1";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "l1") return Method::kL1;
  if (lower == "irl1") return Method::kIrl1;
  if (lower == "sdrl1") return Method::kSdrl1;
  fail(ErrorCode::kInvalidArgument,
       "unknown method '" + std::string(name) + "' (expected l1, irl1 or sdrl1)");
}

std::size_t compute_k_hat(std::size_t n, std::size_t N, std::optional<std::size_t> override_value) {
  if (override_value) {
    require(*override_value > 0, ErrorCode::kInvalidArgument, "k_hat override must be positive");
    return *override_value;
  }
  require(n >= 1 && n < N, ErrorCode::kInvalidArgument,
          "k_hat needs 1 <= n < N (got n=" + std::to_string(n) + ", N=" + std::to_string(N) + ")");
  const double nd = static_cast<double>(n);
  const double k = std::round(nd * std::log(static_cast<double>(N) / nd) / 2.0);
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

WeightVector irl1_weights(const Vector& x, double a) {
  require(a > 0.0, ErrorCode::kInvalidArgument, "IRL1 stability parameter must be positive");
  return WeightVector((x.cwiseAbs().array() + a).inverse().matrix());
}

double irl1_stability(const Vector& x, double scale, double floor) {
  const double peak = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  return std::max(scale * peak, floor);
}

WeightVector sdrl1_weights(const IndexSet& t1, const IndexSet& omega, double omega1,
                           double omega2, std::size_t N) {
  require(t1.dimension() == N && omega.dimension() == N, ErrorCode::kInvalidArgument,
          "support sets do not match the signal dimension");
  require(omega.is_subset_of(t1), ErrorCode::kInvariantViolation,
          "intersection set is not contained in the support estimate");
  Vector w = Vector::Ones(static_cast<Eigen::Index>(N));
  for (auto i : t1) w[static_cast<Eigen::Index>(i)] = omega1;
  for (auto i : omega) w[static_cast<Eigen::Index>(i)] = omega2;
  return WeightVector(std::move(w));
}

SupportUpdate sdrl1_support_update(const Vector& x, double p_hat, std::size_t k_hat) {
  const auto N = static_cast<std::size_t>(x.size());
  const EnergySupport energy = energy_support_size(x, p_hat);
  if (energy.degenerate) return {0, IndexSet(N)};
  const std::size_t s = std::min(energy.size, k_hat);
  return {s, top_support(x, s)};
}

IndexSet omega_update(const Vector& x_prev, std::size_t s_prev, const IndexSet& t1) {
  return top_support(x_prev, s_prev).intersect(t1);
}

namespace {

double relative_change(const Vector& current, const Vector& previous) {
  const double base = previous.norm();
  const double diff = (current - previous).norm();
  if (base == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / base;
}

bool should_stop(int t, double change, const OuterConfig& cfg) {
  return t >= 2 && change <= cfg.tol;
}

void validate(const SensingMatrix& A, const MeasurementSet& m, const OuterConfig& cfg) {
  require(m.y.size() == A.rows(), ErrorCode::kInvalidArgument,
          "measurement length " + std::to_string(m.y.size()) + " does not match matrix with " +
              std::to_string(A.rows()) + " rows");
  require(cfg.tol > 0.0 && cfg.max_outer >= 1, ErrorCode::kInvalidArgument,
          "outer tolerance must be positive and max_outer >= 1");
}

IterationRecord record_solve(int t, const SolverResult& sol, const Vector& previous,
                             const WeightVector& w, const OuterConfig& cfg) {
  IterationRecord rec;
  rec.t = t;
  rec.solution_norm = sol.solution.norm();
  rec.relative_change = relative_change(sol.solution, previous);
  rec.objective = sol.objective;
  rec.feasibility_gap = sol.feasibility_gap;
  rec.solver_iterations = sol.iterations;
  rec.solver_converged = sol.converged;
  if (cfg.keep_iterates) {
    rec.solution = sol.solution;
    rec.weights = w.values();
  }
  return rec;
}

}  // namespace

RecoveryResult run_l1(const SensingMatrix& A, const MeasurementSet& m, const OuterConfig& cfg) {
  validate(A, m, cfg);
  const auto w = WeightVector::ones(A.cols());
  const SolverResult sol = solve(A, m, w, cfg.solver);
  RecoveryResult out;
  out.method = Method::kL1;
  out.trace.push_back(record_solve(1, sol, Vector::Zero(A.cols()), w, cfg));
  out.solution = sol.solution;
  out.outer_iterations = 1;
  out.all_converged = sol.converged;
  return out;
}

RecoveryResult run_irl1(const SensingMatrix& A, const MeasurementSet& m, const OuterConfig& cfg) {
  validate(A, m, cfg);
  require(cfg.irl1_a_floor > 0.0 && cfg.irl1_a_scale >= 0.0, ErrorCode::kInvalidArgument,
          "IRL1 needs a positive stability floor and nonnegative scale");
  RecoveryResult out;
  out.method = Method::kIrl1;

  WeightVector w = WeightVector::ones(A.cols());
  Vector previous = Vector::Zero(A.cols());
  for (int t = 1; t <= cfg.max_outer; ++t) {
    const SolverResult sol = solve(A, m, w, cfg.solver);
    IterationRecord rec = record_solve(t, sol, previous, w, cfg);
    out.all_converged = out.all_converged && sol.converged;
    const double change = rec.relative_change;
    out.trace.push_back(std::move(rec));
    previous = sol.solution;
    out.outer_iterations = t;
    if (should_stop(t, change, cfg)) break;
    w = irl1_weights(sol.solution,
                     irl1_stability(sol.solution, cfg.irl1_a_scale, cfg.irl1_a_floor));
  }
  out.solution = previous;
  return out;
}

RecoveryResult run_sdrl1(const SensingMatrix& A, const MeasurementSet& m, const OuterConfig& cfg) {
  validate(A, m, cfg);
  require(cfg.p_hat > 0.0 && cfg.p_hat <= 1.0, ErrorCode::kInvalidArgument,
          "p_hat must lie in (0, 1]");
  const auto N = static_cast<std::size_t>(A.cols());
  const auto n = static_cast<std::size_t>(A.rows());

  RecoveryResult out;
  out.method = Method::kSdrl1;
  out.k_hat = compute_k_hat(n, N, cfg.k_hat_override);

  // x^{(t-1)}, s^{(t-1)} and x^{(t-2)}, s^{(t-2)}; all start at zero.
  Vector x_prev = Vector::Zero(A.cols());
  std::size_t s_prev = 0;
  Vector x_prev2 = Vector::Zero(A.cols());
  std::size_t s_prev2 = 0;
  IndexSet t1(N);

  for (int t = 1; t <= cfg.max_outer; ++t) {
    const IndexSet omega = cfg.sdrl1_same_iterate_omega ? omega_update(x_prev, s_prev, t1)
                                                        : omega_update(x_prev2, s_prev2, t1);
    const WeightVector w = sdrl1_weights(t1, omega, cfg.omega1, cfg.omega2, N);
    const SolverResult sol = solve(A, m, w, cfg.solver);
    SupportUpdate upd = sdrl1_support_update(sol.solution, cfg.p_hat, out.k_hat);

    IterationRecord rec = record_solve(t, sol, x_prev, w, cfg);
    rec.weight_support = t1;
    rec.omega = omega;
    rec.support_estimate = upd.t1;
    rec.s = upd.s;
    const double change = rec.relative_change;
    out.trace.push_back(std::move(rec));
    out.all_converged = out.all_converged && sol.converged;
    out.outer_iterations = t;

    x_prev2 = std::move(x_prev);
    s_prev2 = s_prev;
    x_prev = sol.solution;
    s_prev = upd.s;
    t1 = std::move(upd.t1);
    if (should_stop(t, change, cfg)) break;
  }
  out.solution = x_prev;
  return out;
}

RecoveryResult run(Method method, const SensingMatrix& A, const MeasurementSet& m,
                   const OuterConfig& cfg) {
  switch (method) {
    case Method::kL1: return run_l1(A, m, cfg);
    case Method::kIrl1: return run_irl1(A, m, cfg);
    case Method::kSdrl1: return run_sdrl1(A, m, cfg);
  }
  fail(ErrorCode::kInvalidArgument, "unknown method");
}

}  // namespace rwl1
