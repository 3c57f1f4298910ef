#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "rwl1/sensing.hpp"
#include "rwl1/sigcore.hpp"
#include "rwl1/wbpdn.hpp"

namespace rwl1 {

enum class Method { kL1, kIrl1, kSdrl1 };

std::string_view to_string(Method m);
/// Accepts "l1", "irl1", "sdrl1" (case-insensitive); throws invalid-argument otherwise.
Method parse_method(std::string_view name);

struct OuterConfig {
  double tol = 1e-4;
  int max_outer = 8;
  double irl1_a_floor = 1e-6;
  double irl1_a_scale = 1e-1;
  double p_hat = 0.99;
  double omega1 = 0.5;
  double omega2 = 0.0;
  std::optional<std::size_t> k_hat_override;
  // When set, the intersection set is formed from the same iterate that
  // produced T1 (so it always equals T1), instead of the iterate before it.
  bool sdrl1_same_iterate_omega = false;
  // Keep per-iteration solutions and weights in the trace.
  bool keep_iterates = false;
  SolverConfig solver;
};

struct IterationRecord {
  int t = 0;
  double solution_norm = 0.0;
  double relative_change = 0.0;  // ||x_t - x_{t-1}|| / ||x_{t-1}||, inf when x_{t-1} = 0
  double objective = 0.0;
  double feasibility_gap = 0.0;
  int solver_iterations = 0;
  bool solver_converged = false;
  // SDRL1 only: the sets that shaped this iteration's weights, and the
  // support estimate produced from its solution.
  IndexSet weight_support;  // T1 in effect when weights were built
  IndexSet omega;
  IndexSet support_estimate;  // new T1, |T1| == s
  std::size_t s = 0;
  // Filled when OuterConfig::keep_iterates.
  std::optional<Vector> solution;
  std::optional<Vector> weights;
};

struct RecoveryResult {
  Vector solution;
  int outer_iterations = 0;
  std::vector<IterationRecord> trace;
  Method method = Method::kL1;
  bool all_converged = true;  // every inner solve converged
  std::size_t k_hat = 0;      // SDRL1 only
};

RecoveryResult run_l1(const SensingMatrix& A, const MeasurementSet& m, const OuterConfig& cfg = {});
RecoveryResult run_irl1(const SensingMatrix& A, const MeasurementSet& m,
                        const OuterConfig& cfg = {});
RecoveryResult run_sdrl1(const SensingMatrix& A, const MeasurementSet& m,
                         const OuterConfig& cfg = {});
RecoveryResult run(Method method, const SensingMatrix& A, const MeasurementSet& m,
                   const OuterConfig& cfg = {});

/// round(n ln(N/n) / 2), or the override when given.
std::size_t compute_k_hat(std::size_t n, std::size_t N,
                          std::optional<std::size_t> override_value = std::nullopt);

/// w_i = 1 / (|x_i| + a)
WeightVector irl1_weights(const Vector& x, double a);

/// a_t = max(scale * max_i |x_i|, floor)
double irl1_stability(const Vector& x, double scale, double floor);

/// 1 off T1, omega1 on T1 \ Omega, omega2 on Omega. Omega must be a subset of T1.
WeightVector sdrl1_weights(const IndexSet& t1, const IndexSet& omega, double omega1,
                           double omega2, std::size_t N);

struct SupportUpdate {
  std::size_t s = 0;
  IndexSet t1;
};

/// s = min(energy_support_size(x, p_hat), k_hat), T1 = top_support(x, s).
SupportUpdate sdrl1_support_update(const Vector& x, double p_hat, std::size_t k_hat);

/// top_support(x_prev, s_prev) ∩ T1
IndexSet omega_update(const Vector& x_prev, std::size_t s_prev, const IndexSet& t1);

}  // namespace rwl1
