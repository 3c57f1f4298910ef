#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "rwl1/sensing.hpp"
#include "rwl1/sigcore.hpp"

namespace rwl1::theory {

/// Restricted isometry constant of order k, or an upper bound on it.
struct RipEstimate {
  std::size_t k = 0;
  double delta = 0.0;
  bool is_exact = false;

  /// delta < 1; otherwise A has no RIP of this order.
  bool valid() const noexcept { return delta >= 0.0 && delta < 1.0; }
};

/// omega + (1 - omega) * sqrt(2 - 2 alpha)
double gamma(double omega, double alpha);

/// (a - gamma^2) / (a + gamma^2); nonpositive when a <= gamma^2.
double rip_bound(double a, double gamma_value);

/// delta_{(a+1)k} < (a - gamma^2) / (a + gamma^2), false whenever a <= gamma^2.
bool rip_condition_ok(double a, double gamma_value, double delta_a1k);

/// Constant of the weighted l1-l1 instance-optimality bound:
///
///   2 (sqrt(1 + d_ak) + sqrt(a) sqrt(1 - d_a1k))
///   --------------------------------------------------------------
///   sqrt(a) sqrt(1 - d_a1k) - (omega + (1 - omega) sqrt(2 - 2 alpha)) sqrt(1 + d_ak)
///
/// The numerator's second term uses the same (a+1)k constant as the
/// denominator. Throws condition-violated when the denominator is not positive.
double eta(double omega, double alpha, double a, double delta_ak, double delta_a1k);

/// Null space property constant 1 + sqrt(1 + d_ak) / (sqrt(a) sqrt(1 - d_a1k)).
double nsp_constant(double a, double delta_ak, double delta_a1k);

struct Prop1Inputs {
  double omega = 0.5;
  double a = 2.0;
  RipEstimate rip_ak;
  RipEstimate rip_a1k;
  std::size_t s0 = 0;
  std::size_t k = 0;

  /// s0 / k; the guarantee needs k/2 < s0 <= k.
  double alpha0() const { return static_cast<double>(s0) / static_cast<double>(k); }
};

struct Prop1Report {
  double alpha0 = 0.0;
  double gamma = 0.0;
  double rip_bound = 0.0;
  bool rip_ok = false;
  std::optional<double> eta;  // present iff rip_ok
  double nsp_constant = 0.0;
};

/// Evaluates every constant of the support-improvement guarantee. Throws
/// invalid-argument if the accuracy hypothesis k/2 < s0 <= k or a > 1 fails.
Prop1Report evaluate_prop1(const Prop1Inputs& in);

/// Largest d1 >= 1 with |x(s0 + d1)| >= RHS, where x(j) is the j-th largest
/// magnitude of x and
///   RHS = (omega eta + 1) ||x off T0||_1 + (1 - omega) eta ||x off (T0 ∪ T~)||_1.
/// Entries equal to zero never qualify. Returns nullopt when no d1 exists.
std::optional<std::size_t> decay_condition_max_d1(const Vector& x, const IndexSet& t0,
                                                  const IndexSet& t_tilde, double omega,
                                                  double eta_value, std::size_t s0);

/// Exact delta_k by enumerating every k-column submatrix. Throws too-large
/// if C(N, k) exceeds `max_subsets`.
RipEstimate brute_force_rip(const SensingMatrix& A, std::size_t k,
                            std::uint64_t max_subsets = 1'000'000);

struct Prop2Accuracy {
  double value = 0.0;
  bool clamped = false;  // raw value exceeded 1
};

/// (1 / rho) (s0 / k). Throws hypothesis-violated when rho < s0 / k.
Prop2Accuracy prop2_accuracy(std::size_t s0, std::size_t k, double rho);

struct Prop2Simulation {
  double accuracy = 0.0;  // mean over trials of |T0 ∩ T~ ∩ Tw| / |T~ ∩ Tw|
  double rho_hat = 0.0;   // mean over trials of |T~ ∩ Tw| / |T~|
  std::size_t used_trials = 0;
  std::size_t discarded_trials = 0;  // empty intersection
};

/// Monte Carlo of the idealized support model with T0 = {0..k-1}:
///   T~ = {0..s0-1} plus k - s0 uniform draws from outside T0,
///   Tw = {0..s1-1} plus k - s1 independent uniform draws from outside T0.
/// Throws degenerate if every trial had an empty intersection.
Prop2Simulation prop2_simulate(std::size_t N, std::size_t k, std::size_t s0, std::size_t s1,
                               std::size_t trials, std::uint64_t seed);

}  // namespace rwl1::theory
