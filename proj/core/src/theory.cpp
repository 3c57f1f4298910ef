#include "rwl1/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "rwl1/error.hpp"
#include "rwl1/rng.hpp"

namespace rwl1::theory {

double gamma(double omega, double alpha) {
  require(omega >= 0.0 && omega <= 1.0 && alpha >= 0.0 && alpha <= 1.0,
          ErrorCode::kInvalidArgument, "gamma needs omega, alpha in [0, 1]");
  return omega + (1.0 - omega) * std::sqrt(2.0 - 2.0 * alpha);
}

double rip_bound(double a, double gamma_value) {
  const double g2 = gamma_value * gamma_value;
  return (a - g2) / (a + g2);
}

bool rip_condition_ok(double a, double gamma_value, double delta_a1k) {
  if (a <= gamma_value * gamma_value) return false;
  return delta_a1k < rip_bound(a, gamma_value);
}

double eta(double omega, double alpha, double a, double delta_ak, double delta_a1k) {
  require(a > 0.0 && delta_ak > -1.0 && delta_a1k < 1.0, ErrorCode::kInvalidArgument,
          "eta needs a > 0, delta_ak > -1 and delta_a1k < 1");
  const double sa = std::sqrt(a);
  const double lower = std::sqrt(1.0 - delta_a1k);
  const double upper = std::sqrt(1.0 + delta_ak);
  const double denom = sa * lower - gamma(omega, alpha) * upper;
  require(denom > 0.0, ErrorCode::kConditionViolated,
          "eta denominator is not positive (RIP condition fails)");
  return 2.0 * (upper + sa * lower) / denom;
}

double nsp_constant(double a, double delta_ak, double delta_a1k) {
  require(a > 0.0 && delta_a1k < 1.0 && delta_ak > -1.0, ErrorCode::kInvalidArgument,
          "nsp_constant needs a > 0 and delta_a1k < 1");
  return 1.0 + std::sqrt(1.0 + delta_ak) / (std::sqrt(a) * std::sqrt(1.0 - delta_a1k));
}

Prop1Report evaluate_prop1(const Prop1Inputs& in) {
  require(in.k >= 1 && 2 * in.s0 > in.k && in.s0 <= in.k, ErrorCode::kInvalidArgument,
          "support accuracy hypothesis needs k/2 < s0 <= k");
  require(in.a > 1.0, ErrorCode::kInvalidArgument, "a must exceed 1");
  Prop1Report r;
  r.alpha0 = in.alpha0();
  r.gamma = gamma(in.omega, r.alpha0);
  r.rip_bound = rip_bound(in.a, r.gamma);
  r.rip_ok = in.rip_a1k.valid() && rip_condition_ok(in.a, r.gamma, in.rip_a1k.delta);
  if (r.rip_ok) {
    r.eta = eta(in.omega, r.alpha0, in.a, in.rip_ak.delta, in.rip_a1k.delta);
  }
  if (in.rip_a1k.delta < 1.0) {
    r.nsp_constant = nsp_constant(in.a, in.rip_ak.delta, in.rip_a1k.delta);
  } else {
    r.nsp_constant = std::numeric_limits<double>::infinity();
  }
  return r;
}

std::optional<std::size_t> decay_condition_max_d1(const Vector& x, const IndexSet& t0,
                                                  const IndexSet& t_tilde, double omega,
                                                  double eta_value, std::size_t s0) {
  const auto N = static_cast<std::size_t>(x.size());
  require(t0.dimension() == N && t_tilde.dimension() == N, ErrorCode::kInvalidArgument,
          "support sets do not match the signal dimension");
  require(s0 >= 1 && s0 <= N, ErrorCode::kInvalidArgument, "s0 must lie in [1, N]");

  const IndexSet off_t0 = t0.complement();
  const IndexSet off_both = t0.unite(t_tilde).complement();
  const double rhs = (omega * eta_value + 1.0) * l1_norm_on(x, off_t0) +
                     (1.0 - omega) * eta_value * l1_norm_on(x, off_both);

  const auto order = magnitude_order(x);
  std::optional<std::size_t> best;
  // order is by decreasing magnitude, so qualifying d1 form a prefix.
  for (std::size_t d1 = 1; s0 + d1 <= N; ++d1) {
    const double mag = std::abs(x[static_cast<Eigen::Index>(order[s0 + d1 - 1])]);
    if (mag <= 0.0 || mag < rhs) break;
    best = d1;
  }
  return best;
}

namespace {

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double c = 1.0L;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(std::llround(c));
}

}  // namespace

RipEstimate brute_force_rip(const SensingMatrix& A, std::size_t k, std::uint64_t max_subsets) {
  const auto N = static_cast<std::size_t>(A.cols());
  require(k >= 1 && k <= N, ErrorCode::kInvalidArgument,
          "RIP order must lie in [1, N] (got " + std::to_string(k) + ")");
  const std::uint64_t count = binomial_capped(N, k, max_subsets);
  require(count <= max_subsets, ErrorCode::kTooLarge,
          "C(" + std::to_string(N) + ", " + std::to_string(k) + ") exceeds " +
              std::to_string(max_subsets) + " subsets");

  const Matrix& a = A.entries();
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Matrix sub(a.rows(), static_cast<Eigen::Index>(k));
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  double delta = 0.0;
  while (true) {
    for (std::size_t j = 0; j < k; ++j)
      sub.col(static_cast<Eigen::Index>(j)) = a.col(static_cast<Eigen::Index>(idx[j]));
    eig.compute(sub.transpose() * sub, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    delta = std::max({delta, ev.maxCoeff() - 1.0, 1.0 - ev.minCoeff()});

    // next combination in lexicographic order
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == N - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return {k, delta, true};
}

Prop2Accuracy prop2_accuracy(std::size_t s0, std::size_t k, double rho) {
  require(k >= 1 && s0 <= k, ErrorCode::kInvalidArgument, "need k >= 1 and s0 <= k");
  require(rho > 0.0 && rho <= 1.0, ErrorCode::kInvalidArgument, "rho must lie in (0, 1]");
  const double alpha0 = static_cast<double>(s0) / static_cast<double>(k);
  // Tolerate rounding when rho is computed as exactly s0/k by another route.
  require(rho >= alpha0 * (1.0 - 1e-12), ErrorCode::kHypothesisViolated,
          "rho = " + std::to_string(rho) + " is below s0/k = " + std::to_string(alpha0));
  const double raw = alpha0 / rho;
  return {std::min(raw, 1.0), raw > 1.0};
}

Prop2Simulation prop2_simulate(std::size_t N, std::size_t k, std::size_t s0, std::size_t s1,
                               std::size_t trials, std::uint64_t seed) {
  require(s0 <= s1 && s1 <= k && k <= N, ErrorCode::kInvalidArgument,
          "prop2_simulate needs s0 <= s1 <= k <= N");
  require(trials >= 1, ErrorCode::kInvalidArgument, "need at least one trial");
  require(k - s0 <= N - k, ErrorCode::kInvalidArgument,
          "not enough indices outside T0 to fill the support estimates");

  Rng rng(seed);
  std::vector<std::uint32_t> stamp(N, 0);
  double accuracy_sum = 0.0;
  double rho_sum = 0.0;
  Prop2Simulation out;

  for (std::size_t trial = 1; trial <= trials; ++trial) {
    const auto mark = static_cast<std::uint32_t>(trial);
    // T~: {0..s0-1} plus off-support draws, offset into [k, N).
    for (std::size_t i = 0; i < s0; ++i) stamp[i] = mark;
    for (auto j : rng.sample_without_replacement(N - k, k - s0)) stamp[k + j] = mark;

    std::size_t both = 0;
    std::size_t both_in_t0 = 0;
    for (std::size_t i = 0; i < s1; ++i) {
      if (stamp[i] == mark) {
        ++both;
        ++both_in_t0;
      }
    }
    for (auto j : rng.sample_without_replacement(N - k, k - s1)) {
      if (stamp[k + j] == mark) ++both;
    }

    rho_sum += static_cast<double>(both) / static_cast<double>(k);
    if (both == 0) {
      ++out.discarded_trials;
      continue;
    }
    accuracy_sum += static_cast<double>(both_in_t0) / static_cast<double>(both);
    ++out.used_trials;
  }

  require(out.used_trials > 0, ErrorCode::kDegenerate,
          "every trial produced an empty intersection");
  out.accuracy = accuracy_sum / static_cast<double>(out.used_trials);
  out.rho_hat = rho_sum / static_cast<double>(trials);
  return out;
}

}  // namespace rwl1::theory
