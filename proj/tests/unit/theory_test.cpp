#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "property.hpp"
#include "rwl1/error.hpp"
#include "rwl1/theory.hpp"

namespace rwl1::theory {
namespace {

using testing::for_all;

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

// Extreme eigenvalues of a 2x2 symmetric Gram matrix in closed form.
std::pair<double, double> gram2_eigs(const Vector& a, const Vector& b) {
  const double g11 = a.squaredNorm(), g22 = b.squaredNorm(), g12 = a.dot(b);
  const double mid = 0.5 * (g11 + g22);
  const double rad = std::hypot(0.5 * (g11 - g22), g12);
  return {mid - rad, mid + rad};
}

TEST(Gamma, Examples) {
  EXPECT_EQ(gamma(1.0, 0.3), 1.0);
  EXPECT_EQ(gamma(0.37, 1.0), 0.37);
  EXPECT_DOUBLE_EQ(gamma(0.5, 0.5), 1.0);
}

TEST(Gamma, RangeAndMonotonicity) {
  for_all(501, 300, [](Rng& rng, int) {
    const double w = rng.uniform();
    const double a1 = rng.uniform(), a2 = rng.uniform();
    const double g = gamma(w, a1);
    ASSERT_GE(g, w - 1e-15);
    ASSERT_LE(g, w + (1 - w) * std::sqrt(2.0) + 1e-15);
    if (a1 < a2) ASSERT_GE(g, gamma(w, a2));
  });
}

TEST(RipCondition, Examples) {
  EXPECT_DOUBLE_EQ(rip_bound(3.0, 1.0), 0.5);
  EXPECT_TRUE(rip_condition_ok(3.0, 1.0, 0.4));
  EXPECT_FALSE(rip_condition_ok(3.0, 1.0, 0.5));
  EXPECT_TRUE(rip_condition_ok(2.0, 1.2, 0.0));
  EXPECT_FALSE(rip_condition_ok(1.0, 1.0, 0.0));
  EXPECT_FALSE(rip_condition_ok(1.5, 1.3, 0.0));
}

TEST(Eta, ZeroRipExample) {
  const double s3 = std::sqrt(3.0);
  EXPECT_NEAR(eta(1.0, 0.2, 3.0, 0.0, 0.0), 2 * (1 + s3) / (s3 - 1), 1e-12);
  EXPECT_NEAR(eta(1.0, 0.2, 3.0, 0.0, 0.0), 7.4641016151377544, 1e-12);
}

TEST(Eta, DecreasesInAlpha) {
  double prev = std::numeric_limits<double>::infinity();
  for (double alpha = 0.55; alpha <= 1.0; alpha += 0.05) {
    const double e = eta(0.5, alpha, 3.0, 0.1, 0.1);
    EXPECT_LT(e, prev);
    prev = e;
  }
}

TEST(Eta, BlowsUpAtTheBound) {
  const double g = gamma(0.5, 0.7);
  const double b = rip_bound(3.0, g);
  // With delta_ak tied to delta_a1k the denominator vanishes exactly at the bound.
  const double near_b = eta(0.5, 0.7, 3.0, b - 1e-9, b - 1e-9);
  EXPECT_GT(near_b, 1e6);
  EXPECT_EQ(code_of([&] { eta(0.5, 0.7, 3.0, b + 1e-3, b + 1e-3); }), ErrorCode::kConditionViolated);
}

TEST(Eta, PositiveExactlyWhereConditionHolds) {
  for_all(502, 300, [](Rng& rng, int) {
    const double w = rng.uniform(), alpha = 0.5 + 0.5 * rng.uniform();
    const double a = 1.0 + 4.0 * rng.uniform(), d = 0.99 * rng.uniform();
    const double g = gamma(w, alpha);
    if (rip_condition_ok(a, g, d)) {
      const double e = eta(w, alpha, a, d, d);
      ASSERT_TRUE(std::isfinite(e));
      ASSERT_GT(e, 0.0);
    } else {
      ASSERT_EQ(code_of([&] { eta(w, alpha, a, d, d); }), ErrorCode::kConditionViolated);
    }
  });
}

TEST(NspConstant, Examples) {
  EXPECT_EQ(nsp_constant(1.0, 0.0, 0.0), 2.0);
  EXPECT_EQ(nsp_constant(4.0, 0.0, 0.0), 1.5);
}

TEST(NspConstant, IncreasingInBothDeltas) {
  for_all(503, 200, [](Rng& rng, int) {
    const double a = 1.0 + 3.0 * rng.uniform();
    const double d1 = 0.9 * rng.uniform(), d2 = 0.9 * rng.uniform(), h = 0.05;
    ASSERT_LT(nsp_constant(a, d1, d2), nsp_constant(a, d1 + h, d2));
    ASSERT_LT(nsp_constant(a, d1, d2), nsp_constant(a, d1, d2 + h));
  });
}

TEST(Prop1, ReportCombinesConstants) {
  Prop1Inputs in;
  in.omega = 0.5;
  in.a = 3.0;
  in.s0 = 8;
  in.k = 10;
  in.rip_ak = {30, 0.1, false};
  in.rip_a1k = {40, 0.1, false};
  const auto r = evaluate_prop1(in);
  EXPECT_DOUBLE_EQ(r.alpha0, 0.8);
  EXPECT_DOUBLE_EQ(r.gamma, gamma(0.5, 0.8));
  EXPECT_TRUE(r.rip_ok);
  ASSERT_TRUE(r.eta.has_value());
  EXPECT_DOUBLE_EQ(*r.eta, eta(0.5, 0.8, 3.0, 0.1, 0.1));
  EXPECT_DOUBLE_EQ(r.nsp_constant, nsp_constant(3.0, 0.1, 0.1));
}

TEST(Prop1, HypothesisChecked) {
  Prop1Inputs in;
  in.k = 10;
  in.s0 = 5;
  EXPECT_EQ(code_of([&] { evaluate_prop1(in); }), ErrorCode::kInvalidArgument);
  in.s0 = 8;
  in.a = 1.0;
  EXPECT_EQ(code_of([&] { evaluate_prop1(in); }), ErrorCode::kInvalidArgument);
}

TEST(Prop1, NoEtaWhenConditionFails) {
  Prop1Inputs in;
  in.a = 1.5;
  in.s0 = 6;
  in.k = 10;
  in.rip_ak = {15, 0.6, false};
  in.rip_a1k = {25, 0.6, false};
  const auto r = evaluate_prop1(in);
  EXPECT_FALSE(r.rip_ok);
  EXPECT_FALSE(r.eta.has_value());
}

TEST(DecayCondition, SparseSignalGivesRemainingSupport) {
  for_all(504, 50, [](Rng& rng, int) {
    const std::size_t k = 2 + rng.uniform_index(10);
    const std::size_t s0 = 1 + rng.uniform_index(k - 1);
    const Vector x = testing::sparse_vector(rng, 40, k);
    const auto d1 = decay_condition_max_d1(x, top_support(x, k), top_support(x, s0), 0.5, 3.0, s0);
    ASSERT_TRUE(d1.has_value());
    ASSERT_EQ(*d1, k - s0);
  });
}

TEST(DecayCondition, GeometricTail) {
  Vector x(30);
  for (int j = 0; j < 30; ++j) x[j] = std::ldexp(1.0, -(j + 1));
  const IndexSet top5 = top_support(x, 5);
  EXPECT_EQ(decay_condition_max_d1(x, top5, top5, 1.0, 1.0, 3), std::optional<std::size_t>(1));
}

TEST(DecayCondition, LargeTailGivesNone) {
  const Vector x = Vector::Ones(10);
  const IndexSet t0 = top_support(x, 3);
  EXPECT_FALSE(decay_condition_max_d1(x, t0, t0, 0.5, 2.0, 2).has_value());
}

TEST(DecayCondition, EnlargingTTildeNeverDecreasesD1) {
  for_all(505, 200, [](Rng& rng, int) {
    const Eigen::Index N = 30;
    Vector x(N);
    const double r = 0.2 + 0.6 * rng.uniform();
    for (Eigen::Index j = 0; j < N; ++j) x[j] = rng.sign() * std::pow(r, static_cast<double>(j));
    const std::size_t k = 3 + rng.uniform_index(8);
    const IndexSet t0 = top_support(x, k);
    std::vector<std::size_t> pick = rng.sample_without_replacement(N, 1 + rng.uniform_index(15));
    const IndexSet small(N, {pick.begin(), pick.begin() + static_cast<long>((pick.size() + 1) / 2)});
    const IndexSet big(N, pick);
    const double w = rng.uniform(), e = 1.0 + 5.0 * rng.uniform();
    const std::size_t s0 = 1 + rng.uniform_index(k);
    const auto ds = decay_condition_max_d1(x, t0, small, w, e, s0);
    const auto db = decay_condition_max_d1(x, t0, big, w, e, s0);
    if (ds) {
      ASSERT_TRUE(db.has_value());
      ASSERT_GE(*db, *ds);
    }
  });
}

TEST(BruteForceRip, FixtureValue) {
  Matrix a(2, 3);
  const double h = 1 / std::sqrt(2.0);
  a << 1, 0, h, 0, 1, h;
  const auto r = brute_force_rip(SensingMatrix(a), 2);
  EXPECT_NEAR(r.delta, h, 1e-9);
  EXPECT_TRUE(r.is_exact);
  EXPECT_EQ(r.k, 2u);
}

TEST(BruteForceRip, OrthonormalColumnsGiveZero) {
  EXPECT_NEAR(brute_force_rip(SensingMatrix(Matrix::Identity(4, 4)), 3).delta, 0.0, 1e-12);
}

TEST(BruteForceRip, MatchesClosedFormOnPairs) {
  for_all(506, 100, [](Rng& rng, int) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_index(3));
    const Matrix a = testing::gaussian_matrix(rng, n, 3) / std::sqrt(static_cast<double>(n));
    double want = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const auto [lo, hi] = gram2_eigs(a.col(i), a.col(j));
        want = std::max({want, hi - 1.0, 1.0 - lo});
      }
    ASSERT_NEAR(brute_force_rip(SensingMatrix(a), 2).delta, want, 1e-9);
  });
}

TEST(BruteForceRip, NondecreasingInK) {
  for_all(507, 20, [](Rng& rng, int) {
    const Matrix a = testing::gaussian_matrix(rng, 6, 8) / std::sqrt(6.0);
    const SensingMatrix A(a);
    double prev = 0.0;
    for (std::size_t k = 1; k <= 4; ++k) {
      const double d = brute_force_rip(A, k).delta;
      ASSERT_GE(d, prev - 1e-12);
      prev = d;
    }
  });
}

TEST(BruteForceRip, GuardsCombinatorics) {
  const auto A = gen_gaussian(10, 60, 1);
  EXPECT_EQ(code_of([&] { brute_force_rip(A, 10); }), ErrorCode::kTooLarge);
}

TEST(Prop2Accuracy, Examples) {
  EXPECT_EQ(prop2_accuracy(10, 20, 0.5).value, 1.0);
  EXPECT_DOUBLE_EQ(prop2_accuracy(10, 20, 0.8).value, 0.625);
  EXPECT_DOUBLE_EQ(prop2_accuracy(7, 20, 1.0).value, 0.35);
  EXPECT_FALSE(prop2_accuracy(10, 20, 0.8).clamped);
}

TEST(Prop2Accuracy, Errors) {
  EXPECT_EQ(code_of([] { prop2_accuracy(10, 20, 0.4); }), ErrorCode::kHypothesisViolated);
  EXPECT_EQ(code_of([] { prop2_accuracy(1, 0, 0.5); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { prop2_accuracy(21, 20, 1.0); }), ErrorCode::kInvalidArgument);
}

TEST(Prop2Simulate, FullAccuracyGivesOne) {
  const auto s = prop2_simulate(500, 20, 20, 20, 200, 3);
  EXPECT_EQ(s.accuracy, 1.0);
  EXPECT_EQ(s.rho_hat, 1.0);
  EXPECT_EQ(s.used_trials, 200u);
}

TEST(Prop2Simulate, Deterministic) {
  const auto a = prop2_simulate(2000, 20, 10, 15, 1, 99);
  const auto b = prop2_simulate(2000, 20, 10, 15, 1, 99);
  EXPECT_EQ(a.accuracy, b.accuracy);
  EXPECT_EQ(a.rho_hat, b.rho_hat);
  const auto c = prop2_simulate(2000, 20, 10, 15, 5000, 7);
  const auto d = prop2_simulate(2000, 20, 10, 15, 5000, 7);
  EXPECT_EQ(c.accuracy, d.accuracy);
}

TEST(Prop2Simulate, Errors) {
  EXPECT_EQ(code_of([] { prop2_simulate(100, 20, 15, 10, 10, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { prop2_simulate(100, 20, 10, 15, 0, 1); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { prop2_simulate(10, 20, 10, 15, 10, 1); }), ErrorCode::kInvalidArgument);
  // No guaranteed overlap and a huge ambient space: every trial is empty.
  EXPECT_EQ(code_of([] { prop2_simulate(1'000'000, 1, 0, 0, 3, 1); }), ErrorCode::kDegenerate);
}

TEST(Prop2Simulate, AgreesWithFormulaAtModerateTrials) {
  const auto s = prop2_simulate(2000, 20, 10, 15, 20000, 5);
  EXPECT_NEAR(s.accuracy, prop2_accuracy(10, 20, s.rho_hat).value, 0.02);
}

}  // namespace
}  // namespace rwl1::theory
