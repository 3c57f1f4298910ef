#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "property.hpp"
#include "rwl1/error.hpp"
#include "rwl1/sigcore.hpp"

namespace rwl1 {
namespace {

using testing::for_all;

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

std::vector<std::size_t> ob(std::initializer_list<std::size_t> v) { return v; }

TEST(TopSupport, TwoLargestMagnitudes) {
  EXPECT_EQ(top_support(vec({3, -5, 0, 2}), 2).one_based(), ob({1, 2}));
}

TEST(TopSupport, TiesGoToLowerIndex) {
  EXPECT_EQ(top_support(vec({1, 1, 1}), 2).one_based(), ob({1, 2}));
}

TEST(TopSupport, ZeroSelectionIsEmpty) {
  EXPECT_TRUE(top_support(vec({4, 5}), 0).empty());
}

TEST(TopSupport, ZerosFillRemainingSlotsInIndexOrder) {
  EXPECT_EQ(top_support(vec({0, 7, 0, 0}), 3).one_based(), ob({1, 2, 3}));
}

TEST(TopSupport, RejectsSizeAboveDimension) {
  try {
    top_support(vec({1, 2}), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(EnergySupport, OneDominantEntry) {
  Vector v = Vector::Zero(10);
  v[0] = 10;
  v[1] = 1;
  EXPECT_EQ(energy_support_size(v, 0.99).size, 1u);
}

TEST(EnergySupport, FlatVectorNeedsAll) {
  EXPECT_EQ(energy_support_size(vec({1, 1, 1, 1}), 0.99).size, 4u);
}

TEST(EnergySupport, SingleEntryFullEnergy) {
  EXPECT_EQ(energy_support_size(vec({5}), 1.0).size, 1u);
}

TEST(EnergySupport, ZeroVectorIsFlaggedDegenerate) {
  const auto e = energy_support_size(Vector::Zero(5), 0.9);
  EXPECT_EQ(e.size, 0u);
  EXPECT_TRUE(e.degenerate);
}

TEST(EnergySupport, RejectsPHatOutsideUnitInterval) {
  EXPECT_THROW(energy_support_size(vec({1, 2}), 0.0), Error);
  EXPECT_THROW(energy_support_size(vec({1, 2}), 1.5), Error);
}

TEST(BestKTerm, KeepsTwoLargest) {
  EXPECT_EQ(best_k_term(vec({3, -5, 0, 2}), 2), vec({3, -5, 0, 0}));
}

TEST(BestKTerm, ZeroAndFull) {
  const Vector v = vec({3, -5, 0, 2});
  EXPECT_EQ(best_k_term(v, 0), Vector::Zero(4));
  EXPECT_EQ(best_k_term(v, 4), v);
}

TEST(SupportAccuracy, HalfCorrect) {
  EXPECT_DOUBLE_EQ(support_accuracy(IndexSet(8, {0, 1, 2, 3}), IndexSet(8, {0, 1, 4, 5})), 0.5);
}

TEST(SupportAccuracy, EqualAndDisjoint) {
  const IndexSet a(6, {1, 3});
  EXPECT_DOUBLE_EQ(support_accuracy(a, a), 1.0);
  EXPECT_DOUBLE_EQ(support_accuracy(a, IndexSet(6, {0, 2})), 0.0);
}

TEST(SupportAccuracy, EmptyEstimateIsUndefined) {
  try {
    support_accuracy(IndexSet(4), IndexSet(4, {1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefinedAccuracy);
  }
}

TEST(IndexSet, RejectsOutOfRangeAndDuplicates) {
  EXPECT_THROW(IndexSet(3, {3}), Error);
  EXPECT_THROW(IndexSet(3, {1, 1}), Error);
}

TEST(IndexSet, SetAlgebra) {
  const IndexSet a(6, {4, 0, 2});
  const IndexSet b(6, {2, 3});
  EXPECT_EQ(a.intersect(b), IndexSet(6, {2}));
  EXPECT_EQ(a.unite(b), IndexSet(6, {0, 2, 3, 4}));
  EXPECT_EQ(a.complement(), IndexSet(6, {1, 3, 5}));
  EXPECT_TRUE(IndexSet(6, {2}).is_subset_of(a));
  EXPECT_FALSE(b.is_subset_of(a));
  EXPECT_TRUE(a.contains(4));
  EXPECT_FALSE(a.contains(5));
  EXPECT_EQ(a.one_based(), ob({1, 3, 5}));
}

TEST(L1NormOn, SumsSelectedMagnitudes) {
  EXPECT_DOUBLE_EQ(l1_norm_on(vec({1, -2, 3}), IndexSet(3, {1, 2})), 5.0);
}

TEST(RequireFinite, RejectsNanAndInf) {
  EXPECT_THROW(require_finite(vec({1, NAN}), "v"), Error);
  EXPECT_THROW(require_finite(vec({INFINITY}), "v"), Error);
  EXPECT_NO_THROW(require_finite(vec({1, 2}), "v"));
}

// Values drawn from a small set so that magnitude ties are common.
Vector tie_heavy(Rng& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = static_cast<double>(rng.uniform_index(4)) * rng.sign();
  return v;
}

TEST(SigcoreProperty, TopSupportIsNested) {
  for_all(101, 200, [](Rng& rng, int) {
    const auto n = static_cast<Eigen::Index>(1 + rng.uniform_index(15));
    const Vector v = tie_heavy(rng, n);
    for (std::size_t s = 0; s < static_cast<std::size_t>(n); ++s) {
      const auto small = top_support(v, s);
      const auto large = top_support(v, s + 1);
      ASSERT_EQ(small.size(), s);
      ASSERT_TRUE(small.is_subset_of(large));
    }
  });
}

TEST(SigcoreProperty, BestKTermErrorNonincreasing) {
  for_all(102, 200, [](Rng& rng, int) {
    const auto n = static_cast<Eigen::Index>(1 + rng.uniform_index(15));
    const Vector v = testing::gaussian_vector(rng, n);
    double prev = INFINITY;
    for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) {
      const double e = (best_k_term(v, k) - v).norm();
      ASSERT_LE(e, prev);
      prev = e;
    }
    ASSERT_EQ(prev, 0.0);
  });
}

TEST(SigcoreProperty, EnergySupportNondecreasingInPHat) {
  for_all(103, 200, [](Rng& rng, int) {
    const auto n = static_cast<Eigen::Index>(1 + rng.uniform_index(20));
    const Vector v = testing::gaussian_vector(rng, n);
    std::size_t prev = 0;
    for (double p = 0.05; p <= 1.0; p += 0.05) {
      const auto l = energy_support_size(v, std::min(p, 1.0)).size;
      ASSERT_GE(l, prev);
      ASSERT_LE(l, static_cast<std::size_t>(n));
      prev = l;
    }
  });
}

TEST(SigcoreProperty, EnergySupportIsMinimal) {
  for_all(104, 200, [](Rng& rng, int) {
    const auto n = static_cast<Eigen::Index>(1 + rng.uniform_index(20));
    const Vector v = testing::gaussian_vector(rng, n);
    const double p = 0.5 + 0.5 * rng.uniform();
    const auto l = energy_support_size(v, p).size;
    ASSERT_GE(best_k_term(v, l).norm(), p * v.norm() * (1 - 1e-15));
    if (l > 0) ASSERT_LT(best_k_term(v, l - 1).norm(), p * v.norm());
  });
}

TEST(SigcoreProperty, AccuracyInvariantUnderPermutation) {
  for_all(105, 200, [](Rng& rng, int) {
    const std::size_t n = 2 + rng.uniform_index(15);
    const auto est_idx = rng.sample_without_replacement(n, 1 + rng.uniform_index(n));
    const auto truth_idx = rng.sample_without_replacement(n, rng.uniform_index(n + 1));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
    auto mapped = [&](const std::vector<std::size_t>& s) {
      std::vector<std::size_t> out;
      for (auto i : s) out.push_back(perm[i]);
      return IndexSet(n, out);
    };
    ASSERT_DOUBLE_EQ(support_accuracy(IndexSet(n, est_idx), IndexSet(n, truth_idx)),
                     support_accuracy(mapped(est_idx), mapped(truth_idx)));
  });
}

}  // namespace
}  // namespace rwl1
