#include "rwl1/sigcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rwl1/error.hpp"

namespace rwl1 {

void require_finite(const Vector& v, const char* what) {
  require(v.allFinite(), ErrorCode::kInvalidArgument,
          std::string(what) + " contains non-finite entries");
}

IndexSet::IndexSet(std::size_t dimension, std::vector<std::size_t> indices)
    : dimension_(dimension), indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  require(std::adjacent_find(indices_.begin(), indices_.end()) == indices_.end(),
          ErrorCode::kInvalidArgument, "index set contains duplicates");
  require(indices_.empty() || indices_.back() < dimension_, ErrorCode::kInvalidArgument,
          "index " + std::to_string(indices_.empty() ? 0 : indices_.back()) +
              " out of range for dimension " + std::to_string(dimension_));
}

bool IndexSet::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool IndexSet::is_subset_of(const IndexSet& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                       indices_.end());
}

IndexSet IndexSet::intersect(const IndexSet& other) const {
  require(dimension_ == other.dimension_, ErrorCode::kInvalidArgument,
          "index sets over different dimensions");
  IndexSet out(dimension_);
  std::set_intersection(indices_.begin(), indices_.end(), other.indices_.begin(),
                        other.indices_.end(), std::back_inserter(out.indices_));
  return out;
}

IndexSet IndexSet::unite(const IndexSet& other) const {
  require(dimension_ == other.dimension_, ErrorCode::kInvalidArgument,
          "index sets over different dimensions");
  IndexSet out(dimension_);
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(),
                 other.indices_.end(), std::back_inserter(out.indices_));
  return out;
}

IndexSet IndexSet::complement() const {
  IndexSet out(dimension_);
  auto it = indices_.begin();
  for (std::size_t i = 0; i < dimension_; ++i) {
    if (it != indices_.end() && *it == i) {
      ++it;
    } else {
      out.indices_.push_back(i);
    }
  }
  return out;
}

std::vector<bool> IndexSet::mask() const {
  std::vector<bool> m(dimension_, false);
  for (auto i : indices_) m[i] = true;
  return m;
}

std::vector<std::size_t> IndexSet::one_based() const {
  std::vector<std::size_t> out(indices_);
  for (auto& i : out) ++i;
  return out;
}

namespace {

struct ByMagnitude {
  const Vector& v;
  bool operator()(std::size_t a, std::size_t b) const {
    const double ma = std::abs(v[static_cast<Eigen::Index>(a)]);
    const double mb = std::abs(v[static_cast<Eigen::Index>(b)]);
    return ma > mb || (ma == mb && a < b);
  }
};

}  // namespace

std::vector<std::size_t> magnitude_order(const Vector& v) {
  std::vector<std::size_t> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), ByMagnitude{v});
  return order;
}

IndexSet top_support(const Vector& v, std::size_t s) {
  const auto n = static_cast<std::size_t>(v.size());
  require(s <= n, ErrorCode::kInvalidArgument,
          "support size " + std::to_string(s) + " exceeds dimension " + std::to_string(n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s), order.end(),
                    ByMagnitude{v});
  order.resize(s);
  return IndexSet(n, std::move(order));
}

EnergySupport energy_support_size(const Vector& v, double p_hat) {
  require(p_hat > 0.0 && p_hat <= 1.0, ErrorCode::kInvalidArgument,
          "p_hat must lie in (0, 1]");
  const double total = v.squaredNorm();
  if (total == 0.0) return {0, true};

  std::vector<double> sq(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) sq[static_cast<std::size_t>(i)] = v[i] * v[i];
  std::sort(sq.begin(), sq.end(), std::greater<>());

  const double target = p_hat * p_hat * total;
  double cumulative = 0.0;
  for (std::size_t l = 0; l < sq.size(); ++l) {
    cumulative += sq[l];
    if (cumulative >= target) return {l + 1, false};
  }
  // Rounding can leave the full sum a hair under p_hat^2 * total when p_hat = 1.
  return {sq.size(), false};
}

Vector best_k_term(const Vector& v, std::size_t k) {
  const IndexSet keep = top_support(v, k);
  Vector out = Vector::Zero(v.size());
  for (auto i : keep) out[static_cast<Eigen::Index>(i)] = v[static_cast<Eigen::Index>(i)];
  return out;
}

double support_accuracy(const IndexSet& est, const IndexSet& truth) {
  require(!est.empty(), ErrorCode::kUndefinedAccuracy, "accuracy of an empty support estimate");
  return static_cast<double>(est.intersect(truth).size()) / static_cast<double>(est.size());
}

double l1_norm_on(const Vector& v, const IndexSet& set) {
  double s = 0.0;
  for (auto i : set) s += std::abs(v[static_cast<Eigen::Index>(i)]);
  return s;
}

}  // namespace rwl1
