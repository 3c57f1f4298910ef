#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rwl1 {

/// Real N-dimensional signal, measurement vector, or iterate.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Throws invalid-argument if any entry is NaN or infinite.
void require_finite(const Vector& v, const char* what);

/// Ordered set of coordinate indices within [0, N).
///
/// Indices are 0-based inside the library. Anything user-facing (CLI output,
/// JSON sidecars) goes through `one_based()`.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::size_t dimension) : dimension_(dimension) {}

  /// Validates range and uniqueness; input order is irrelevant.
  IndexSet(std::size_t dimension, std::vector<std::size_t> indices);
  IndexSet(std::size_t dimension, std::initializer_list<std::size_t> indices)
      : IndexSet(dimension, std::vector<std::size_t>(indices)) {}

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }

  std::span<const std::size_t> indices() const noexcept { return indices_; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  bool contains(std::size_t i) const;
  bool is_subset_of(const IndexSet& other) const;

  IndexSet intersect(const IndexSet& other) const;
  IndexSet unite(const IndexSet& other) const;
  IndexSet complement() const;

  /// Membership mask of length dimension().
  std::vector<bool> mask() const;

  std::vector<std::size_t> one_based() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<std::size_t> indices_;
};

/// Indices sorted by decreasing magnitude, ties to the smaller index.
std::vector<std::size_t> magnitude_order(const Vector& v);

/// Indices of the `s` largest-magnitude entries of `v` (ties to the smaller
/// index, so zero entries fill remaining slots in index order).
IndexSet top_support(const Vector& v, std::size_t s);

struct EnergySupport {
  std::size_t size = 0;
  bool degenerate = false;  // v was identically zero
};

/// Smallest l such that the l largest-magnitude entries carry at least
/// p_hat of the l2 norm of `v`.
EnergySupport energy_support_size(const Vector& v, double p_hat);

/// `v` with all but the k largest-magnitude entries zeroed.
Vector best_k_term(const Vector& v, std::size_t k);

/// |est ∩ truth| / |est|.
double support_accuracy(const IndexSet& est, const IndexSet& truth);

/// Sum of |v_i| over i in `set`.
double l1_norm_on(const Vector& v, const IndexSet& set);

}  // namespace rwl1
