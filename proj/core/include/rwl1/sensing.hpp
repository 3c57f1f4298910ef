#pragma once

#include <cstdint>
#include <memory>

#include "rwl1/sigcore.hpp"

namespace rwl1 {

/// Dense n x N measurement matrix.
///
/// Two factorizations are cached lazily and shared between copies:
///   - the Cholesky factor L of A*A^T, stored as W = L^{-1} A, so that the
///     projection onto {u : Au = y} is u - W^T (W u - L^{-1} y);
///   - the Cholesky factor K of I + A*A^T, stored as R = K^{-1} A, so that
///     (I + A^T A)^{-1} = I - R^T R.
/// Both are built under std::call_once, so concurrent readers are safe.
class SensingMatrix {
 public:
  explicit SensingMatrix(Matrix entries);

  const Matrix& entries() const noexcept { return entries_; }
  Eigen::Index rows() const noexcept { return entries_.rows(); }
  Eigen::Index cols() const noexcept { return entries_.cols(); }

  /// n <= N. Not enforced; callers may warn.
  bool underdetermined() const noexcept { return rows() <= cols(); }

  /// Cholesky factor of A*A^T. Throws factorization error when A*A^T is
  /// numerically singular.
  const Eigen::LLT<Matrix>& gram_llt() const;
  /// L^{-1} A  (n x N).
  const Matrix& whitened() const;

  /// K^{-1} A where K K^T = I + A*A^T  (n x N). Always well posed.
  const Matrix& regularized_whitened() const;

  /// Orthonormal basis of the row space of A, valid for any rank.
  /// `basis` is r x N with orthonormal rows and `to_coeffs` (r x n) maps a
  /// measurement vector y to c such that the minimum-norm least-squares
  /// solution of Au = y is basis^T c.
  struct RowSpace {
    Matrix basis;
    Matrix to_coeffs;
    bool full_row_rank = false;
  };
  const RowSpace& row_space() const;

 private:
  struct Cache;
  Matrix entries_;
  std::shared_ptr<Cache> cache_;
};

struct MeasurementSet {
  Vector y;
  double epsilon = 0.0;
};

/// i.i.d. N(0, 1/n) entries, filled row by row from a seeded Rng.
SensingMatrix gen_gaussian(Eigen::Index n, Eigen::Index N, std::uint64_t seed);

/// y = A x + e with e uniform on the sphere of radius noise_norm.
MeasurementSet measure(const SensingMatrix& A, const Vector& x, double noise_norm,
                       std::uint64_t seed);

}  // namespace rwl1
