#include "rwl1/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "rwl1/error.hpp"
#include "rwl1/rng.hpp"

namespace rwl1 {

struct SensingMatrix::Cache {
  std::once_flag gram_once;
  Eigen::LLT<Matrix> gram;
  Matrix whitened;
  bool gram_ok = false;

  std::once_flag regularized_once;
  Matrix regularized_whitened;

  std::once_flag row_space_once;
  RowSpace row_space;
};

SensingMatrix::SensingMatrix(Matrix entries)
    : entries_(std::move(entries)), cache_(std::make_shared<Cache>()) {
  require(entries_.rows() > 0 && entries_.cols() > 0, ErrorCode::kInvalidArgument,
          "sensing matrix must have positive dimensions");
  require(entries_.allFinite(), ErrorCode::kInvalidArgument,
          "sensing matrix contains non-finite entries");
}

const Eigen::LLT<Matrix>& SensingMatrix::gram_llt() const {
  std::call_once(cache_->gram_once, [this] {
    Matrix g = entries_ * entries_.transpose();
    cache_->gram.compute(g);
    const Vector d = cache_->gram.matrixLLT().diagonal();
    cache_->gram_ok = cache_->gram.info() == Eigen::Success && d.minCoeff() > 0.0 &&
                      d.minCoeff() > 1e-8 * d.maxCoeff();
    if (cache_->gram_ok) {
      cache_->whitened = cache_->gram.matrixL().solve(entries_);
    }
  });
  require(cache_->gram_ok, ErrorCode::kFactorization,
          "A*A^T is rank deficient (" + std::to_string(rows()) + "x" + std::to_string(cols()) +
              " matrix)");
  return cache_->gram;
}

const Matrix& SensingMatrix::whitened() const {
  gram_llt();
  return cache_->whitened;
}

const Matrix& SensingMatrix::regularized_whitened() const {
  std::call_once(cache_->regularized_once, [this] {
    Matrix g = entries_ * entries_.transpose();
    g.diagonal().array() += 1.0;
    Eigen::LLT<Matrix> llt(g);
    cache_->regularized_whitened = llt.matrixL().solve(entries_);
  });
  return cache_->regularized_whitened;
}

const SensingMatrix::RowSpace& SensingMatrix::row_space() const {
  std::call_once(cache_->row_space_once, [this] {
    RowSpace& rs = cache_->row_space;
    bool full = false;
    try {
      gram_llt();
      full = true;
    } catch (const Error&) {
    }
    if (full) {
      rs.basis = cache_->whitened;
      rs.to_coeffs = cache_->gram.matrixL().solve(Matrix::Identity(rows(), rows()));
      rs.full_row_rank = true;
      return;
    }
    // A = U S V^T; rows of V_r^T span the row space and A^+ y = V_r S_r^{-1} U_r^T y.
    Eigen::JacobiSVD<Matrix> svd(entries_, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? sv[0] * 1e-10 * static_cast<double>(std::max(rows(), cols())) : 0.0;
    Eigen::Index r = 0;
    while (r < sv.size() && sv[r] > cutoff) ++r;
    rs.basis = svd.matrixV().leftCols(r).transpose();
    rs.to_coeffs = sv.head(r).cwiseInverse().asDiagonal() * svd.matrixU().leftCols(r).transpose();
    rs.full_row_rank = false;
  });
  return cache_->row_space;
}

SensingMatrix gen_gaussian(Eigen::Index n, Eigen::Index N, std::uint64_t seed) {
  require(n >= 1 && N >= 1, ErrorCode::kInvalidArgument, "matrix dimensions must be positive");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Matrix a(n, N);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < N; ++j) a(i, j) = scale * rng.normal();
  return SensingMatrix(std::move(a));
}

MeasurementSet measure(const SensingMatrix& A, const Vector& x, double noise_norm,
                       std::uint64_t seed) {
  require(x.size() == A.cols(), ErrorCode::kInvalidArgument,
          "signal length " + std::to_string(x.size()) + " does not match matrix with " +
              std::to_string(A.cols()) + " columns");
  require(noise_norm >= 0.0 && std::isfinite(noise_norm), ErrorCode::kInvalidArgument,
          "noise norm must be finite and nonnegative");
  require_finite(x, "signal");

  MeasurementSet m;
  m.y = A.entries() * x;
  m.epsilon = noise_norm;
  if (noise_norm > 0.0) {
    Rng rng(seed);
    Vector e(A.rows());
    double norm = 0.0;
    do {
      for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = rng.normal();
      norm = e.norm();
    } while (norm == 0.0);
    m.y += (noise_norm / norm) * e;
  }
  return m;
}

}  // namespace rwl1
