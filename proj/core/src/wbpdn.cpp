#include "rwl1/wbpdn.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rwl1/error.hpp"

namespace rwl1 {

WeightVector::WeightVector(Vector w) : w_(std::move(w)) {
  require(w_.allFinite(), ErrorCode::kInvalidArgument, "weights must be finite");
  require(w_.size() == 0 || w_.minCoeff() >= 0.0, ErrorCode::kInvalidArgument,
          "weights must be nonnegative");
}

double weighted_l1(const Vector& u, const WeightVector& w) {
  require(u.size() == w.size(), ErrorCode::kInvalidArgument, "weight/vector length mismatch");
  return w.values().cwiseProduct(u.cwiseAbs()).sum();
}

namespace {

Vector soft_threshold(const Vector& v, const Vector& w, double tau) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]) - tau * w[i];
    out[i] = mag > 0.0 ? std::copysign(mag, v[i]) : 0.0;
  }
  return out;
}

Vector ball(const Vector& v, const Vector& center, double radius) {
  Vector d = v - center;
  const double norm = d.norm();
  if (norm <= radius) return v;
  if (radius == 0.0) return center;
  return center + (radius / norm) * d;
}

/// Everything the iterations share.
struct Problem {
  const SensingMatrix& A;
  const Vector& y;
  double eps;
  Vector w;
  double y_norm;
};

struct Candidate {
  Vector x;
  double objective = 0.0;
  bool certified = false;
  double violation = 0.0;  // max_i (|a_i^T lambda| - w_i) over the complement
};

std::vector<std::size_t> nonzeros(const Vector& z) {
  std::vector<std::size_t> s;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (z[i] != 0.0) s.push_back(static_cast<std::size_t>(i));
  return s;
}

Matrix columns(const Matrix& a, const std::vector<std::size_t>& s) {
  Matrix b(a.rows(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j)
    b.col(static_cast<Eigen::Index>(j)) = a.col(static_cast<Eigen::Index>(s[j]));
  return b;
}

double certificate_violation(const Problem& p, const Vector& lambda,
                             const std::vector<std::size_t>& support) {
  const Vector g = p.A.entries().transpose() * lambda;
  std::vector<bool> on(static_cast<std::size_t>(g.size()), false);
  for (auto i : support) on[i] = true;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (on[static_cast<std::size_t>(i)]) continue;
    worst = std::max(worst, std::abs(g[i]) - p.w[i]);
  }
  return worst;
}

/// Re-solve exactly on the support of `z`. For eps == 0 this is the basic
/// solution A_S x_S = y; for eps > 0 it is the minimizer of c^T x_S on
/// ||A_S x_S - y|| <= eps with c = w_S .* sign(z_S), which has a closed form.
/// `lambda_hint` (eps == 0 only) seeds the dual certificate.
std::optional<Candidate> polish(const Problem& p, const Vector& z, const Vector* lambda_hint,
                                double cert_tol) {
  const auto support = nonzeros(z);
  const auto n = p.A.rows();
  if (support.empty() || static_cast<Eigen::Index>(support.size()) > n) return std::nullopt;

  const Matrix B = columns(p.A.entries(), support);
  Eigen::ColPivHouseholderQR<Matrix> qr(B);
  if (qr.rank() < B.cols()) return std::nullopt;
  const Vector x_ls = qr.solve(p.y);
  const Vector r_ls = B * x_ls - p.y;
  const double feas_tol = 1e-10 * (1.0 + p.y_norm);

  Vector xs;
  Vector lambda;
  bool have_lambda = false;

  Vector c(B.cols());
  for (Eigen::Index j = 0; j < B.cols(); ++j) {
    const auto i = static_cast<Eigen::Index>(support[static_cast<std::size_t>(j)]);
    c[j] = p.w[i] * (z[i] > 0.0 ? 1.0 : -1.0);
  }
  const Eigen::LLT<Matrix> gram(B.transpose() * B);

  if (p.eps == 0.0) {
    if (r_ls.norm() > feas_tol) return std::nullopt;
    xs = x_ls;
    for (Eigen::Index j = 0; j < xs.size(); ++j) {
      const auto i = static_cast<Eigen::Index>(support[static_cast<std::size_t>(j)]);
      c[j] = xs[j] == 0.0 ? 0.0 : p.w[i] * (xs[j] > 0.0 ? 1.0 : -1.0);
    }
    // Move the hint onto {lambda : B^T lambda = c} with the smallest step.
    const Vector base = lambda_hint != nullptr ? *lambda_hint : Vector::Zero(n);
    lambda = base + B * gram.solve(c - B.transpose() * base);
    have_lambda = true;
  } else {
    const double rl = r_ls.norm();
    if (rl > p.eps) return std::nullopt;
    if (c.isZero(0.0)) {
      xs = x_ls;
      lambda = Vector::Zero(n);
      have_lambda = true;
    } else {
      const Vector gc = gram.solve(c);
      const double dn = (B * gc).norm();
      const double slack = p.eps * p.eps - rl * rl;
      const double mu = std::sqrt(std::max(slack, 0.0)) / dn;
      xs = x_ls - mu * gc;
      bool signs_ok = mu > 0.0;
      for (Eigen::Index j = 0; j < xs.size() && signs_ok; ++j) {
        const auto i = static_cast<Eigen::Index>(support[static_cast<std::size_t>(j)]);
        if (p.w[i] > 0.0 && (xs[j] > 0.0) != (z[i] > 0.0)) signs_ok = false;
      }
      if (signs_ok) {
        lambda = -(B * xs - p.y) / mu;
        have_lambda = true;
      }
    }
  }

  Candidate out;
  out.x = Vector::Zero(p.A.cols());
  for (std::size_t j = 0; j < support.size(); ++j)
    out.x[static_cast<Eigen::Index>(support[j])] = xs[static_cast<Eigen::Index>(j)];
  out.objective = p.w.cwiseProduct(out.x.cwiseAbs()).sum();
  if (!out.x.allFinite()) return std::nullopt;
  if (have_lambda) {
    out.violation = certificate_violation(p, lambda, support);
    out.certified = out.violation <= cert_tol;
  }
  return out;
}

/// Map any point to one satisfying ||A x - y|| <= eps by a minimum-norm
/// correction in the row space of A.
Vector repair(const Problem& p, const Vector& z) {
  const auto& rs = p.A.row_space();
  const Vector az = p.A.entries() * z;
  const Vector target = ball(az, p.y, p.eps);
  return z - rs.basis.transpose() * (rs.basis * z - rs.to_coeffs * target);
}

struct PenaltyState {
  double rho;
  int adaptations = 0;
};

/// Residual balancing; returns the factor the scaled duals must be multiplied by.
double adapt(PenaltyState& st, double primal, double dual, bool enabled) {
  constexpr double kRatio = 10.0;
  constexpr double kStep = 2.0;
  constexpr int kMaxAdaptations = 100;
  if (!enabled || st.adaptations >= kMaxAdaptations) return 1.0;
  if (primal > kRatio * dual) {
    st.rho *= kStep;
    ++st.adaptations;
    return 1.0 / kStep;
  }
  if (dual > kRatio * primal) {
    st.rho /= kStep;
    ++st.adaptations;
    return kStep;
  }
  return 1.0;
}

struct AdmmOutcome {
  Vector z;
  Vector lambda;  // dual estimate for A u = y (eps == 0, full row rank only)
  bool has_lambda = false;
  double primal = 0.0;
  double dual = 0.0;
  double primal_tol = 0.0;
  double dual_tol = 0.0;
  int iterations = 0;
  bool converged = false;
  std::optional<Candidate> certified;
};

AdmmOutcome admm_equality(const Problem& p, const SolverConfig& cfg) {
  const auto& rs = p.A.row_space();
  const Matrix& W = rs.basis;
  const Vector c = rs.to_coeffs * p.y;
  const auto N = p.A.cols();
  const double sqrt_n = std::sqrt(static_cast<double>(N));

  const double alpha = cfg.relaxation;
  auto project = [&](const Vector& v) -> Vector { return v - W.transpose() * (W * v - c); };
  auto dual_estimate = [&](const Vector& u, double rho) -> Vector {
    // lambda = (A A^T)^{-1} A (rho u) = L^{-T} W (rho u)
    return p.A.gram_llt().matrixU().solve(W * (rho * u));
  };

  AdmmOutcome out;
  Vector x = Vector::Zero(N);
  Vector z = Vector::Zero(N);
  Vector u = Vector::Zero(N);
  PenaltyState pen{cfg.penalty};

  for (int it = 1; it <= cfg.max_iters; ++it) {
    x = project(z - u);
    const Vector z_old = z;
    const Vector x_hat = alpha * x + (1.0 - alpha) * z_old;
    z = soft_threshold(x_hat + u, p.w, 1.0 / pen.rho);
    u += x_hat - z;

    out.iterations = it;
    out.primal = (x - z).norm();
    out.dual = pen.rho * (z - z_old).norm();
    out.primal_tol = sqrt_n * cfg.abs_tol + cfg.rel_tol * std::max(x.norm(), z.norm());
    out.dual_tol = sqrt_n * cfg.abs_tol + cfg.rel_tol * pen.rho * u.norm();
    if (out.primal <= out.primal_tol && out.dual <= out.dual_tol) {
      out.converged = true;
      break;
    }
    if (cfg.polish_interval > 0 && it % cfg.polish_interval == 0) {
      std::optional<Vector> hint;
      if (rs.full_row_rank) hint = dual_estimate(u, pen.rho);
      auto cand = polish(p, z, hint ? &*hint : nullptr, cfg.certificate_tol);
      if (cand && cand->certified) {
        out.certified = std::move(cand);
        break;
      }
    }
    u *= adapt(pen, out.primal, out.dual, cfg.adaptive_penalty);
  }
  out.z = z;
  if (rs.full_row_rank) {
    out.lambda = dual_estimate(u, pen.rho);
    out.has_lambda = true;
  }
  return out;
}

AdmmOutcome admm_ball(const Problem& p, const SolverConfig& cfg) {
  const Matrix& A = p.A.entries();
  const Matrix& R = p.A.regularized_whitened();
  const auto N = p.A.cols();
  const auto n = p.A.rows();
  const double sqrt_n = std::sqrt(static_cast<double>(N));
  const double sqrt_nn = std::sqrt(static_cast<double>(N + n));
  const double alpha = cfg.relaxation;

  AdmmOutcome out;
  Vector x = Vector::Zero(N);
  Vector z = Vector::Zero(N);
  Vector u = Vector::Zero(N);
  Vector r = ball(Vector::Zero(n), p.y, p.eps);
  Vector v = Vector::Zero(n);
  PenaltyState pen{cfg.penalty};

  for (int it = 1; it <= cfg.max_iters; ++it) {
    // (I + A^T A)^{-1} = I - R^T R
    const Vector rhs = (z - u) + A.transpose() * (r - v);
    x = rhs - R.transpose() * (R * rhs);
    const Vector ax = A * x;
    const Vector z_old = z;
    const Vector r_old = r;
    const Vector x_hat = alpha * x + (1.0 - alpha) * z_old;
    const Vector ax_hat = alpha * ax + (1.0 - alpha) * r_old;
    z = soft_threshold(x_hat + u, p.w, 1.0 / pen.rho);
    r = ball(ax_hat + v, p.y, p.eps);
    u += x_hat - z;
    v += ax_hat - r;

    out.iterations = it;
    out.primal = std::sqrt((x - z).squaredNorm() + (ax - r).squaredNorm());
    out.dual = pen.rho * ((z - z_old) + A.transpose() * (r - r_old)).norm();
    out.primal_tol =
        sqrt_nn * cfg.abs_tol +
        cfg.rel_tol * std::sqrt(std::max(x.squaredNorm() + ax.squaredNorm(),
                                         z.squaredNorm() + r.squaredNorm()));
    out.dual_tol = sqrt_n * cfg.abs_tol + cfg.rel_tol * pen.rho * (u + A.transpose() * v).norm();
    if (out.primal <= out.primal_tol && out.dual <= out.dual_tol) {
      out.converged = true;
      break;
    }
    if (cfg.polish_interval > 0 && it % cfg.polish_interval == 0) {
      auto cand = polish(p, z, nullptr, cfg.certificate_tol);
      if (cand && cand->certified) {
        out.certified = std::move(cand);
        break;
      }
    }
    const double f = adapt(pen, out.primal, out.dual, cfg.adaptive_penalty);
    u *= f;
    v *= f;
  }
  out.z = z;
  return out;
}

}  // namespace

Vector prox_weighted_l1(const Vector& v, const WeightVector& w, double tau) {
  require(v.size() == w.size(), ErrorCode::kInvalidArgument, "weight/vector length mismatch");
  require(tau >= 0.0, ErrorCode::kInvalidArgument, "prox step must be nonnegative");
  return soft_threshold(v, w.values(), tau);
}

Vector project_l2_ball(const Vector& v, const Vector& center, double radius) {
  require(v.size() == center.size(), ErrorCode::kInvalidArgument, "ball center length mismatch");
  require(radius >= 0.0, ErrorCode::kInvalidArgument, "ball radius must be nonnegative");
  return ball(v, center, radius);
}

Vector project_affine(const Vector& u, const SensingMatrix& A, const Vector& y) {
  require(u.size() == A.cols() && y.size() == A.rows(), ErrorCode::kInvalidArgument,
          "dimension mismatch in affine projection");
  const auto& llt = A.gram_llt();
  const Matrix& W = A.whitened();
  return u - W.transpose() * (W * u - llt.matrixL().solve(y));
}

namespace {

/// The weighted problem rewritten as an unweighted one. Zero-weight columns F
/// are eliminated by projecting onto the orthogonal complement of range(A_F);
/// the remaining columns G are scaled by 1/w so the objective becomes ||v||_1
/// with u_G = v ./ w_G and u_F = A_F^+ (y - A_G u_G).
struct Reduction {
  std::vector<std::size_t> free;      // F
  std::vector<std::size_t> weighted;  // G
  Vector inv_w;                       // 1 / w_G
  Matrix complement;                  // n x m orthonormal basis of range(A_F)^perp
  std::optional<Eigen::ColPivHouseholderQR<Matrix>> free_qr;
  Matrix reduced;  // complement^T A_G diag(inv_w)
  Vector rhs;      // complement^T y
};

Reduction reduce(const SensingMatrix& A, const Vector& y, const WeightVector& w) {
  Reduction r;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    (w[i] == 0.0 ? r.free : r.weighted).push_back(static_cast<std::size_t>(i));

  r.inv_w.resize(static_cast<Eigen::Index>(r.weighted.size()));
  for (std::size_t j = 0; j < r.weighted.size(); ++j)
    r.inv_w[static_cast<Eigen::Index>(j)] = 1.0 / w[static_cast<Eigen::Index>(r.weighted[j])];
  Matrix scaled = columns(A.entries(), r.weighted) * r.inv_w.asDiagonal();

  if (r.free.empty()) {
    r.reduced = std::move(scaled);
    r.rhs = y;
    return r;
  }
  r.free_qr.emplace(columns(A.entries(), r.free));
  const auto n = A.rows();
  const auto rank = r.free_qr->rank();
  const Matrix q = r.free_qr->householderQ() * Matrix::Identity(n, n);
  r.complement = q.rightCols(n - rank);
  r.reduced = r.complement.transpose() * scaled;
  r.rhs = r.complement.transpose() * y;
  return r;
}

Vector expand(const Reduction& r, const SensingMatrix& A, const Vector& y, const Vector& v) {
  Vector u = Vector::Zero(A.cols());
  Vector ug(static_cast<Eigen::Index>(r.weighted.size()));
  for (std::size_t j = 0; j < r.weighted.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    ug[jj] = v[jj] * r.inv_w[jj];
    u[static_cast<Eigen::Index>(r.weighted[j])] = ug[jj];
  }
  if (r.free_qr) {
    const Vector rest = y - columns(A.entries(), r.weighted) * ug;
    const Vector uf = r.free_qr->solve(rest);
    for (std::size_t j = 0; j < r.free.size(); ++j)
      u[static_cast<Eigen::Index>(r.free[j])] = uf[static_cast<Eigen::Index>(j)];
  }
  return u;
}

}  // namespace

SolverResult solve(const SensingMatrix& A, const MeasurementSet& m, const WeightVector& w,
                   const SolverConfig& cfg) {
  require(m.y.size() == A.rows(), ErrorCode::kInvalidArgument,
          "measurement length " + std::to_string(m.y.size()) + " does not match matrix with " +
              std::to_string(A.rows()) + " rows");
  require(w.size() == A.cols(), ErrorCode::kInvalidArgument,
          "weight length " + std::to_string(w.size()) + " does not match matrix with " +
              std::to_string(A.cols()) + " columns");
  require(m.epsilon >= 0.0 && std::isfinite(m.epsilon), ErrorCode::kInvalidArgument,
          "epsilon must be finite and nonnegative");
  require(cfg.max_iters >= 1 && cfg.abs_tol > 0.0 && cfg.rel_tol > 0.0 && cfg.penalty > 0.0 &&
              cfg.relaxation > 0.0 && cfg.relaxation < 2.0,
          ErrorCode::kInvalidArgument, "invalid solver configuration");
  require_finite(m.y, "measurements");

  const double y_norm = m.y.norm();
  SolverResult res;
  res.primal_tolerance = cfg.abs_tol;
  res.dual_tolerance = cfg.abs_tol;

  auto finish = [&](Vector u) {
    res.solution = std::move(u);
    res.objective = weighted_l1(res.solution, w);
    res.feasibility_gap =
        std::max(0.0, (A.entries() * res.solution - m.y).norm() - m.epsilon);
    if (res.feasibility_gap > cfg.abs_tol * (1.0 + y_norm)) res.converged = false;
    return res;
  };

  if (y_norm <= m.epsilon) {
    res.converged = true;
    res.certified = true;
    return finish(Vector::Zero(A.cols()));
  }

  const Reduction red = reduce(A, m.y, w);
  const double b_norm = red.rhs.norm();
  if (red.reduced.rows() == 0 || red.reduced.cols() == 0 || b_norm <= m.epsilon) {
    // Zero-weight columns alone can meet the constraint: objective 0 is optimal.
    require(b_norm <= m.epsilon + 1e-9 * (1.0 + y_norm), ErrorCode::kInfeasible,
            "no point satisfies ||Au - y|| <= eps (zero-weight columns leave a residual of " +
                std::to_string(b_norm) + ")");
    res.converged = true;
    res.certified = true;
    return finish(expand(red, A, m.y, Vector::Zero(red.reduced.cols())));
  }

  const SensingMatrix M(red.reduced);
  {
    const auto& rs = M.row_space();
    if (!rs.full_row_rank) {
      const Vector ls = rs.basis.transpose() * (rs.to_coeffs * red.rhs);
      const double dist = (M.entries() * ls - red.rhs).norm();
      require(dist <= m.epsilon + 1e-9 * (1.0 + y_norm), ErrorCode::kInfeasible,
              "no point satisfies ||Au - y|| <= eps (distance of y from range(A) is " +
                  std::to_string(dist) + ")");
    }
  }

  Problem p{M, red.rhs, m.epsilon, Vector::Ones(M.cols()), b_norm};
  AdmmOutcome run = m.epsilon == 0.0 ? admm_equality(p, cfg) : admm_ball(p, cfg);
  res.iterations = run.iterations;

  std::optional<Candidate> best;
  if (run.certified) {
    best = std::move(run.certified);
  } else {
    Candidate repaired;
    repaired.x = repair(p, run.z);
    repaired.objective = repaired.x.lpNorm<1>();
    best = std::move(repaired);
    auto polished = polish(p, run.z, run.has_lambda ? &run.lambda : nullptr, cfg.certificate_tol);
    if (polished && (polished->certified ||
                     polished->objective <= best->objective * (1.0 + 1e-12))) {
      best = std::move(polished);
    }
  }

  res.certified = best->certified;
  if (res.certified) {
    res.primal_residual = std::max(0.0, (M.entries() * best->x - red.rhs).norm() - m.epsilon);
    res.dual_residual = best->violation;
    res.dual_tolerance = cfg.certificate_tol;
    res.converged = true;
  } else {
    res.primal_residual = run.primal;
    res.dual_residual = run.dual;
    res.primal_tolerance = run.primal_tol;
    res.dual_tolerance = run.dual_tol;
    res.converged = run.converged;
  }
  return finish(expand(red, A, m.y, best->x));
}

}  // namespace rwl1
