#pragma once

#include "rwl1/sensing.hpp"
#include "rwl1/sigcore.hpp"

namespace rwl1 {

/// Nonnegative, finite per-coordinate weights for the weighted l1 norm.
class WeightVector {
 public:
  explicit WeightVector(Vector w);
  static WeightVector ones(Eigen::Index n) { return WeightVector(Vector::Ones(n)); }

  const Vector& values() const noexcept { return w_; }
  Eigen::Index size() const noexcept { return w_.size(); }
  double operator[](Eigen::Index i) const { return w_[i]; }

 private:
  Vector w_;
};

/// sum_i w_i |u_i|
double weighted_l1(const Vector& u, const WeightVector& w);

struct SolverConfig {
  int max_iters = 2000;
  double abs_tol = 1e-7;
  double rel_tol = 1e-5;
  double penalty = 1.0;
  bool adaptive_penalty = true;
  // Over-relaxation factor in (0, 2); 1 is plain ADMM.
  double relaxation = 1.6;
  // Every `polish_interval` iterations the current support is polished and
  // checked against an explicit dual certificate; a certified point ends
  // the solve early. 0 disables the periodic check (a final polish still runs).
  int polish_interval = 25;
  // Relative slack allowed in the dual certificate |a_i^T lambda| <= w_i.
  double certificate_tol = 1e-9;
};

struct SolverResult {
  Vector solution;
  double objective = 0.0;
  // ADMM residuals at exit, or for a certified point, the feasibility excess
  // and the dual-certificate violation.
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double primal_tolerance = 0.0;
  double dual_tolerance = 0.0;
  double feasibility_gap = 0.0;  // max(0, ||A x - y|| - eps)
  int iterations = 0;
  bool converged = false;
  bool certified = false;  // optimality proven by a dual certificate
};

/// minimize ||u||_{1,w} subject to ||A u - y||_2 <= eps.
///
/// Zero-weight columns are eliminated and the rest rescaled by 1/w, giving
/// an equivalent unweighted problem. That problem is solved by operator
/// splitting (ADMM). For eps == 0 the constraint is handled by
/// projection onto {u : A u = y}; for eps > 0 an auxiliary residual variable
/// is projected onto the eps-ball around y. The returned point is always
/// repaired to be feasible and is replaced by a support-polished point
/// whenever that is feasible and no worse.
///
/// Throws infeasible if no u satisfies the constraint (possible only when
/// A lacks full row rank). Hitting max_iters is reported via
/// `converged == false`.
SolverResult solve(const SensingMatrix& A, const MeasurementSet& m, const WeightVector& w,
                   const SolverConfig& cfg = {});

/// sign(v_i) * max(|v_i| - tau * w_i, 0)
Vector prox_weighted_l1(const Vector& v, const WeightVector& w, double tau);

/// Euclidean projection onto {z : ||z - center|| <= radius}.
Vector project_l2_ball(const Vector& v, const Vector& center, double radius);

/// u - A^T (A A^T)^{-1} (A u - y). Throws factorization if A A^T is singular.
Vector project_affine(const Vector& u, const SensingMatrix& A, const Vector& y);

}  // namespace rwl1
