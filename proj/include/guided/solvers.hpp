#pragma once

#include "guided/common.hpp"
#include "guided/projector.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace guided {

using LinearOperator = std::function<Vector(const Vector&)>;

/// K = S⊥ T⊥ acting on range(S⊥). Built from S and T; holds S⊥ as its domain.
struct RestrictedOperator {
  Projector domain;  // S⊥
  Projector t_perp;

  RestrictedOperator(const Projector& s, const Projector& t)
      : domain(s.complement()), t_perp(t.complement()) {
    require_same_dim(s.dim(), t.dim(), "RestrictedOperator");
  }

  Vector apply(const Vector& v) const { return domain.apply(t_perp.apply(v)); }
  Vector operator()(const Vector& v) const { return apply(v); }
  LinearOperator as_function() const {
    return [op = *this](const Vector& v) { return op.apply(v); };
  }
};

struct SolveOptions {
  double tol = 1e-12;
  Index max_iter = 0;  // 0: 10 * dim
  bool record_history = false;
  // Called with (m, x_m) after every update. Used by diagnostics and tests.
  std::function<void(Index, const Vector&)> on_iterate;
};

struct SolveResult {
  Vector solution;
  Index iterations = 0;
  std::vector<double> residual_history;  // relative residuals, one per iterate
  bool converged = false;
  double final_relres = 0.0;
};

/// Conjugate gradient for a self-adjoint PSD operator, x0 = 0. When the
/// operator is singular and b lies in its range the iterates never leave the
/// Krylov space of b, so the result is the minimum-norm solution.
SolveResult cg_solve(const LinearOperator& op, const Vector& b, const SolveOptions& opts = {});

/// x_m = S⊥ T (sf + x_{m-1}), x_0 = 0. This is Richardson's iteration for
/// K x = -S⊥ T⊥ sf; the residual of x_m is x_{m+1} - x_m.
SolveResult pocs_solve(const Projector& s_perp, const Projector& t, const Vector& sf,
                       const SolveOptions& opts = {});

enum class SolverMethod { CG, POCS };

/// POCS: (1 - c^2)^m. CG: 2 ((1 - c)/(1 + c))^m. c = cos(theta_max).
/// c == 0 throws DivergentBound.
double convergence_bound(SolverMethod method, double cos_theta_max, Index m);

/// Number of cg_solve / pocs_solve calls made by this thread.
std::uint64_t solver_invocations();
void reset_solver_invocations();

}  // namespace guided
