#include "guided/solvers.hpp"

#include "guided/kernels.hpp"

#include <cmath>
#include <span>

namespace guided {

namespace {

thread_local std::uint64_t g_invocations = 0;

std::span<const double> cs(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<double> ms(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

double norm(const Vector& v) { return std::sqrt(kernels::dot(cs(v), cs(v))); }

Index effective_max_iter(const SolveOptions& opts, Index dim) {
  if (opts.max_iter < 0) throw Error(ErrorKind::InvalidArgument, "max_iter must be >= 0");
  return opts.max_iter > 0 ? opts.max_iter : std::max<Index>(1, 10 * dim);
}

void check_tol(const SolveOptions& opts) {
  if (!(opts.tol > 0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
}

}  // namespace

std::uint64_t solver_invocations() { return g_invocations; }
void reset_solver_invocations() { g_invocations = 0; }

SolveResult cg_solve(const LinearOperator& op, const Vector& b, const SolveOptions& opts) {
  check_tol(opts);
  ++g_invocations;
  const Index n = b.size();
  const Index max_iter = effective_max_iter(opts, n);
  if (!b.allFinite()) throw Error(ErrorKind::NumericalBreakdown, "right-hand side is not finite");

  SolveResult res;
  res.solution = Vector::Zero(n);
  const double bnorm = norm(b);
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }

  Vector& x = res.solution;
  Vector r = b;
  Vector p = r;
  double rr = bnorm * bnorm;
  double relres = 1.0;

  for (Index it = 1; it <= max_iter; ++it) {
    const Vector kp = op(p);
    require_same_dim(kp.size(), n, "cg_solve operator");
    const double pkp = kernels::dot(cs(p), cs(kp));
    if (!std::isfinite(pkp)) throw Error(ErrorKind::NumericalBreakdown, "non-finite <p, Kp>");
    if (pkp <= 1e-300) break;  // p is in the nullspace: nothing left to gain

    const double alpha = rr / pkp;
    kernels::axpy(alpha, cs(p), ms(x));
    kernels::axpy(-alpha, cs(kp), ms(r));
    const double rr_new = kernels::dot(cs(r), cs(r));
    if (!std::isfinite(rr_new)) throw Error(ErrorKind::NumericalBreakdown, "non-finite residual");

    relres = std::sqrt(rr_new) / bnorm;
    res.iterations = it;
    if (opts.record_history) res.residual_history.push_back(relres);
    if (opts.on_iterate) opts.on_iterate(it, x);
    if (relres <= opts.tol) {
      res.converged = true;
      break;
    }
    kernels::xpby(cs(r), rr_new / rr, ms(p));
    rr = rr_new;
  }
  res.final_relres = relres;
  if (relres <= opts.tol) res.converged = true;
  return res;
}

SolveResult pocs_solve(const Projector& s_perp, const Projector& t, const Vector& sf,
                       const SolveOptions& opts) {
  check_tol(opts);
  ++g_invocations;
  require_same_dim(s_perp.dim(), t.dim(), "pocs_solve");
  require_same_dim(sf.size(), t.dim(), "pocs_solve");
  const Index n = sf.size();
  const Index max_iter = effective_max_iter(opts, n);

  SolveResult res;
  res.solution = Vector::Zero(n);
  Vector& x = res.solution;

  auto step = [&](const Vector& cur) {
    Vector y = s_perp.apply(t.apply(sf + cur));
    if (!y.allFinite()) throw Error(ErrorKind::NumericalBreakdown, "non-finite POCS iterate");
    return y;
  };

  // b = -S⊥T⊥sf = S⊥T sf = x_1.
  Vector next = step(x);
  const double bnorm = norm(next);
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }

  double relres = 1.0;
  for (Index it = 1; it <= max_iter; ++it) {
    x = next;
    res.iterations = it;
    if (opts.on_iterate) opts.on_iterate(it, x);
    next = step(x);
    Vector diff = next - x;
    relres = norm(diff) / bnorm;
    if (opts.record_history) res.residual_history.push_back(relres);
    if (relres <= opts.tol) {
      res.converged = true;
      break;
    }
  }
  res.final_relres = relres;
  return res;
}

double convergence_bound(SolverMethod method, double c, Index m) {
  if (m < 0) throw Error(ErrorKind::OutOfRange, "iteration count must be >= 0");
  if (!(c >= 0.0) || c > 1.0 + 1e-15) {
    throw Error(ErrorKind::OutOfRange, "cos(theta_max) must lie in (0, 1]");
  }
  if (c == 0.0) throw Error(ErrorKind::DivergentBound, "cos(theta_max) = 0, no contraction");
  c = std::min(c, 1.0);
  const auto md = static_cast<double>(m);
  if (method == SolverMethod::POCS) return std::pow(1.0 - c * c, md);
  return 2.0 * std::pow((1.0 - c) / (1.0 + c), md);
}

}  // namespace guided
