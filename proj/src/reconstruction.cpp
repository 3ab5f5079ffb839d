#include "guided/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace guided {

ReconstructionProblem ReconstructionProblem::from_signal(const Projector& s, const Projector& t,
                                                         const Vector& f) {
  require_same_dim(f.size(), s.dim(), "from_signal");
  return ReconstructionProblem{s, t, s.apply(f), std::nullopt};
}

void ReconstructionProblem::validate() const {
  require_same_dim(s.dim(), t.dim(), "ReconstructionProblem");
  require_same_dim(sf.size(), s.dim(), "ReconstructionProblem sample");
  if (!sf.allFinite()) throw Error(ErrorKind::InvalidArgument, "sample has non-finite entries");
  const double off = (sf - s.apply(sf)).norm();
  if (off > kReconTol * std::max(1.0, sf.norm())) {
    throw Error(ErrorKind::InvalidArgument, "sample is not in range(S)");
  }
  if (noise_norm && !(*noise_norm >= 0.0)) {
    throw Error(ErrorKind::OutOfRange, "noise norm must be >= 0");
  }
}

namespace {

// Right-hand sides built from projections of sf that vanish in exact
// arithmetic leave rounding residue, which CG would amplify along the
// nullspace of the operator. The operators here have norm <= 1.
SolveResult solve_projected(const LinearOperator& op, Vector b, double scale,
                            const SolveOptions& opts) {
  if (b.norm() <= 64 * std::numeric_limits<double>::epsilon() * scale) b.setZero();
  return cg_solve(op, b, opts);
}

std::optional<AngleReport> geometry_of(const ReconstructionProblem& p) {
  if (p.s.dim() > kGeometryMaxDim) return std::nullopt;
  const SubspaceBasis sb = SubspaceBasis::range_of(p.s);
  const SubspaceBasis tb = SubspaceBasis::range_of(p.t);
  if (sb.empty() || tb.empty()) return std::nullopt;
  return principal_angles(sb, tb);
}

}  // namespace

ReconstructionResult consistent_reconstruct(const ReconstructionProblem& p,
                                            const SolveOptions& opts) {
  p.validate();
  const RestrictedOperator k(p.s, p.t);
  const Vector b = -k.apply(p.sf);

  ReconstructionResult res;
  res.solver = solve_projected(k.as_function(), b, p.sf.norm(), opts);
  res.f_consistent = res.solver.solution + p.sf;
  res.t_guided = p.t.apply(res.f_consistent);
  res.gap_distance = (res.f_consistent - res.t_guided).norm();
  res.geometry = geometry_of(p);
  if (res.geometry && res.geometry->cos_theta_max < kAngleTol) {
    res.warnings.push_back("IllPosed: cos(theta_max) is numerically zero");
  }
  if (!res.solver.converged) {
    res.warnings.push_back("CG stopped before reaching the tolerance");
  }
  return res;
}

GuidedResult guided_reconstruct(const ReconstructionProblem& p, GuidedImpl impl,
                                const SolveOptions& opts, const ReconstructionResult* prior) {
  p.validate();
  GuidedResult out;
  switch (impl) {
    case GuidedImpl::G1Frame: {
      if (!p.t.has_frame()) {
        throw Error(ErrorKind::MissingFrame, "G1 needs a frame for T");
      }
      const Projector& t = p.t;
      const Projector& s = p.s;
      auto op = [&t, &s](const Vector& y) { return t.analyze(s.apply(t.synthesize(y))); };
      out.solve = cg_solve(op, t.analyze(p.sf), opts);
      out.t = t.synthesize(out.solve.solution);
      break;
    }
    case GuidedImpl::G2Projector: {
      const Projector& t = p.t;
      const Projector& s = p.s;
      auto op = [&t, &s](const Vector& v) { return t.apply(s.apply(t.apply(v))); };
      out.solve = solve_projected(op, t.apply(p.sf), p.sf.norm(), opts);
      out.t = out.solve.solution;
      break;
    }
    case GuidedImpl::G3FromConsistent: {
      if (prior == nullptr) {
        throw Error(ErrorKind::MissingPrerequisite, "G3 needs a consistent reconstruction");
      }
      require_same_dim(prior->f_consistent.size(), p.t.dim(), "G3 prior");
      out.t = p.t.apply(prior->f_consistent);
      out.solve.solution = out.t;
      out.solve.converged = prior->solver.converged;
      break;
    }
  }
  return out;
}

Vector blend(const Vector& f_c, const Vector& t_hat, double alpha) {
  require_same_dim(f_c.size(), t_hat.size(), "blend");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "alpha must lie in [0,1]");
  }
  if (alpha == 1.0) return f_c;
  if (alpha == 0.0) return t_hat;
  return alpha * f_c + (1.0 - alpha) * t_hat;
}

RegularizedResult regularized_reconstruct(const ReconstructionProblem& p, double rho,
                                          const SolveOptions& opts) {
  p.validate();
  if (!(rho > 0.0) || !std::isfinite(rho)) throw Error(ErrorKind::OutOfRange, "rho must be > 0");
  const Projector& s = p.s;
  const Projector t_perp = p.t.complement();
  auto op = [&s, &t_perp, rho](const Vector& v) -> Vector {
    return s.apply(v) + rho * t_perp.apply(v);
  };
  RegularizedResult out;
  out.solve = cg_solve(op, p.sf, opts);
  out.f = out.solve.solution;
  if (p.s.dim() <= kGeometryMaxDim) {
    const SubspaceBasis sperp = SubspaceBasis::range_of(p.s.complement());
    const SubspaceBasis tb = SubspaceBasis::range_of(p.t);
    out.singular = !intersection_basis(sperp, tb).empty();
  }
  return out;
}

AlphaSelection select_alpha(const ReconstructionProblem& p, const Vector& f_c) {
  if (!p.noise_norm) throw Error(ErrorKind::MissingPrerequisite, "noise norm is not known");
  require_same_dim(f_c.size(), p.t.dim(), "select_alpha");
  const double n = *p.noise_norm;
  if (n < 0) throw Error(ErrorKind::OutOfRange, "noise norm must be >= 0");
  AlphaSelection sel;
  sel.distance = (f_c - p.t.apply(f_c)).norm();
  if (sel.distance <= 1e-14 * std::max(1.0, f_c.norm())) {
    sel.intersection_exists = true;
    sel.alpha = 1.0;
    sel.alpha_squared = 1.0;
    return sel;
  }
  const double ratio = n / sel.distance;
  sel.alpha = std::clamp(1.0 - ratio, 0.0, 1.0);
  sel.alpha_squared = std::clamp(1.0 - ratio * ratio, 0.0, 1.0);
  return sel;
}

Vector minimax_regret(const ReconstructionProblem& p) {
  p.validate();
  return p.t.apply(p.sf);
}

SubspaceReconstruction reconstruct_in_subspace(const ReconstructionProblem& p,
                                               const SubspaceBasis& m, const SolveOptions& opts) {
  p.validate();
  require_same_dim(m.dim(), p.s.dim(), "reconstruct_in_subspace");
  const Projector s_perp = p.s.complement();
  const SubspaceBasis n = intersection_basis(SubspaceBasis::range_of(s_perp),
                                             SubspaceBasis::range_of(p.t));
  // M + (S⊥∩T) = H and M ∩ (S⊥∩T) = {0}.
  if (m.k() + n.k() != m.dim() || !intersection_basis(m, n).empty()) {
    throw Error(ErrorKind::NotComplementary,
                "M (dim " + std::to_string(m.k()) + ") is not complementary to S⊥∩T (dim " +
                    std::to_string(n.k()) + ")");
  }
  const Projector f = m.empty() ? Projector::coordinate_mask(m.dim(), {})
                                : anderson_duffin(m.projector(), s_perp);
  const Projector t_perp = p.t.complement();
  auto op = [&f, &t_perp](const Vector& v) { return f.apply(t_perp.apply(f.apply(v))); };
  SubspaceReconstruction out;
  out.solve = solve_projected(op, -f.apply(t_perp.apply(p.sf)), p.sf.norm(), opts);
  out.x = out.solve.solution;
  out.f = out.x + p.sf;
  return out;
}

bool BoundReport::all_hold(double rel_tol, double abs_tol) const {
  auto ok = [&](double measured, double bound) {
    return measured <= bound * (1.0 + rel_tol) + abs_tol;
  };
  return ok(x_norm, cos_bound) && ok(x_norm, tan_bound) && ok(fn_norm_sq, fnog_bound) &&
         ok(err_measured, err_bound_cos2) && ok(err_measured, err_bound_cos1);
}

BoundReport evaluate_bounds(const ReconstructionProblem& p, const Vector& f_true,
                            const ReconstructionResult& result, const HalmosDecomposition& h) {
  require_same_dim(f_true.size(), p.s.dim(), "evaluate_bounds");
  double c = 0.0;
  if (result.geometry) {
    c = result.geometry->cos_theta_max;
  } else {
    c = principal_angles(SubspaceBasis::range_of(p.s), SubspaceBasis::range_of(p.t))
            .cos_theta_max;
  }
  if (!(c > 0.0)) throw Error(ErrorKind::IllPosed, "cos(theta_max) = 0");

  const Projector& s = p.s;
  const Projector s_perp = s.complement();
  const Projector t_perp = p.t.complement();
  const Vector& f = f_true;
  const Vector p0f = h.p0.apply(f);
  const Vector x = result.f_consistent - p.sf;

  BoundReport r;
  r.cos_theta_max = c;
  const double tan_t = std::sqrt(std::max(0.0, 1.0 - c * c)) / c;
  r.x_norm = x.norm();
  r.cos_bound = t_perp.apply(s.apply(p0f)).norm() / c;
  r.tan_bound = s.apply(p0f).norm() * tan_t;
  r.fn_norm_sq = result.f_consistent.squaredNorm();
  const double stsf = s_perp.apply(t_perp.apply(p.sf)).norm();
  r.fnog_bound = p.sf.squaredNorm() + stsf * stsf / (c * c * c * c);

  const Vector e = x - s_perp.apply(p0f);
  r.err_measured = e.norm();
  r.err_bound_cos2 = s_perp.apply(t_perp.apply(p0f)).norm() / (c * c);
  r.err_bound_cos1 = t_perp.apply(p0f).norm() / c;

  const Vector diff = result.f_consistent - f;
  const Vector m_diff = diff - h.p_sperp_t.apply(diff);
  const double pnn = h.p_sperp_tperp.apply(f).squaredNorm();
  const double pnt = h.p_sperp_t.apply(f).squaredNorm();
  const double e2 = e.squaredNorm();
  r.identity_m_residual = std::abs(m_diff.squaredNorm() - (pnn + e2));
  r.identity_n_residual = std::abs(diff.squaredNorm() - (pnt + pnn + e2));
  return r;
}

QuotientCheck verify_quotient_equivalence(const ReconstructionProblem& p, const Vector& f_true,
                                          const SolveOptions& opts, double tol) {
  p.validate();
  require_same_dim(f_true.size(), p.s.dim(), "verify_quotient_equivalence");
  const SubspaceBasis sb = SubspaceBasis::range_of(p.s);
  const SubspaceBasis tb = SubspaceBasis::range_of(p.t);
  const SubspaceBasis sperp = sb.orthogonal_complement();
  if (!intersection_basis(sperp, tb).empty()) {
    throw Error(ErrorKind::HypothesisViolated, "S⊥∩T is nontrivial");
  }
  const Projector p_st_perp = intersection_basis(sb, tb.orthogonal_complement()).projector();

  const ReconstructionResult rec = consistent_reconstruct(p, opts);
  const GuidedResult g = guided_reconstruct(p, GuidedImpl::G2Projector, opts);
  const Vector psf = p_st_perp.apply(f_true);

  QuotientCheck q;
  q.decomposition_residual = (rec.f_consistent - (g.t + psf)).norm();
  const Vector oblique = oblique_project(f_true - psf, tb, sb);
  q.oblique_residual = (g.t - oblique).norm();
  const double scale = std::max(1.0, f_true.norm());
  q.holds = q.decomposition_residual <= tol * scale && q.oblique_residual <= tol * scale;
  return q;
}

}  // namespace guided
