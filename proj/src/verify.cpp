#include "guided/verify.hpp"

#include "guided/graph.hpp"
#include "guided/imaging.hpp"
#include "guided/random_instances.hpp"
#include "guided/reconstruction.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

namespace guided {

bool VerifyReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return !checks.empty();
}

namespace {

struct Check {
  const char* name;
  const char* description;
  std::function<CheckOutcome(const VerifyOptions&)> run;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vector shifted(Vector v, double d) {
  v.array() += d;
  return v;
}

CheckOutcome outcome(const char* name, double err, double tol) {
  return {name, err <= tol, "max error " + sci(err) + " (tol " + sci(tol) + ")"};
}

// S = span(e1, e3, e5, e6), T = span(e1 + a e2, e3 + b e4, e5, e7) in R^8.
std::pair<Projector, Projector> eight_dim(double a, double b) {
  Matrix s = Matrix::Zero(8, 4);
  s(0, 0) = s(2, 1) = s(4, 2) = s(5, 3) = 1.0;
  Matrix t = Matrix::Zero(8, 4);
  t(0, 0) = 1.0;
  t(1, 0) = a;
  t(2, 1) = 1.0;
  t(3, 1) = b;
  t(4, 2) = 1.0;
  t(6, 3) = 1.0;
  return {projector_from_basis(s), projector_from_basis(t)};
}

CheckOutcome golden_2d(const VerifyOptions& o) {
  Matrix tcol(2, 1);
  tcol << 1, 2;
  const Projector s = Projector::coordinate_mask(2, {0});
  const Projector t = projector_from_basis(tcol);
  const auto p = ReconstructionProblem::from_signal(s, t, vec({2, 3}));
  const ReconstructionResult r = consistent_reconstruct(p);
  double err = (r.f_consistent - shifted(vec({2, 4}), o.perturbation)).cwiseAbs().maxCoeff();
  const double c = principal_angles(SubspaceBasis::range_of(s), SubspaceBasis::range_of(t)).cos_theta_max;
  err = std::max(err, std::abs(c - (1.0 / std::sqrt(5.0) + o.perturbation)));
  return outcome("golden_2d", err, 1e-10);
}

CheckOutcome golden_3d(const VerifyOptions& o) {
  Matrix tcol(3, 1);
  tcol << 1, 0, 2;
  const Projector s = Projector::coordinate_mask(3, {0, 1});
  const Projector t = projector_from_basis(tcol);
  const auto p = ReconstructionProblem::from_signal(s, t, vec({2, 1, 6}));
  const ReconstructionResult r = consistent_reconstruct(p);
  const double d = o.perturbation;
  double err = (r.f_consistent - shifted(vec({2, 1, 4}), d)).cwiseAbs().maxCoeff();
  const Vector g_expected = shifted(vec({2, 0, 4}), d);
  for (GuidedImpl impl : {GuidedImpl::G1Frame, GuidedImpl::G2Projector, GuidedImpl::G3FromConsistent}) {
    const GuidedResult g = guided_reconstruct(p, impl, {}, &r);
    err = std::max(err, (g.t - g_expected).cwiseAbs().maxCoeff());
  }
  const Vector fa = blend(r.f_consistent, r.t_guided, 0.7);
  err = std::max(err, (fa - shifted(vec({2, 0.7, 4}), d)).cwiseAbs().maxCoeff());
  const RegularizedResult reg = regularized_reconstruct(p, rho_from_alpha(0.7));
  err = std::max(err, (reg.f - shifted(vec({2, 0.7, 4}), d)).cwiseAbs().maxCoeff());
  err = std::max(err, (minimax_regret(p) - shifted(vec({0.4, 0, 0.8}), d)).cwiseAbs().maxCoeff());
  return outcome("golden_3d", err, 1e-10);
}

CheckOutcome golden_8d(const VerifyOptions& o) {
  const double d = o.perturbation;
  double err = 0.0;
  bool ok = true;
  {
    auto [s, t] = eight_dim(2.0, 1.0);
    const Vector f = vec({1, 5, 2, 5, 1, 1, 1, 1});
    const auto p = ReconstructionProblem::from_signal(s, t, f);
    const ReconstructionResult r = consistent_reconstruct(p);
    err = (r.f_consistent - shifted(vec({1, 2, 2, 2, 1, 1, 0, 0}), d)).cwiseAbs().maxCoeff();
    const Vector x = r.f_consistent - p.sf;
    err = std::max(err, (x - shifted(vec({0, 2, 0, 2, 0, 0, 0, 0}), d)).cwiseAbs().maxCoeff());
    const HalmosDecomposition h = halmos(SubspaceBasis::range_of(s), SubspaceBasis::range_of(t));
    const std::array<Index, 5> want{1, 1, 1, 1, 4};
    ok = ok && h.dims() == want;
    const BoundReport b = evaluate_bounds(p, f, r, h);
    ok = ok && b.all_hold();
    err = std::max(err, std::abs(b.cos_theta_max - (1.0 / std::sqrt(5.0) + d)));
  }
  {
    // a = b: every bound is attained.
    auto [s, t] = eight_dim(2.0, 2.0);
    const Vector f = vec({1, 5, 2, 3, 1, 1, 1, 1});
    const auto p = ReconstructionProblem::from_signal(s, t, f);
    const ReconstructionResult r = consistent_reconstruct(p);
    const HalmosDecomposition h = halmos(SubspaceBasis::range_of(s), SubspaceBasis::range_of(t));
    const BoundReport b = evaluate_bounds(p, f, r, h);
    const double ratios[] = {b.x_norm / b.cos_bound, b.x_norm / b.tan_bound,
                             b.fn_norm_sq / b.fnog_bound, b.err_measured / b.err_bound_cos2,
                             b.err_measured / b.err_bound_cos1};
    for (double q : ratios) err = std::max(err, std::abs(q - (1.0 + d)));
  }
  CheckOutcome out = outcome("golden_8d", err, 1e-9);
  if (!ok) {
    out.passed = false;
    out.detail += "; Halmos dims or bounds wrong";
  }
  return out;
}

CheckOutcome oblique_block(const VerifyOptions& o) {
  Matrix s(4, 2);
  s << 1, 0, 0, 0, 0, 1, 0, 0;
  Matrix t(4, 2);
  t << 1, 0, 2, 0, 0, 1, 0, 1;
  const SubspaceBasis sb = SubspaceBasis::span_of(s);
  const SubspaceBasis tb = SubspaceBasis::span_of(t);
  const Vector f = vec({1, 0, 1, 0});
  const Vector proj = oblique_project(f, tb, sb);
  double err = (proj - shifted(vec({1, 2, 1, 1}), o.perturbation)).cwiseAbs().maxCoeff();
  const Vector x = proj - sb.projector().apply(proj);
  err = std::max(err, (x - shifted(vec({0, 2, 0, 1}), o.perturbation)).cwiseAbs().maxCoeff());
  return outcome("oblique_h0_block", err, 1e-10);
}

ReconstructionProblem random_problem(CounterRng& rng, Index dim, Vector* f_out) {
  const HalmosShape shape = random_shape(rng, dim, 2, 0.25, 1.3);
  const StructuredPair pair = random_structured_pair(rng, shape);
  const Vector f = random_vector(rng, dim);
  if (f_out) *f_out = f;
  return ReconstructionProblem::from_signal(pair.s.projector(), pair.t.projector(), f);
}

CheckOutcome regularization(const VerifyOptions& o) {
  CounterRng rng(o.seed, 1);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_problem(rng, 12, nullptr);
    const ReconstructionResult r = consistent_reconstruct(p);
    for (int i = 1; i <= 9; ++i) {
      const double a = 0.1 * i;
      const Vector fa = blend(r.f_consistent, r.t_guided, a);
      const Vector fr = regularized_reconstruct(p, rho_from_alpha(a)).f;
      worst = std::max(worst, (fr - fa).norm() / std::max(fa.norm(), 1e-300));
    }
  }
  return outcome("regularization_equivalence", worst + o.perturbation, 1e-7);
}

CheckOutcome blend_identity(const VerifyOptions& o) {
  CounterRng rng(o.seed, 2);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Vector f;
    const auto p = random_problem(rng, 10, &f);
    const ReconstructionResult r = consistent_reconstruct(p);
    const SubspaceBasis sb = SubspaceBasis::range_of(p.s);
    const SubspaceBasis tperp = SubspaceBasis::range_of(p.t).orthogonal_complement();
    const Projector pst = intersection_basis(sb, tperp).projector();
    const double gap = pst.apply(f).squaredNorm();
    for (double a : {0.0, 0.3, 0.7, 1.0}) {
      const Vector fa = blend(r.f_consistent, r.t_guided, a);
      const double lhs = (fa - f).squaredNorm();
      const double rhs = (r.f_consistent - f).squaredNorm() + (1 - a) * (1 - a) * gap;
      worst = std::max(worst, std::abs(lhs - rhs) / f.squaredNorm());
    }
  }
  return outcome("blend_error_identity", worst + o.perturbation, 1e-9);
}

CheckOutcome error_bounds(const VerifyOptions& o) {
  CounterRng rng(o.seed, 3);
  double worst_identity = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 30; ++trial) {
    Vector f;
    const auto p = random_problem(rng, 10, &f);
    const ReconstructionResult r = consistent_reconstruct(p);
    const HalmosDecomposition h = halmos(SubspaceBasis::range_of(p.s), SubspaceBasis::range_of(p.t));
    const BoundReport b = evaluate_bounds(p, f, r, h);
    ok = ok && b.all_hold();
    worst_identity = std::max({worst_identity, b.identity_m_residual / f.squaredNorm(),
                               b.identity_n_residual / f.squaredNorm()});
  }
  CheckOutcome out = outcome("error_bounds", worst_identity + o.perturbation, 1e-9);
  if (!ok) {
    out.passed = false;
    out.detail += "; a bound was violated";
  }
  return out;
}

CheckOutcome quotient(const VerifyOptions& o) {
  CounterRng rng(o.seed, 4);
  double worst = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 10; ++trial) {
    HalmosShape shape = random_shape(rng, 10, 2, 0.25, 1.3);
    shape.sperp_tperp += shape.sperp_t;
    shape.sperp_t = 0;  // hypothesis: S⊥∩T = {0}
    const StructuredPair pair = random_structured_pair(rng, shape);
    const Vector f = random_vector(rng, shape.dim());
    const auto p = ReconstructionProblem::from_signal(pair.s.projector(), pair.t.projector(), f);
    const QuotientCheck q = verify_quotient_equivalence(p, f);
    ok = ok && q.holds;
    worst = std::max({worst, q.decomposition_residual, q.oblique_residual});
  }
  CheckOutcome out = outcome("quotient_equivalence", worst + o.perturbation, 1e-8);
  out.passed = out.passed && ok;
  return out;
}

CheckOutcome cg_pocs(const VerifyOptions& o) {
  Matrix tcol(3, 1);
  tcol << 1, 0, 2;
  const Projector s = Projector::coordinate_mask(3, {0, 1});
  const Projector t = projector_from_basis(tcol);
  const Vector sf = s.apply(vec({2, 1, 6}));
  SolveOptions opts;
  opts.max_iter = 2000;
  const SolveResult pocs = pocs_solve(s.complement(), t, sf, opts);
  const RestrictedOperator k(s, t);
  const SolveResult cg = cg_solve(k.as_function(), -k.apply(sf), opts);
  double err = (pocs.solution - shifted(vec({0, 0, 4}), o.perturbation)).cwiseAbs().maxCoeff();
  err = std::max(err, (cg.solution - shifted(vec({0, 0, 4}), o.perturbation)).cwiseAbs().maxCoeff());
  CheckOutcome out = outcome("cg_pocs_agree", err, 1e-9);
  out.passed = out.passed && cg.iterations <= pocs.iterations;
  return out;
}

CheckOutcome graph_recovery(const VerifyOptions& o) {
  CounterRng rng(o.seed, 5);
  double worst = 0.0;
  int used = 0;
  for (int trial = 0; trial < 40 && used < 5; ++trial) {
    const WeightedGraph g = random_connected_graph(rng, 24, 0.15);
    const GraphSpectrum spec = graph_spectrum(g);
    const Projector t = bandlimited_projector(spec, spec.eigenvalues[5]);
    const std::vector<Index> nodes = random_subset(rng, 24, 14);
    if (!uniqueness_check(t, nodes).unique) continue;
    ++used;
    const Vector f = t.apply(random_vector(rng, 24));
    const auto p = ReconstructionProblem::from_signal(sampling_projector(24, nodes), t, f);
    const ReconstructionResult r = consistent_reconstruct(p);
    worst = std::max(worst, (r.f_consistent - f).norm() / f.norm());
  }
  CheckOutcome out = outcome("graph_exact_recovery", worst + o.perturbation, 1e-7);
  if (used == 0) {
    out.passed = false;
    out.detail = "no instance satisfied the uniqueness condition";
  }
  return out;
}

CheckOutcome imaging_laws(const VerifyOptions& o) {
  CounterRng rng(o.seed, 6);
  const Index w = 16;
  const Projector s = block_sampling_projector(w, 2);
  const Projector t = dct_lowpass_projector(w, 5);
  double err = 0.0;
  for (int i = 0; i < 5; ++i) {
    const Vector u = random_vector(rng, w * w);
    const Vector v = random_vector(rng, w * w);
    for (const Projector* p : {&s, &t}) {
      const Vector pu = p->apply(u);
      err = std::max(err, (p->apply(pu) - pu).norm() / u.norm());
      err = std::max(err, std::abs(pu.dot(v) - u.dot(p->apply(v))) / (u.norm() * v.norm()));
    }
  }
  const Vector trace_s = s.to_dense().diagonal();
  const Vector trace_t = t.to_dense().diagonal();
  err = std::max(err, std::abs(trace_s.sum() - 64.0));
  err = std::max(err, std::abs(trace_t.sum() - 25.0));
  return outcome("imaging_projector_laws", err + o.perturbation, 1e-10);
}

const std::vector<Check>& registry() {
  static const std::vector<Check> checks = {
      {"golden_2d", "2D example: reconstruction [2,4], cos = 1/sqrt(5)", golden_2d},
      {"golden_3d", "3D example: f_c, three guided routes, blend 0.7, regularized, minimax",
       golden_3d},
      {"golden_8d", "8D example: Halmos dims, normal solution, bounds, sharpness at a = b",
       golden_8d},
      {"oblique_h0_block", "oblique projection on the generic 4D block", oblique_block},
      {"regularization_equivalence", "regularized solve equals the blend with rho = (1-a)/a",
       regularization},
      {"blend_error_identity", "error of the blend grows by (1-a)^2 ||P f||^2", blend_identity},
      {"error_bounds", "stability and error bounds, error identities", error_bounds},
      {"quotient_equivalence", "f_c = f_g + P f and the oblique route", quotient},
      {"cg_pocs_agree", "CG and POCS reach [0,0,4]; CG needs no more steps", cg_pocs},
      {"graph_exact_recovery", "bandlimited graph signals are recovered exactly", graph_recovery},
      {"imaging_projector_laws", "block and DCT projectors are orthogonal with the right rank",
       imaging_laws},
  };
  return checks;
}

}  // namespace

std::vector<CheckInfo> list_checks() {
  std::vector<CheckInfo> out;
  for (const Check& c : registry()) out.push_back({c.name, c.description});
  return out;
}

VerifyReport run_verify(const VerifyOptions& opts) {
  VerifyReport rep;
  for (const Check& c : registry()) {
    if (!opts.filter.empty() && std::string(c.name).find(opts.filter) == std::string::npos) continue;
    try {
      rep.checks.push_back(c.run(opts));
    } catch (const std::exception& e) {
      rep.checks.push_back({c.name, false, std::string("exception: ") + e.what()});
    }
  }
  return rep;
}

}  // namespace guided
