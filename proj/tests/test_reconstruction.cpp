#include "fixtures.hpp"
#include "oracles.hpp"

#include "guided/random_instances.hpp"
#include "guided/reconstruction.hpp"

#include <doctest.h>

using namespace guided;
using fixtures::max_abs;
using fixtures::vec;

namespace {

HalmosShape shape_with_null(CounterRng& rng, Index sperp_t) {
  HalmosShape sh;
  sh.st = static_cast<Index>(rng.below(2));
  sh.st_perp = 1 + static_cast<Index>(rng.below(2));
  sh.sperp_t = sperp_t;
  sh.sperp_tperp = static_cast<Index>(rng.below(2));
  sh.pairs = 2;
  sh.min_angle = 0.3;
  sh.max_angle = 1.2;
  return sh;
}

Projector p_st_perp(const ReconstructionProblem& p) {
  return intersection_basis(SubspaceBasis::range_of(p.s),
                            SubspaceBasis::range_of(p.t).orthogonal_complement())
      .projector();
}

}  // namespace

TEST_SUITE("reconstruction") {
  TEST_CASE("consistent reconstruction golden values") {
    CHECK(max_abs(consistent_reconstruct(fixtures::three_dim(2, vec({2, 1, 6}))).f_consistent -
                  vec({2, 1, 4})) <= 1e-10);
    CHECK(max_abs(consistent_reconstruct(fixtures::two_dim(2, vec({2, 3}))).f_consistent -
                  vec({2, 4})) <= 1e-10);
    const auto r8 = consistent_reconstruct(fixtures::eight_dim(2, 1, vec({1, 5, 2, 5, 1, 1, 1, 1})));
    CHECK(max_abs(r8.f_consistent - vec({1, 2, 2, 2, 1, 1, 0, 0})) <= 1e-10);
    REQUIRE(r8.geometry);
    CHECK(std::abs(r8.geometry->cos_theta_max - 1 / std::sqrt(5.0)) <= 1e-12);
  }

  TEST_CASE("perfect recovery of f in T") {
    CounterRng rng(1);
    HalmosShape sh;
    sh.st = 1;
    sh.st_perp = 2;
    sh.sperp_tperp = 1;
    sh.pairs = 3;
    const StructuredPair pr = random_structured_pair(rng, sh);
    const Vector f = pr.t.projector().apply(random_vector(rng, sh.dim()));
    const auto p = ReconstructionProblem::from_signal(pr.s.projector(), pr.t.projector(), f);
    const ReconstructionResult r = consistent_reconstruct(p);
    CHECK((r.f_consistent - f).norm() <= 1e-9 * f.norm());
    for (GuidedImpl impl : {GuidedImpl::G1Frame, GuidedImpl::G2Projector, GuidedImpl::G3FromConsistent}) {
      CHECK((guided_reconstruct(p, impl, {}, &r).t - f).norm() <= 1e-9 * f.norm());
    }
  }

  TEST_CASE("guided reconstruction: 3D golden and error cases") {
    const auto p = fixtures::three_dim(2, vec({2, 1, 6}));
    const ReconstructionResult r = consistent_reconstruct(p);
    for (GuidedImpl impl : {GuidedImpl::G1Frame, GuidedImpl::G2Projector, GuidedImpl::G3FromConsistent}) {
      CHECK(max_abs(guided_reconstruct(p, impl, {}, &r).t - vec({2, 0, 4})) <= 1e-10);
    }
    try {
      (void)guided_reconstruct(p, GuidedImpl::G3FromConsistent);
      FAIL("expected MissingPrerequisite");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MissingPrerequisite);
    }
    Matrix pt(3, 3);
    pt << 1, 0, 2, 0, 0, 0, 2, 0, 4;
    const ReconstructionProblem q{p.s, Projector::explicit_matrix(pt / 5.0), p.sf, std::nullopt};
    try {
      (void)guided_reconstruct(q, GuidedImpl::G1Frame);
      FAIL("expected MissingFrame");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MissingFrame);
    }
  }

  TEST_CASE("guided implementations agree on random problems") {
    CounterRng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
      const auto rp = fixtures::random_problem(rng, 16);
      const ReconstructionResult r = consistent_reconstruct(rp.p);
      const Vector g1 = guided_reconstruct(rp.p, GuidedImpl::G1Frame).t;
      const Vector g2 = guided_reconstruct(rp.p, GuidedImpl::G2Projector).t;
      const Vector g3 = guided_reconstruct(rp.p, GuidedImpl::G3FromConsistent, {}, &r).t;
      const double scale = std::max(1.0, g2.norm());
      CHECK((g2 - g3).norm() <= 1e-8 * scale);
      CHECK((g1 - g2).norm() <= 1e-8 * scale);
    }
  }

  TEST_CASE("result invariants and orthogonal decomposition") {
    CounterRng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const auto rp = fixtures::random_problem(rng, 12);
      const ReconstructionResult r = consistent_reconstruct(rp.p);
      const double scale = std::max(1.0, rp.f.norm());
      CHECK((rp.p.s.apply(r.f_consistent) - rp.p.sf).norm() <= 1e-8 * scale);
      CHECK((rp.p.t.apply(r.t_guided) - r.t_guided).norm() <= 1e-8 * scale);
      const Projector pst = p_st_perp(rp.p);
      const Vector d = r.f_consistent - r.t_guided;
      CHECK((d - pst.apply(r.f_consistent)).norm() <= 1e-8 * scale);
      CHECK((d - pst.apply(d)).norm() <= 1e-9 * scale);
      CHECK(std::abs(r.gap_distance - pst.apply(r.f_consistent).norm()) <= 1e-8 * scale);
    }
  }

  TEST_CASE("gap_distance equals the least-squares distance between plane and T") {
    CounterRng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
      const auto rp = fixtures::random_problem(rng, 10);
      const ReconstructionResult r = consistent_reconstruct(rp.p);
      const Matrix sperp = rp.pair.s.orthogonal_complement().columns();
      const double dist = oracle::affine_distance(rp.p.sf, sperp, rp.pair.t.columns());
      CHECK(std::abs(r.gap_distance - dist) <= 1e-8 * std::max(1.0, rp.f.norm()));
    }
  }

  TEST_CASE("axioms: consistency, equal samples, idempotence") {
    CounterRng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      const auto rp = fixtures::random_problem(rng, 12);
      const ReconstructionResult r1 = consistent_reconstruct(rp.p);
      // Another signal with the same sample.
      const Vector f2 = rp.f + rp.p.s.complement().apply(random_vector(rng, 12));
      const auto p2 = ReconstructionProblem::from_signal(rp.p.s, rp.p.t, f2);
      const ReconstructionResult r2 = consistent_reconstruct(p2);
      const Projector n = intersection_basis(rp.pair.s.orthogonal_complement(), rp.pair.t).projector();
      const Vector diff = r1.f_consistent - r2.f_consistent;
      CHECK((diff - n.apply(diff)).norm() <= 1e-8);
      const auto p3 = ReconstructionProblem::from_signal(rp.p.s, rp.p.t, r1.f_consistent);
      const Vector again = consistent_reconstruct(p3).f_consistent;
      const Vector d3 = again - r1.f_consistent;
      CHECK((d3 - n.apply(d3)).norm() <= 1e-8);
    }
  }

  TEST_CASE("blend") {
    const auto p = fixtures::three_dim(2, vec({2, 1, 6}));
    const ReconstructionResult r = consistent_reconstruct(p);
    CHECK(max_abs(blend(r.f_consistent, r.t_guided, 0.7) - vec({2, 0.7, 4})) <= 1e-10);
    CHECK(blend(r.f_consistent, r.t_guided, 1.0) == r.f_consistent);
    CHECK(blend(r.f_consistent, r.t_guided, 0.0) == r.t_guided);
    try {
      (void)blend(r.f_consistent, r.t_guided, 1.5);
      FAIL("expected OutOfRange");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::OutOfRange);
    }
  }

  TEST_CASE("blend error identity") {
    CounterRng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
      const auto rp = fixtures::random_problem(rng, 10);
      const ReconstructionResult r = consistent_reconstruct(rp.p);
      const double gap = p_st_perp(rp.p).apply(rp.f).squaredNorm();
      for (double a : {0.0, 0.25, 0.5, 0.9, 1.0}) {
        const Vector fa = blend(r.f_consistent, r.t_guided, a);
        const double lhs = (fa - rp.f).squaredNorm();
        const double rhs = (r.f_consistent - rp.f).squaredNorm() + (1 - a) * (1 - a) * gap;
        CHECK(std::abs(lhs - rhs) <= 1e-9 * rp.f.squaredNorm());
      }
    }
  }

  TEST_CASE("regularized reconstruction") {
    const auto p2 = fixtures::two_dim(2, vec({2, 3}));
    for (double rho : {0.1, 1.0, 10.0}) {
      CHECK(max_abs(regularized_reconstruct(p2, rho).f - vec({2, 4})) <= 1e-10);
    }
    const auto p3 = fixtures::three_dim(2, vec({2, 1, 6}));
    CHECK(max_abs(regularized_reconstruct(p3, 3.0 / 7.0).f - vec({2, 0.7, 4})) <= 1e-10);
    CHECK(max_abs(regularized_reconstruct(p3, 1e6).f - vec({2, 0, 4})) <= 1e-4);
    CHECK(std::abs(alpha_from_rho(rho_from_alpha(0.3)) - 0.3) <= 1e-15);
    CHECK_THROWS_AS(regularized_reconstruct(p3, 0.0), Error);
  }

  TEST_CASE("regularized equals blend; singular case is flagged") {
    CounterRng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      const auto rp = fixtures::random_problem(rng, 12);
      const ReconstructionResult r = consistent_reconstruct(rp.p);
      for (int i = 1; i <= 9; ++i) {
        const double a = 0.1 * i;
        const Vector fa = blend(r.f_consistent, r.t_guided, a);
        const RegularizedResult reg = regularized_reconstruct(rp.p, rho_from_alpha(a));
        CHECK((reg.f - fa).norm() <= 1e-7 * std::max(fa.norm(), 1e-300));
        const bool has_null = intersection_basis(rp.pair.s.orthogonal_complement(), rp.pair.t).k() > 0;
        CHECK(reg.singular == has_null);
      }
    }
  }

  TEST_CASE("select_alpha") {
    auto p = fixtures::three_dim(2, vec({2, 1, 6}));
    const Vector fc = consistent_reconstruct(p).f_consistent;
    p.noise_norm = 0.0;
    CHECK(select_alpha(p, fc).alpha == 1.0);
    p.noise_norm = 1.0;
    CHECK(select_alpha(p, fc).alpha == doctest::Approx(0.0).epsilon(1e-12));
    p.noise_norm = 0.3;
    const AlphaSelection s = select_alpha(p, fc);
    CHECK(std::abs(s.distance - 1.0) <= 1e-12);
    CHECK(std::abs(s.alpha - 0.7) <= 1e-12);
    CHECK(std::abs(s.alpha_squared - 0.91) <= 1e-12);
    CHECK_FALSE(s.intersection_exists);

    auto p2 = fixtures::two_dim(2, vec({2, 3}));
    p2.noise_norm = 0.1;
    const AlphaSelection s2 = select_alpha(p2, consistent_reconstruct(p2).f_consistent);
    CHECK(s2.intersection_exists);
    CHECK(s2.alpha == 1.0);

    auto p3 = fixtures::three_dim(2, vec({2, 1, 6}));
    CHECK_THROWS_AS(select_alpha(p3, fc), Error);
  }

  TEST_CASE("minimax regret") {
    const auto p = fixtures::three_dim(2, vec({2, 1, 6}));
    const Matrix t = oracle::projector(fixtures::col({1, 0, 2}));
    CHECK(max_abs(minimax_regret(p) - t * vec({2, 1, 0})) <= 1e-12);
    CHECK(max_abs(minimax_regret(p) - vec({0.4, 0, 0.8})) <= 1e-12);
    const auto p0 = fixtures::three_dim(2, vec({0, 0, 5}));
    CHECK(minimax_regret(p0).norm() == 0.0);
    // f in S ∩ T
    const ReconstructionProblem q = ReconstructionProblem::from_signal(
        Projector::coordinate_mask(3, {0, 1}), Projector::coordinate_mask(3, {0, 2}), vec({3, 0, 0}));
    CHECK(max_abs(minimax_regret(q) - vec({3, 0, 0})) <= 1e-15);
  }

  TEST_CASE("reconstruct_in_subspace") {
    CounterRng rng(8);
    for (int trial = 0; trial < 8; ++trial) {
      const HalmosShape sh = shape_with_null(rng, 2);
      const StructuredPair pr = random_structured_pair(rng, sh);
      const Index n = sh.dim();
      const Vector f = random_vector(rng, n);
      const auto p = ReconstructionProblem::from_signal(pr.s.projector(), pr.t.projector(), f);
      const SubspaceBasis null = intersection_basis(pr.s.orthogonal_complement(), pr.t);
      REQUIRE(null.k() == 2);

      // M = (S⊥∩T)⊥ gives the normal solution.
      const SubspaceReconstruction a = reconstruct_in_subspace(p, null.orthogonal_complement());
      CHECK((a.f - consistent_reconstruct(p).f_consistent).norm() <= 1e-8 * f.norm());

      // Generic complementary M.
      const SubspaceBasis m = random_subspace(rng, n, n - 2);
      const SubspaceReconstruction b = reconstruct_in_subspace(p, m);
      const Projector pm = m.projector();
      const Projector sp = p.s.complement();
      CHECK((pm.apply(b.x) - b.x).norm() <= 1e-9 * f.norm());
      CHECK((sp.apply(b.x) - b.x).norm() <= 1e-9 * f.norm());
      CHECK((b.f - b.x - p.sf).norm() <= 1e-12 * f.norm());

      // f in T with S⊥ f in M is recovered exactly.
      const Matrix bt = pr.t.columns();
      const Matrix mperp = m.orthogonal_complement().columns();
      const Matrix constraint = mperp.transpose() * sp.to_dense() * bt;
      Eigen::FullPivLU<Matrix> lu(constraint);
      const Matrix ker = lu.kernel();
      REQUIRE(ker.cols() >= 1);
      const Vector ft = bt * ker.col(0);
      const auto pt = ReconstructionProblem::from_signal(p.s, p.t, ft);
      CHECK((reconstruct_in_subspace(pt, m).f - ft).norm() <= 1e-8 * ft.norm());

      // Too small M is rejected.
      try {
        (void)reconstruct_in_subspace(p, random_subspace(rng, n, n - 3));
        FAIL("expected NotComplementary");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotComplementary);
      }
    }
  }

  TEST_CASE("bounds on the 8D example") {
    const Vector f = vec({1, 5, 2, 5, 1, 1, 1, 1});
    const auto p = fixtures::eight_dim(2, 1, f);
    const ReconstructionResult r = consistent_reconstruct(p);
    auto [s, t] = fixtures::eight_dim_bases(2, 1);
    const BoundReport b = evaluate_bounds(p, f, r, halmos(s, t));
    CHECK(b.all_hold());
    const Vector x = r.f_consistent - p.sf;
    CHECK(max_abs(x - vec({0, 2 * f[0], 0, f[2], 0, 0, 0, 0})) <= 1e-10);
    const double err2 = (f - r.f_consistent).squaredNorm();
    const double want = std::pow(f[1] - 2 * f[0], 2) + std::pow(f[3] - f[2], 2) + f[6] * f[6] + f[7] * f[7];
    CHECK(std::abs(err2 - want) <= 1e-10);
    CHECK(b.identity_m_residual <= 1e-10);
    CHECK(b.identity_n_residual <= 1e-10);
  }

  TEST_CASE("bounds are sharp at a = b") {
    for (double a : {0.5, 2.0, 3.0}) {
      const Vector f = vec({1, -2, 0.5, 3, 1, 1, 1, 1});
      const auto p = fixtures::eight_dim(a, a, f);
      auto [s, t] = fixtures::eight_dim_bases(a, a);
      const BoundReport b = evaluate_bounds(p, f, consistent_reconstruct(p), halmos(s, t));
      for (double q : {b.x_norm / b.cos_bound, b.x_norm / b.tan_bound, b.fn_norm_sq / b.fnog_bound,
                       b.err_measured / b.err_bound_cos2, b.err_measured / b.err_bound_cos1}) {
        CHECK(q >= 1 - 1e-8);
        CHECK(q <= 1 + 1e-8);
      }
    }
  }

  TEST_CASE("bounds hold on random instances; f in T gives zero error") {
    CounterRng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
      const auto rp = fixtures::random_problem(rng, 10);
      const ReconstructionResult r = consistent_reconstruct(rp.p);
      const BoundReport b = evaluate_bounds(rp.p, rp.f, r, halmos(rp.pair.s, rp.pair.t));
      CHECK(b.all_hold());
      CHECK(b.identity_m_residual <= 1e-9 * rp.f.squaredNorm());
      CHECK(b.identity_n_residual <= 1e-9 * rp.f.squaredNorm());
    }
    HalmosShape sh;
    sh.st = 1;
    sh.st_perp = 1;
    sh.pairs = 2;
    const StructuredPair pr = random_structured_pair(rng, sh);
    const Vector f = pr.t.projector().apply(random_vector(rng, sh.dim()));
    const auto p = ReconstructionProblem::from_signal(pr.s.projector(), pr.t.projector(), f);
    const BoundReport b = evaluate_bounds(p, f, consistent_reconstruct(p), halmos(pr.s, pr.t));
    CHECK(b.err_measured <= 1e-10);
  }

  TEST_CASE("orthogonal S and T fall back to cos theta_max = 1") {
    const auto p = ReconstructionProblem::from_signal(Projector::coordinate_mask(2, {0}),
                                                      Projector::coordinate_mask(2, {1}), vec({1, 1}));
    const ReconstructionResult r = consistent_reconstruct(p);
    const SubspaceBasis s = SubspaceBasis::range_of(p.s);
    const SubspaceBasis t = SubspaceBasis::range_of(p.t);
    const BoundReport b = evaluate_bounds(p, vec({1, 1}), r, halmos(s, t));
    CHECK(b.cos_theta_max == 1.0);
    CHECK(b.all_hold());
  }

  TEST_CASE("quotient equivalence") {
    const Vector f = vec({2, 1, 6});
    const QuotientCheck q = verify_quotient_equivalence(fixtures::three_dim(2, f), f);
    CHECK(q.holds);
    CounterRng rng(10);
    for (int trial = 0; trial < 10; ++trial) {
      HalmosShape sh = random_shape(rng, 10, 2, 0.25, 1.3);
      sh.sperp_tperp += sh.sperp_t;
      sh.sperp_t = 0;
      const StructuredPair pr = random_structured_pair(rng, sh);
      const Vector g = random_vector(rng, sh.dim());
      const auto p = ReconstructionProblem::from_signal(pr.s.projector(), pr.t.projector(), g);
      CHECK(verify_quotient_equivalence(p, g).holds);
    }
    const HalmosShape bad = shape_with_null(rng, 1);
    const StructuredPair pr = random_structured_pair(rng, bad);
    const Vector g = random_vector(rng, bad.dim());
    const auto p = ReconstructionProblem::from_signal(pr.s.projector(), pr.t.projector(), g);
    try {
      (void)verify_quotient_equivalence(p, g);
      FAIL("expected HypothesisViolated");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::HypothesisViolated);
    }
  }

  TEST_CASE("problem validation") {
    const ReconstructionProblem bad{Projector::coordinate_mask(3, {0}), Projector::coordinate_mask(3, {1}),
                                    vec({1, 1, 0}), std::nullopt};
    CHECK_THROWS_AS(bad.validate(), Error);
    const ReconstructionProblem mism{Projector::coordinate_mask(3, {0}), Projector::coordinate_mask(2, {1}),
                                     vec({1, 0, 0}), std::nullopt};
    try {
      mism.validate();
      FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }
  }
}
