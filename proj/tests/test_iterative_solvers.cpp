#include "fixtures.hpp"
#include "oracles.hpp"

#include "guided/io.hpp"
#include "guided/random_instances.hpp"
#include "guided/solvers.hpp"

#include <doctest.h>

#include <limits>

using namespace guided;
using fixtures::vec;

namespace {

LinearOperator dense_op(const Matrix& m) {
  return [m](const Vector& v) { return Vector(m * v); };
}

}  // namespace

TEST_SUITE("iterative_solvers") {
  TEST_CASE("identity operator converges in one step") {
    const Vector b = vec({1, -2, 3});
    const SolveResult r = cg_solve([](const Vector& v) { return v; }, b);
    CHECK(r.iterations == 1);
    CHECK(r.converged);
    CHECK((r.solution - b).norm() <= 1e-14);
  }

  TEST_CASE("zero right-hand side returns zero") {
    const SolveResult r = cg_solve([](const Vector& v) { return v; }, Vector::Zero(4));
    CHECK(r.iterations == 0);
    CHECK(r.converged);
    CHECK(r.solution.norm() == 0.0);
  }

  TEST_CASE("3D example: CG and POCS reach [0,0,4]") {
    const auto p = fixtures::three_dim(2.0, vec({2, 1, 6}));
    const RestrictedOperator k(p.s, p.t);
    const SolveResult cg = cg_solve(k.as_function(), -k.apply(p.sf));
    CHECK((cg.solution - vec({0, 0, 4})).norm() <= 1e-10);
    SolveOptions o;
    o.max_iter = 1000;
    const SolveResult pocs = pocs_solve(p.s.complement(), p.t, p.sf, o);
    CHECK(pocs.converged);
    CHECK((pocs.solution - vec({0, 0, 4})).norm() <= 1e-10);
    CHECK(pocs.iterations > cg.iterations);
  }

  TEST_CASE("2D scalar form") {
    const double c = 1.0 / std::sqrt(5.0);
    const double s = 2.0 / std::sqrt(5.0);
    const SolveResult r = cg_solve([c](const Vector& v) { return Vector(c * c * v); }, vec({s * c * 2.0}));
    CHECK(std::abs(r.solution[0] - 4.0) <= 1e-12);
  }

  TEST_CASE("POCS: exact recovery and T inside S") {
    CounterRng rng(1);
    HalmosShape shape;
    shape.st = 1;
    shape.sperp_tperp = 2;
    shape.pairs = 2;
    const StructuredPair pr = random_structured_pair(rng, shape);
    const Projector s = pr.s.projector();
    const Projector t = pr.t.projector();
    const Vector f = t.apply(random_vector(rng, shape.dim()));
    SolveOptions o;
    o.max_iter = 5000;
    const SolveResult r = pocs_solve(s.complement(), t, s.apply(f), o);
    CHECK(r.converged);
    CHECK((r.solution - s.complement().apply(f)).norm() <= 1e-9);

    // T ⊆ S: one step.
    const Projector s2 = Projector::coordinate_mask(3, {0, 1});
    const Projector t2 = Projector::coordinate_mask(3, {0});
    const SolveResult r2 = pocs_solve(s2.complement(), t2, vec({1, 2, 0}));
    CHECK(r2.iterations <= 1);
    CHECK(r2.converged);
  }

  TEST_CASE("convergence_bound values") {
    CHECK(convergence_bound(SolverMethod::POCS, 1.0, 3) == 0.0);
    CHECK(convergence_bound(SolverMethod::CG, 1.0, 3) == 0.0);
    const double c = 1.0 / std::sqrt(5.0);
    CHECK(std::abs(convergence_bound(SolverMethod::POCS, c, 1) - 0.8) <= 1e-14);
    const double q = (1 - c) / (1 + c);
    CHECK(std::abs(convergence_bound(SolverMethod::CG, c, 2) - 2 * q * q) <= 1e-14);
    CHECK(std::abs(convergence_bound(SolverMethod::CG, c, 2) - 0.2918) <= 1e-4);
    try {
      (void)convergence_bound(SolverMethod::CG, 0.0, 1);
      FAIL("expected DivergentBound");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DivergentBound);
    }
  }

  TEST_CASE("CG on a random SPD matrix matches a direct solve") {
    CounterRng rng(2);
    const Index n = 20;
    const Matrix g = random_gaussian(rng, n, n);
    const Matrix a = g * g.transpose() + 0.5 * Matrix::Identity(n, n);
    const Vector b = random_vector(rng, n);
    const SolveResult r = cg_solve(dense_op(a), b);
    const Vector x = a.ldlt().solve(b);
    CHECK((r.solution - x).norm() / x.norm() <= 1e-8);
    CHECK(r.iterations <= 2 * n);
  }

  TEST_CASE("normal solution and Krylov confinement") {
    CounterRng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      HalmosShape shape;
      shape.st = static_cast<Index>(rng.below(2));
      shape.st_perp = static_cast<Index>(rng.below(2));
      shape.sperp_t = 1 + static_cast<Index>(rng.below(2));
      shape.sperp_tperp = static_cast<Index>(rng.below(2));
      shape.pairs = 2 + static_cast<Index>(rng.below(3));
      shape.min_angle = 0.3;
      shape.max_angle = 1.2;
      const StructuredPair pr = random_structured_pair(rng, shape);
      const Vector f = random_vector(rng, shape.dim());
      const auto p = ReconstructionProblem::from_signal(pr.s.projector(), pr.t.projector(), f);
      const RestrictedOperator k(p.s, p.t);
      SolveOptions o;
      double drift = 0.0;
      o.on_iterate = [&](Index, const Vector& x) {
        drift = std::max(drift, (k.domain.apply(x) - x).norm());
      };
      const SolveResult r = cg_solve(k.as_function(), -k.apply(p.sf), o);
      const SubspaceBasis sperp_t = intersection_basis(pr.s.orthogonal_complement(), pr.t);
      REQUIRE(sperp_t.k() >= 1);
      CHECK((sperp_t.columns().transpose() * r.solution).norm() <= 1e-8);
      CHECK(drift <= 1e-9);
    }
  }

  TEST_CASE("measured errors respect the convergence bounds") {
    CounterRng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
      const auto rp = fixtures::random_problem(rng, 14, 2, 0.3, 1.2);
      const RestrictedOperator k(rp.p.s, rp.p.t);
      const Vector b = -k.apply(rp.p.sf);
      const AngleReport g = principal_angles(rp.pair.s, rp.pair.t);
      SolveOptions exact;
      exact.tol = 1e-14;
      const Vector xs = cg_solve(k.as_function(), b, exact).solution;
      const double e0 = std::sqrt(xs.dot(k.apply(xs)));
      if (e0 < 1e-12) continue;
      SolveOptions o;
      o.on_iterate = [&](Index m, const Vector& x) {
        const Vector e = x - xs;
        const double ek = std::sqrt(std::max(0.0, e.dot(k.apply(e))));
        CHECK(ek / e0 <= convergence_bound(SolverMethod::CG, g.cos_theta_max, m) * (1 + 1e-6) + 1e-12);
      };
      (void)cg_solve(k.as_function(), b, o);

      double prev = xs.norm();
      const double floor = 1e-6 * prev;  // below this, rounding in xs dominates the ratio
      const double rate = 1 - g.cos_theta_max * g.cos_theta_max;
      SolveOptions po;
      po.max_iter = 60;
      po.on_iterate = [&](Index, const Vector& x) {
        const double err = (x - xs).norm();
        if (prev > floor) CHECK(err / prev <= rate + 1e-9);
        prev = err;
      };
      (void)pocs_solve(rp.p.s.complement(), rp.p.t, rp.p.sf, po);
    }
  }

  TEST_CASE("residual history and metering") {
    const auto p = fixtures::three_dim(2.0, vec({2, 1, 6}));
    const RestrictedOperator k(p.s, p.t);
    reset_solver_invocations();
    SolveOptions o;
    o.record_history = true;
    const SolveResult r = cg_solve(k.as_function(), -k.apply(p.sf), o);
    CHECK(solver_invocations() == 1);
    CHECK(r.residual_history.size() == static_cast<std::size_t>(r.iterations));
    CHECK(r.final_relres <= 1e-12);
    const std::string csv = residual_history_csv(r);
    CHECK(csv.rfind("iter,relres\n1,", 0) == 0);
  }

  TEST_CASE("non-finite input is a numerical breakdown") {
    Vector b = vec({1, 2});
    b[1] = std::numeric_limits<double>::quiet_NaN();
    try {
      (void)cg_solve([](const Vector& v) { return v; }, b);
      FAIL("expected NumericalBreakdown");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NumericalBreakdown);
    }
  }

  TEST_CASE("max_iter reached is reported, not thrown") {
    CounterRng rng(5);
    const Matrix g = random_gaussian(rng, 30, 30);
    const Matrix a = g * g.transpose() + Matrix::Identity(30, 30);
    SolveOptions o;
    o.max_iter = 2;
    const SolveResult r = cg_solve(dense_op(a), random_vector(rng, 30), o);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 2);
  }
}
