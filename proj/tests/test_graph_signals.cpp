#include "fixtures.hpp"
#include "oracles.hpp"

#include "guided/graph.hpp"
#include "guided/random_instances.hpp"
#include "guided/reconstruction.hpp"

#include <doctest.h>

#include <sstream>

using namespace guided;
using fixtures::vec;

namespace {

WeightedGraph triangle() { return WeightedGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); }

}  // namespace

TEST_SUITE("graph_signals") {
  TEST_CASE("normalized Laplacian closed forms") {
    const Matrix l2 = normalized_laplacian(WeightedGraph(2, {{0, 1, 1.0}}));
    Matrix want(2, 2);
    want << 1, -1, -1, 1;
    CHECK((l2 - want).cwiseAbs().maxCoeff() <= 1e-15);
    const GraphSpectrum s2 = graph_spectrum(WeightedGraph(2, {{0, 1, 1.0}}));
    CHECK(std::abs(s2.eigenvalues[0]) <= 1e-12);
    CHECK(std::abs(s2.eigenvalues[1] - 2.0) <= 1e-12);

    const GraphSpectrum s3 = graph_spectrum(triangle());
    const auto ev = oracle::eigenvalues(oracle::normalized_laplacian(triangle().adjacency()));
    for (Index i = 0; i < 3; ++i) CHECK(std::abs(s3.eigenvalues[i] - ev[static_cast<std::size_t>(i)]) <= 1e-10);
    CHECK(std::abs(s3.eigenvalues[1] - 1.5) <= 1e-12);
    CHECK(std::abs(s3.eigenvalues[2] - 1.5) <= 1e-12);

    const WeightedGraph star(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
    const GraphSpectrum s4 = graph_spectrum(star);
    CHECK(std::abs(s4.eigenvalues[3] - 2.0) <= 1e-12);
    const auto ev4 = oracle::eigenvalues(oracle::normalized_laplacian(star.adjacency()));
    for (Index i = 0; i < 4; ++i) CHECK(std::abs(s4.eigenvalues[i] - ev4[static_cast<std::size_t>(i)]) <= 1e-10);
  }

  TEST_CASE("isolated node is rejected") {
    try {
      (void)normalized_laplacian(WeightedGraph(3, {{0, 1, 1.0}}));
      FAIL("expected IsolatedNode");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::IsolatedNode);
    }
  }

  TEST_CASE("graph validation") {
    CHECK_THROWS_AS(WeightedGraph(2, {{0, 0, 1.0}}), Error);
    CHECK_THROWS_AS(WeightedGraph(2, {{0, 1, -1.0}}), Error);
    CHECK_THROWS_AS(WeightedGraph(2, {{0, 2, 1.0}}), Error);
    const WeightedGraph g(2, {{0, 1, 1.0}, {1, 0, 0.5}});
    CHECK(g.adjacency()(0, 1) == 1.5);
    CHECK(g.adjacency()(1, 0) == 1.5);
  }

  TEST_CASE("spectrum invariants on random graphs") {
    CounterRng rng(1);
    for (int trial = 0; trial < 5; ++trial) {
      const WeightedGraph g = random_connected_graph(rng, 20, 0.2);
      const GraphSpectrum s = graph_spectrum(g);
      const Matrix l = normalized_laplacian(g);
      CHECK(std::abs(s.eigenvalues[0]) <= 1e-8);
      CHECK(s.eigenvalues[19] <= 2.0 + 1e-10);
      for (Index i = 1; i < 20; ++i) CHECK(s.eigenvalues[i] >= s.eigenvalues[i - 1]);
      CHECK((s.u().transpose() * s.u() - Matrix::Identity(20, 20)).cwiseAbs().maxCoeff() <= 1e-9);
      for (Index i = 0; i < 20; ++i) {
        CHECK((l * s.u().col(i) - s.eigenvalues[i] * s.u().col(i)).norm() <= 1e-8);
      }
    }
  }

  TEST_CASE("GFT") {
    const GraphSpectrum s = graph_spectrum(triangle());
    const Vector e3 = gft(s, s.u().col(2));
    CHECK((e3 - Vector::Unit(3, 2)).norm() <= 1e-12);
    CHECK(gft(s, Vector::Zero(3)).norm() == 0.0);
    CounterRng rng(2);
    const Vector f = random_vector(rng, 3);
    CHECK((igft(s, gft(s, f)) - f).norm() <= 1e-9);
    CHECK(std::abs(gft(s, f).norm() - f.norm()) <= 1e-9);
    CHECK_THROWS_AS(gft(s, Vector::Zero(4)), Error);
  }

  TEST_CASE("bandlimited projector") {
    const GraphSpectrum s = graph_spectrum(triangle());
    CHECK(bandlimited_projector(s, 2.0).rank() == 3);
    CHECK(bandlimited_projector(s, 0.0).rank() == 1);
    CHECK(bandlimited_projector(s, 1.0).rank() == 1);
    CHECK(bandlimited_projector(s, 1.5).rank() == 3);
    const Matrix p0 = bandlimited_projector(s, 0.0).to_dense();
    const Vector u1 = s.u().col(0);
    CHECK((p0 - u1 * u1.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("sampling projector") {
    CHECK((sampling_projector(3, {0, 1, 2}).to_dense() - Matrix::Identity(3, 3)).norm() == 0.0);
    CHECK((sampling_projector(3, {0, 1}).apply(vec({2, 1, 6})) - vec({2, 1, 0})).norm() == 0.0);
    CHECK((sampling_projector(3, {0}).apply(vec({4, 5, 6})) - vec({4, 0, 0})).norm() == 0.0);
    try {
      (void)sampling_projector(3, {});
      FAIL("expected EmptySubspace");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::EmptySubspace);
    }
  }

  TEST_CASE("uniqueness check") {
    const GraphSpectrum s = graph_spectrum(triangle());
    CHECK(uniqueness_check(bandlimited_projector(s, 0.0), {1}).unique);
    CHECK(uniqueness_check(bandlimited_projector(s, 1.5), {0, 1, 2}).unique);
    const UniquenessReport bad = uniqueness_check(bandlimited_projector(s, 1.5), {0});
    CHECK_FALSE(bad.unique);
    CHECK(bad.intersection_dim == 2);
    CounterRng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      const WeightedGraph g = random_connected_graph(rng, 16, 0.2);
      const GraphSpectrum sp = graph_spectrum(g);
      const Projector t = bandlimited_projector(sp, sp.eigenvalues[4]);
      const std::vector<Index> nodes = random_subset(rng, 16, 6);
      Matrix unsampled = Matrix::Zero(16, 16 - 6);
      Index c = 0;
      for (Index i = 0; i < 16; ++i) {
        if (!std::binary_search(nodes.begin(), nodes.end(), i)) unsampled(i, c++) = 1.0;
      }
      const Index want = oracle::intersection_dim(t.range_basis(), unsampled);
      const UniquenessReport u = uniqueness_check(t, nodes);
      CHECK(u.intersection_dim == want);
      CHECK(u.unique == (want == 0));
      if (u.unique) CHECK(u.margin > 0.0);
    }
  }

  TEST_CASE("exact recovery; CG and POCS agree; CG is not slower") {
    CounterRng rng(4);
    int used = 0;
    for (int trial = 0; trial < 40 && used < 8; ++trial) {
      const WeightedGraph g = random_connected_graph(rng, 30, 0.15);
      const GraphSpectrum sp = graph_spectrum(g);
      const Projector t = bandlimited_projector(sp, sp.eigenvalues[6]);
      const std::vector<Index> nodes = random_subset(rng, 30, 16);
      if (!uniqueness_check(t, nodes).unique) continue;
      ++used;
      const Vector f = t.apply(random_vector(rng, 30));
      const auto p = ReconstructionProblem::from_signal(sampling_projector(30, nodes), t, f);
      const ReconstructionResult r = consistent_reconstruct(p);
      CHECK((r.f_consistent - f).norm() <= 1e-7 * f.norm());

      const Vector xs = f - p.sf;
      const RestrictedOperator k(p.s, p.t);
      Index cg_hit = -1;
      SolveOptions o;
      o.tol = 1e-14;
      o.on_iterate = [&](Index m, const Vector& x) {
        if (cg_hit < 0 && (x - xs).norm() <= 1e-6 * xs.norm()) cg_hit = m;
      };
      (void)cg_solve(k.as_function(), -k.apply(p.sf), o);
      Index pocs_hit = -1;
      SolveOptions po;
      po.tol = 1e-13;
      po.max_iter = 200000;
      po.on_iterate = [&](Index m, const Vector& x) {
        if (pocs_hit < 0 && (x - xs).norm() <= 1e-6 * xs.norm()) pocs_hit = m;
      };
      const SolveResult pocs = pocs_solve(p.s.complement(), t, p.sf, po);
      REQUIRE(cg_hit > 0);
      REQUIRE(pocs_hit > 0);
      CHECK(cg_hit <= pocs_hit);
      CHECK((pocs.solution + p.sf - r.f_consistent).norm() <= 1e-7 * f.norm());
    }
    CHECK(used >= 3);
  }

  TEST_CASE("edge list round trip and spectrum CSV") {
    std::istringstream in("# nodes=4\n1 2 1.5\n\n2 3 0.5\n# comment\n3 1 2\n");
    const WeightedGraph g = read_edge_list(in);
    CHECK(g.n() == 4);
    CHECK(g.edges().size() == 3);
    CHECK(g.edges()[0].i == 0);
    CHECK(g.edges()[0].w == 1.5);
    std::ostringstream out;
    write_edge_list(out, g);
    std::istringstream back(out.str());
    const WeightedGraph g2 = read_edge_list(back);
    CHECK(g2.n() == 4);
    CHECK((g2.adjacency() - g.adjacency()).norm() == 0.0);

    std::istringstream bad("1 2\n");
    CHECK_THROWS_AS(read_edge_list(bad), Error);
    std::istringstream zero("0 1 1\n");
    CHECK_THROWS_AS(read_edge_list(zero), Error);

    std::ostringstream sc;
    write_spectrum_csv(sc, graph_spectrum(triangle()));
    CHECK(sc.str().rfind("index,eigenvalue\n1,", 0) == 0);
  }
}
