#pragma once

// Seeded generators for test problems. Shared by the verify command, the
// unit tests and the acceptance runner.

#include "guided/graph.hpp"
#include "guided/rng.hpp"
#include "guided/subspace.hpp"

#include <vector>

namespace guided {

Vector random_vector(CounterRng& rng, Index n);
Matrix random_gaussian(CounterRng& rng, Index rows, Index cols);
/// Haar-ish orthogonal matrix from QR of a Gaussian matrix.
Matrix random_orthogonal(CounterRng& rng, Index n);
/// Span of k Gaussian columns (k <= dim), orthonormalized.
SubspaceBasis random_subspace(CounterRng& rng, Index dim, Index k);

/// Prescribed Halmos structure: intersection dims plus `pairs` generic
/// two-dimensional blocks in H0, each with an angle in [min_angle, max_angle].
struct HalmosShape {
  Index st = 0;
  Index st_perp = 0;
  Index sperp_t = 0;
  Index sperp_tperp = 0;
  Index pairs = 0;
  double min_angle = 0.2;
  double max_angle = 1.2;

  Index dim() const { return st + st_perp + sperp_t + sperp_tperp + 2 * pairs; }
};

struct StructuredPair {
  SubspaceBasis s;
  SubspaceBasis t;
  std::vector<double> angles;  // of the H0 blocks
};

StructuredPair random_structured_pair(CounterRng& rng, const HalmosShape& shape);

/// Random shape with total dimension `dim`; each intersection gets 0..max_intersection.
HalmosShape random_shape(CounterRng& rng, Index dim, Index max_intersection, double min_angle,
                         double max_angle);

/// Connected graph: random spanning tree plus extra edges with probability p.
/// Weights uniform in [0.5, 1.5].
WeightedGraph random_connected_graph(CounterRng& rng, Index n, double p);

/// Random subset of {0..n-1} of size m, sorted.
std::vector<Index> random_subset(CounterRng& rng, Index n, Index m);

}  // namespace guided
