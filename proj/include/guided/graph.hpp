#pragma once

#include "guided/common.hpp"
#include "guided/projector.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace guided {

struct Edge {
  Index i;  // zero-based
  Index j;
  double w;
};

/// Undirected graph with positive weights. Each edge is stored once and
/// counted in both directions. Parallel edges add up.
class WeightedGraph {
 public:
  WeightedGraph(Index n, std::vector<Edge> edges);

  Index n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  Matrix adjacency() const;
  Vector degrees() const;

 private:
  Index n_;
  std::vector<Edge> edges_;
};

/// D^{-1/2} (D - W) D^{-1/2}. Throws IsolatedNode for a zero-degree node.
Matrix normalized_laplacian(const WeightedGraph& g);

struct GraphSpectrum {
  Vector eigenvalues;                         // nondecreasing
  std::shared_ptr<const Matrix> eigenvectors;  // columns, orthonormal

  Index n() const { return eigenvalues.size(); }
  const Matrix& u() const { return *eigenvectors; }
};

GraphSpectrum graph_spectrum(const WeightedGraph& g);

Vector gft(const GraphSpectrum& spec, const Vector& f);
Vector igft(const GraphSpectrum& spec, const Vector& coeffs);

/// Projector onto PW_omega: eigenvectors with lambda <= omega + 1e-12.
Projector bandlimited_projector(const GraphSpectrum& spec, double omega);

/// Keeps the listed nodes (zero-based). Throws EmptySubspace when empty.
Projector sampling_projector(Index n, const std::vector<Index>& nodes);

struct UniquenessReport {
  bool unique = false;
  Index intersection_dim = 0;
  // Smallest principal angle between PW_omega and l2 of the unsampled
  // nodes; 0 when recovery is not unique, pi/2 when every node is sampled.
  double margin = 0.0;
};

UniquenessReport uniqueness_check(const Projector& bandlimited, const std::vector<Index>& nodes);

/// Edge list text: one "i j w" per line, 1-indexed. Blank lines and lines
/// starting with '#' are skipped. n is the largest index seen unless a
/// "# nodes=<n>" line says otherwise.
WeightedGraph read_edge_list(std::istream& in);
WeightedGraph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const WeightedGraph& g);

/// CSV with header "index,eigenvalue", index 1-based.
void write_spectrum_csv(std::ostream& out, const GraphSpectrum& spec);

}  // namespace guided
