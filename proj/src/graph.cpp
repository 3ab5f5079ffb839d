#include "guided/graph.hpp"

#include "guided/subspace.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace guided {

WeightedGraph::WeightedGraph(Index n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ <= 0) throw Error(ErrorKind::InvalidArgument, "graph needs at least one node");
  for (const Edge& e : edges_) {
    if (e.i < 0 || e.i >= n_ || e.j < 0 || e.j >= n_) {
      throw Error(ErrorKind::OutOfRange, "edge endpoint outside [0," + std::to_string(n_) + ")");
    }
    if (e.i == e.j) throw Error(ErrorKind::InvalidArgument, "self-loop at node " + std::to_string(e.i + 1));
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw Error(ErrorKind::InvalidArgument, "edge weights must be positive and finite");
    }
  }
}

Matrix WeightedGraph::adjacency() const {
  Matrix w = Matrix::Zero(n_, n_);
  for (const Edge& e : edges_) {
    w(e.i, e.j) += e.w;
    w(e.j, e.i) += e.w;
  }
  return w;
}

Vector WeightedGraph::degrees() const {
  Vector d = Vector::Zero(n_);
  for (const Edge& e : edges_) {
    d[e.i] += e.w;
    d[e.j] += e.w;
  }
  return d;
}

Matrix normalized_laplacian(const WeightedGraph& g) {
  const Vector d = g.degrees();
  for (Index i = 0; i < g.n(); ++i) {
    if (d[i] <= 0.0) throw Error(ErrorKind::IsolatedNode, "node " + std::to_string(i + 1) + " has no edges");
  }
  const Vector dinv = d.cwiseSqrt().cwiseInverse();
  Matrix lap = -(dinv.asDiagonal() * g.adjacency() * dinv.asDiagonal());
  lap.diagonal().array() += 1.0;
  return 0.5 * (lap + lap.transpose());
}

GraphSpectrum graph_spectrum(const WeightedGraph& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(normalized_laplacian(g));
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalBreakdown, "Laplacian eigendecomposition failed");
  }
  return GraphSpectrum{eig.eigenvalues(), std::make_shared<const Matrix>(eig.eigenvectors())};
}

Vector gft(const GraphSpectrum& spec, const Vector& f) {
  require_same_dim(f.size(), spec.n(), "gft");
  return spec.u().transpose() * f;
}

Vector igft(const GraphSpectrum& spec, const Vector& coeffs) {
  require_same_dim(coeffs.size(), spec.n(), "igft");
  return spec.u() * coeffs;
}

Projector bandlimited_projector(const GraphSpectrum& spec, double omega) {
  if (!(omega >= 0.0)) throw Error(ErrorKind::OutOfRange, "omega must be >= 0");
  std::vector<bool> keep(static_cast<std::size_t>(spec.n()));
  for (Index i = 0; i < spec.n(); ++i) keep[i] = spec.eigenvalues[i] <= omega + 1e-12;
  return Projector::spectral_filter(spec.eigenvectors, std::move(keep));
}

Projector sampling_projector(Index n, const std::vector<Index>& nodes) {
  if (nodes.empty()) throw Error(ErrorKind::EmptySubspace, "no sampled nodes");
  return Projector::coordinate_mask(n, nodes);
}

UniquenessReport uniqueness_check(const Projector& bandlimited, const std::vector<Index>& nodes) {
  const Index n = bandlimited.dim();
  const Projector s = sampling_projector(n, nodes);
  const Projector sc = s.complement();
  UniquenessReport rep;
  if (sc.rank() == 0 || bandlimited.rank() == 0) {
    rep.unique = true;
    rep.margin = std::numbers::pi / 2;
    return rep;
  }
  const SubspaceBasis pw = SubspaceBasis::range_of(bandlimited);
  const SubspaceBasis unsampled = SubspaceBasis::range_of(sc);
  rep.intersection_dim = intersection_basis(pw, unsampled).k();
  rep.unique = rep.intersection_dim == 0;
  const AngleReport ang = principal_angles(pw, unsampled);
  rep.margin = rep.unique ? ang.angles.back() : 0.0;
  return rep;
}

WeightedGraph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  Index n = 0;
  Index declared = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const auto pos = line.find("nodes=");
      if (pos != std::string::npos) declared = std::stol(line.substr(pos + 6));
      continue;
    }
    std::istringstream ss(line);
    long long i = 0;
    long long j = 0;
    double w = 0.0;
    if (!(ss >> i >> j >> w)) {
      throw Error(ErrorKind::Parse, "edge list line " + std::to_string(lineno) + ": expected 'i j w'");
    }
    if (i < 1 || j < 1) {
      throw Error(ErrorKind::Parse, "edge list line " + std::to_string(lineno) + ": indices are 1-based");
    }
    edges.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), w});
    n = std::max<Index>(n, std::max<Index>(i, j));
  }
  if (declared > 0) {
    if (declared < n) throw Error(ErrorKind::Parse, "nodes= smaller than the largest index");
    n = declared;
  }
  if (n == 0) throw Error(ErrorKind::Parse, "edge list is empty");
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  out << "# nodes=" << g.n() << '\n';
  out << std::setprecision(17);
  for (const Edge& e : g.edges()) out << e.i + 1 << ' ' << e.j + 1 << ' ' << e.w << '\n';
}

void write_spectrum_csv(std::ostream& out, const GraphSpectrum& spec) {
  out << "index,eigenvalue\n" << std::setprecision(17);
  for (Index i = 0; i < spec.n(); ++i) out << i + 1 << ',' << spec.eigenvalues[i] << '\n';
}

}  // namespace guided
