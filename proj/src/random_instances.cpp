#include "guided/random_instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace guided {

Vector random_vector(CounterRng& rng, Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

Matrix random_gaussian(CounterRng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

Matrix random_orthogonal(CounterRng& rng, Index n) {
  const Matrix g = random_gaussian(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  // Fix column signs against R's diagonal so the distribution is uniform.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

SubspaceBasis random_subspace(CounterRng& rng, Index dim, Index k) {
  if (k < 0 || k > dim) throw Error(ErrorKind::OutOfRange, "subspace dimension out of range");
  if (k == 0) return SubspaceBasis::trivial(dim);
  return SubspaceBasis::span_of(random_gaussian(rng, dim, k));
}

StructuredPair random_structured_pair(CounterRng& rng, const HalmosShape& shape) {
  const Index n = shape.dim();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty shape");
  const Matrix q = random_orthogonal(rng, n);
  const Index ks = shape.st + shape.st_perp + shape.pairs;
  const Index kt = shape.st + shape.sperp_t + shape.pairs;
  Matrix s(n, ks);
  Matrix t(n, kt);
  Index col = 0;
  Index cs = 0;
  Index ct = 0;
  for (Index i = 0; i < shape.st; ++i, ++col) {
    s.col(cs++) = q.col(col);
    t.col(ct++) = q.col(col);
  }
  for (Index i = 0; i < shape.st_perp; ++i, ++col) s.col(cs++) = q.col(col);
  for (Index i = 0; i < shape.sperp_t; ++i, ++col) t.col(ct++) = q.col(col);
  col += shape.sperp_tperp;
  StructuredPair out;
  for (Index i = 0; i < shape.pairs; ++i) {
    const double a = shape.min_angle + (shape.max_angle - shape.min_angle) * rng.uniform();
    out.angles.push_back(a);
    const Vector u = q.col(col++);
    const Vector v = q.col(col++);
    s.col(cs++) = u;
    t.col(ct++) = std::cos(a) * u + std::sin(a) * v;
  }
  out.s = SubspaceBasis::span_of(s);
  out.t = SubspaceBasis::span_of(t);
  return out;
}

HalmosShape random_shape(CounterRng& rng, Index dim, Index max_intersection, double min_angle,
                         double max_angle) {
  HalmosShape sh;
  sh.min_angle = min_angle;
  sh.max_angle = max_angle;
  Index left = dim;
  for (Index* d : {&sh.st, &sh.st_perp, &sh.sperp_t, &sh.sperp_tperp}) {
    *d = std::min<Index>(left, static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_intersection + 1))));
    left -= *d;
  }
  sh.pairs = left / 2;
  sh.sperp_tperp += left % 2;
  return sh;
}

WeightedGraph random_connected_graph(CounterRng& rng, Index n, double p) {
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> has(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  auto weight = [&]() { return 0.5 + rng.uniform(); };
  for (Index i = 1; i < n; ++i) {
    const auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i)));
    edges.push_back({j, i, weight()});
    has[j][i] = has[i][j] = true;
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (!has[i][j] && rng.uniform() < p) edges.push_back({i, j, weight()});
    }
  }
  return WeightedGraph(n, std::move(edges));
}

std::vector<Index> random_subset(CounterRng& rng, Index n, Index m) {
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  for (Index i = 0; i < m && i < n; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(all[i], all[j]);
  }
  all.resize(static_cast<std::size_t>(std::min(m, n)));
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace guided
