#include "guided/projector.hpp"

#include "guided/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <variant>

namespace guided {

namespace {

std::span<const double> cspan(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<double> mspan(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

struct ExplicitPayload {
  Matrix p;
};

struct BasisPayload {
  Matrix q;
};

struct MaskPayload {
  Index dim;
  std::vector<Index> indices;
};

struct SpectralPayload {
  std::shared_ptr<const Matrix> u;
  std::vector<bool> keep;
  Matrix selected;  // dim x rank, the kept eigenvectors
};

struct BlockPayload {
  Index w;
  Index r;
};

struct DctPayload {
  Index w;
  Index k;
  std::vector<double> ck;   // k x w row-major
  std::vector<double> ckt;  // w x k row-major
};

// y = Q Q^T v through the kernels.
Vector basis_project(const Matrix& q, const Vector& v) {
  const auto rows = static_cast<std::size_t>(q.rows());
  const auto cols = static_cast<std::size_t>(q.cols());
  Vector c(q.cols());
  kernels::gemv_t_colmajor(q.data(), rows, cols, cspan(v), mspan(c));
  Vector y(q.rows());
  kernels::gemv_colmajor(q.data(), rows, cols, cspan(c), mspan(y));
  return y;
}

Vector basis_analyze(const Matrix& q, const Vector& v) {
  Vector c(q.cols());
  kernels::gemv_t_colmajor(q.data(), static_cast<std::size_t>(q.rows()),
                           static_cast<std::size_t>(q.cols()), cspan(v), mspan(c));
  return c;
}

Vector basis_synthesize(const Matrix& q, const Vector& c) {
  Vector y(q.rows());
  kernels::gemv_colmajor(q.data(), static_cast<std::size_t>(q.rows()),
                         static_cast<std::size_t>(q.cols()), cspan(c), mspan(y));
  return y;
}

Vector dct_analyze(const DctPayload& d, const Vector& v) {
  const auto w = static_cast<std::size_t>(d.w);
  const auto k = static_cast<std::size_t>(d.k);
  std::vector<double> tmp(k * w);
  kernels::matmul(d.ck.data(), v.data(), tmp.data(), k, w, w);
  Vector y(d.k * d.k);
  kernels::matmul(tmp.data(), d.ckt.data(), y.data(), k, w, k);
  return y;
}

Vector dct_synthesize(const DctPayload& d, const Vector& c) {
  const auto w = static_cast<std::size_t>(d.w);
  const auto k = static_cast<std::size_t>(d.k);
  std::vector<double> tmp(w * k);
  kernels::matmul(d.ckt.data(), c.data(), tmp.data(), w, k, k);
  Vector x(d.w * d.w);
  kernels::matmul(tmp.data(), d.ck.data(), x.data(), w, k, w);
  return x;
}

Vector block_project(const BlockPayload& b, const Vector& v) {
  const auto w = static_cast<std::size_t>(b.w);
  const auto r = static_cast<std::size_t>(b.r);
  const std::size_t m = w / r;
  std::vector<double> low(m * m);
  kernels::block_mean(v.data(), w, r, low.data());
  Vector y(b.w * b.w);
  kernels::block_replicate(low.data(), m, r, y.data());
  return y;
}

}  // namespace

struct Projector::Impl {
  std::variant<ExplicitPayload, BasisPayload, MaskPayload, SpectralPayload, BlockPayload,
               DctPayload>
      payload;
  Index dim = 0;
  Index rank = 0;
};

std::string_view to_string(ProjectorRepr repr) {
  switch (repr) {
    case ProjectorRepr::ExplicitMatrix: return "ExplicitMatrix";
    case ProjectorRepr::OrthonormalBasis: return "OrthonormalBasis";
    case ProjectorRepr::CoordinateMask: return "CoordinateMask";
    case ProjectorRepr::SpectralFilter: return "SpectralFilter";
    case ProjectorRepr::BlockAverage: return "BlockAverage";
    case ProjectorRepr::DctLowpass: return "DctLowpass";
  }
  return "?";
}

ProjectorRepr projector_repr_from_string(std::string_view name) {
  for (auto r : {ProjectorRepr::ExplicitMatrix, ProjectorRepr::OrthonormalBasis,
                 ProjectorRepr::CoordinateMask, ProjectorRepr::SpectralFilter,
                 ProjectorRepr::BlockAverage, ProjectorRepr::DctLowpass}) {
    if (to_string(r) == name) return r;
  }
  throw Error(ErrorKind::Parse, "unknown projector repr '" + std::string(name) + "'");
}

Projector Projector::explicit_matrix(Matrix p) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw Error(ErrorKind::InvalidArgument, "explicit projector must be square and nonempty");
  }
  if (!p.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite projector entries");
  const double scale = std::max(1.0, p.norm());
  if ((p - p.transpose()).norm() > 1e-8 * scale || (p * p - p).norm() > 1e-8 * scale) {
    throw Error(ErrorKind::InvalidArgument, "matrix is not a symmetric idempotent");
  }
  auto impl = std::make_shared<Impl>();
  impl->dim = p.rows();
  impl->rank = static_cast<Index>(std::lround(p.trace()));
  impl->payload = ExplicitPayload{0.5 * (p + p.transpose())};
  return Projector(std::move(impl), false);
}

Projector Projector::orthonormal_basis(Matrix q) {
  if (q.rows() == 0) throw Error(ErrorKind::InvalidArgument, "basis with zero rows");
  if (q.cols() > q.rows()) throw Error(ErrorKind::InvalidArgument, "more columns than rows");
  const Matrix gram = q.transpose() * q;
  if (q.cols() > 0 &&
      (gram - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff() > kProjectorTol) {
    throw Error(ErrorKind::InvalidArgument, "columns are not orthonormal");
  }
  auto impl = std::make_shared<Impl>();
  impl->dim = q.rows();
  impl->rank = q.cols();
  impl->payload = BasisPayload{std::move(q)};
  return Projector(std::move(impl), false);
}

Projector Projector::coordinate_mask(Index dim, std::vector<Index> indices) {
  if (dim <= 0) throw Error(ErrorKind::InvalidArgument, "mask dimension must be positive");
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  for (Index i : indices) {
    if (i < 0 || i >= dim) {
      throw Error(ErrorKind::OutOfRange, "mask index " + std::to_string(i) + " outside [0," +
                                             std::to_string(dim) + ")");
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->dim = dim;
  impl->rank = static_cast<Index>(indices.size());
  impl->payload = MaskPayload{dim, std::move(indices)};
  return Projector(std::move(impl), false);
}

Projector Projector::spectral_filter(std::shared_ptr<const Matrix> eigenvectors,
                                     std::vector<bool> keep) {
  if (!eigenvectors || eigenvectors->rows() != eigenvectors->cols() ||
      static_cast<Index>(keep.size()) != eigenvectors->cols()) {
    throw Error(ErrorKind::InvalidArgument, "spectral filter needs square U and one flag per column");
  }
  const Matrix& u = *eigenvectors;
  Index count = std::count(keep.begin(), keep.end(), true);
  Matrix selected(u.rows(), count);
  Index c = 0;
  for (Index j = 0; j < u.cols(); ++j) {
    if (keep[j]) selected.col(c++) = u.col(j);
  }
  auto impl = std::make_shared<Impl>();
  impl->dim = u.rows();
  impl->rank = count;
  impl->payload = SpectralPayload{std::move(eigenvectors), std::move(keep), std::move(selected)};
  return Projector(std::move(impl), false);
}

Projector Projector::block_average(Index w, Index r) {
  if (w <= 0 || r <= 0) throw Error(ErrorKind::InvalidArgument, "w and r must be positive");
  if (w % r != 0) {
    throw Error(ErrorKind::BlockMismatch,
                "block factor " + std::to_string(r) + " does not divide " + std::to_string(w));
  }
  auto impl = std::make_shared<Impl>();
  impl->dim = w * w;
  impl->rank = (w / r) * (w / r);
  impl->payload = BlockPayload{w, r};
  return Projector(std::move(impl), false);
}

Projector Projector::dct_lowpass(Index w, Index k) {
  if (w <= 0 || k < 1 || k > w) {
    throw Error(ErrorKind::OutOfRange, "need 1 <= k <= w, got k=" + std::to_string(k) +
                                           " w=" + std::to_string(w));
  }
  const Matrix c = dct2_matrix(w);
  DctPayload d{w, k, std::vector<double>(k * w), std::vector<double>(w * k)};
  for (Index j = 0; j < k; ++j) {
    for (Index n = 0; n < w; ++n) {
      d.ck[j * w + n] = c(j, n);
      d.ckt[n * k + j] = c(j, n);
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->dim = w * w;
  impl->rank = k * k;
  impl->payload = std::move(d);
  return Projector(std::move(impl), false);
}

Index Projector::dim() const { return impl_->dim; }

Index Projector::rank() const { return complemented_ ? impl_->dim - impl_->rank : impl_->rank; }

ProjectorRepr Projector::repr() const {
  return static_cast<ProjectorRepr>(impl_->payload.index());
}

Vector Projector::apply_base(const Vector& v) const {
  return std::visit(
      [&](const auto& p) -> Vector {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExplicitPayload>) {
          Vector y(p.p.rows());
          kernels::gemv_colmajor(p.p.data(), static_cast<std::size_t>(p.p.rows()),
                                 static_cast<std::size_t>(p.p.cols()), cspan(v), mspan(y));
          return y;
        } else if constexpr (std::is_same_v<T, BasisPayload>) {
          if (p.q.cols() == 0) return Vector::Zero(v.size());
          return basis_project(p.q, v);
        } else if constexpr (std::is_same_v<T, MaskPayload>) {
          Vector y = Vector::Zero(v.size());
          for (Index i : p.indices) y[i] = v[i];
          return y;
        } else if constexpr (std::is_same_v<T, SpectralPayload>) {
          if (p.selected.cols() == 0) return Vector::Zero(v.size());
          return basis_project(p.selected, v);
        } else if constexpr (std::is_same_v<T, BlockPayload>) {
          return block_project(p, v);
        } else {
          return dct_synthesize(p, dct_analyze(p, v));
        }
      },
      impl_->payload);
}

Vector Projector::apply(const Vector& v) const {
  require_same_dim(v.size(), dim(), "Projector::apply");
  Vector y = apply_base(v);
  if (complemented_) y = v - y;
  return y;
}

Projector Projector::complement() const {
  if (const auto* e = std::get_if<ExplicitPayload>(&impl_->payload)) {
    auto impl = std::make_shared<Impl>();
    impl->dim = impl_->dim;
    impl->rank = impl_->dim - impl_->rank;
    impl->payload = ExplicitPayload{Matrix::Identity(impl_->dim, impl_->dim) - e->p};
    return Projector(std::move(impl), false);
  }
  if (const auto* m = std::get_if<MaskPayload>(&impl_->payload)) {
    std::vector<Index> rest;
    rest.reserve(static_cast<std::size_t>(m->dim) - m->indices.size());
    std::size_t pos = 0;
    for (Index i = 0; i < m->dim; ++i) {
      if (pos < m->indices.size() && m->indices[pos] == i) {
        ++pos;
      } else {
        rest.push_back(i);
      }
    }
    return coordinate_mask(m->dim, std::move(rest));
  }
  return Projector(impl_, !complemented_);
}

bool Projector::has_frame() const {
  if (complemented_) return false;
  return !std::holds_alternative<ExplicitPayload>(impl_->payload);
}

Index Projector::frame_size() const {
  if (!has_frame()) throw Error(ErrorKind::MissingFrame, "projector has no frame");
  return impl_->rank;
}

Vector Projector::analyze(const Vector& v) const {
  if (!has_frame()) throw Error(ErrorKind::MissingFrame, "projector has no frame");
  require_same_dim(v.size(), dim(), "Projector::analyze");
  return std::visit(
      [&](const auto& p) -> Vector {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BasisPayload>) {
          return basis_analyze(p.q, v);
        } else if constexpr (std::is_same_v<T, MaskPayload>) {
          Vector c(static_cast<Index>(p.indices.size()));
          for (std::size_t i = 0; i < p.indices.size(); ++i) c[i] = v[p.indices[i]];
          return c;
        } else if constexpr (std::is_same_v<T, SpectralPayload>) {
          return basis_analyze(p.selected, v);
        } else if constexpr (std::is_same_v<T, BlockPayload>) {
          const auto w = static_cast<std::size_t>(p.w);
          const auto r = static_cast<std::size_t>(p.r);
          Vector c((p.w / p.r) * (p.w / p.r));
          kernels::block_mean(v.data(), w, r, c.data());
          return c * static_cast<double>(p.r);
        } else if constexpr (std::is_same_v<T, DctPayload>) {
          return dct_analyze(p, v);
        } else {
          return Vector();
        }
      },
      impl_->payload);
}

Vector Projector::synthesize(const Vector& coeffs) const {
  if (!has_frame()) throw Error(ErrorKind::MissingFrame, "projector has no frame");
  require_same_dim(coeffs.size(), frame_size(), "Projector::synthesize");
  return std::visit(
      [&](const auto& p) -> Vector {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BasisPayload>) {
          return basis_synthesize(p.q, coeffs);
        } else if constexpr (std::is_same_v<T, MaskPayload>) {
          Vector y = Vector::Zero(p.dim);
          for (std::size_t i = 0; i < p.indices.size(); ++i) y[p.indices[i]] = coeffs[i];
          return y;
        } else if constexpr (std::is_same_v<T, SpectralPayload>) {
          return basis_synthesize(p.selected, coeffs);
        } else if constexpr (std::is_same_v<T, BlockPayload>) {
          const auto m = static_cast<std::size_t>(p.w / p.r);
          Vector y(p.w * p.w);
          const Vector scaled = coeffs / static_cast<double>(p.r);
          kernels::block_replicate(scaled.data(), m, static_cast<std::size_t>(p.r), y.data());
          return y;
        } else if constexpr (std::is_same_v<T, DctPayload>) {
          return dct_synthesize(p, coeffs);
        } else {
          return Vector();
        }
      },
      impl_->payload);
}

Matrix Projector::to_dense() const {
  if (const auto* e = std::get_if<ExplicitPayload>(&impl_->payload)) {
    return complemented_ ? Matrix(Matrix::Identity(dim(), dim()) - e->p) : e->p;
  }
  const Index n = dim();
  Matrix out(n, n);
  for (Index j = 0; j < n; ++j) out.col(j) = apply(Vector::Unit(n, j));
  return out;
}

Matrix Projector::range_basis() const {
  if (complemented_) {
    const Projector base(impl_, false);
    return orthogonal_complement(base.range_basis());
  }
  if (const auto* e = std::get_if<ExplicitPayload>(&impl_->payload)) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(e->p);
    std::vector<Index> cols;
    for (Index j = 0; j < e->p.cols(); ++j) {
      if (eig.eigenvalues()[j] > 0.5) cols.push_back(j);
    }
    Matrix q(dim(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) q.col(c) = eig.eigenvectors().col(cols[c]);
    return q;
  }
  if (const auto* b = std::get_if<BasisPayload>(&impl_->payload)) return b->q;
  if (const auto* s = std::get_if<SpectralPayload>(&impl_->payload)) return s->selected;
  const Index k = frame_size();
  Matrix q(dim(), k);
  for (Index j = 0; j < k; ++j) q.col(j) = synthesize(Vector::Unit(k, j));
  return q;
}

const Matrix& Projector::matrix() const {
  if (const auto* e = std::get_if<ExplicitPayload>(&impl_->payload)) return e->p;
  throw Error(ErrorKind::InvalidArgument, "not an ExplicitMatrix projector");
}

const Matrix& Projector::basis() const {
  if (const auto* b = std::get_if<BasisPayload>(&impl_->payload)) return b->q;
  throw Error(ErrorKind::InvalidArgument, "not an OrthonormalBasis projector");
}

const std::vector<Index>& Projector::mask_indices() const {
  if (const auto* m = std::get_if<MaskPayload>(&impl_->payload)) return m->indices;
  throw Error(ErrorKind::InvalidArgument, "not a CoordinateMask projector");
}

const Matrix& Projector::eigenvectors() const {
  if (const auto* s = std::get_if<SpectralPayload>(&impl_->payload)) return *s->u;
  throw Error(ErrorKind::InvalidArgument, "not a SpectralFilter projector");
}

const std::vector<bool>& Projector::spectral_keep() const {
  if (const auto* s = std::get_if<SpectralPayload>(&impl_->payload)) return s->keep;
  throw Error(ErrorKind::InvalidArgument, "not a SpectralFilter projector");
}

Index Projector::image_side() const {
  if (const auto* b = std::get_if<BlockPayload>(&impl_->payload)) return b->w;
  if (const auto* d = std::get_if<DctPayload>(&impl_->payload)) return d->w;
  throw Error(ErrorKind::InvalidArgument, "not an image projector");
}

Index Projector::block_factor() const {
  if (const auto* b = std::get_if<BlockPayload>(&impl_->payload)) return b->r;
  throw Error(ErrorKind::InvalidArgument, "not a BlockAverage projector");
}

Index Projector::lowpass_cutoff() const {
  if (const auto* d = std::get_if<DctPayload>(&impl_->payload)) return d->k;
  throw Error(ErrorKind::InvalidArgument, "not a DctLowpass projector");
}

Matrix orthonormalize(const Matrix& columns) {
  const Index n = columns.rows();
  double largest = 0.0;
  for (Index j = 0; j < columns.cols(); ++j) largest = std::max(largest, columns.col(j).norm());
  Matrix q(n, columns.cols());
  Index k = 0;
  if (largest == 0.0) return q.leftCols(0);
  for (Index j = 0; j < columns.cols(); ++j) {
    Vector v = columns.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < k; ++i) v -= q.col(i).dot(v) * q.col(i);
    }
    const double norm = v.norm();
    if (norm <= kRankCutoff * largest) continue;
    q.col(k++) = v / norm;
  }
  return q.leftCols(k);
}

Projector projector_from_basis(const Matrix& columns) {
  if (columns.cols() == 0 || columns.rows() == 0) {
    throw Error(ErrorKind::RankDeficient, "empty frame");
  }
  if (columns.cols() > columns.rows()) {
    // Still valid input: the span just cannot exceed the ambient dimension.
  }
  Matrix q = orthonormalize(columns);
  if (q.cols() == 0) throw Error(ErrorKind::RankDeficient, "frame spans only the zero vector");
  return Projector::orthonormal_basis(std::move(q));
}

Matrix orthogonal_complement(const Matrix& q) {
  const Index n = q.rows();
  const Index k = q.cols();
  if (k == 0) return Matrix::Identity(n, n);
  if (k >= n) return Matrix(n, 0);
  Eigen::HouseholderQR<Matrix> qr(q);
  Matrix full = qr.householderQ() * Matrix::Identity(n, n);
  return full.rightCols(n - k);
}

Matrix dct2_matrix(Index w) {
  Matrix c(w, w);
  const double a0 = std::sqrt(1.0 / static_cast<double>(w));
  const double a = std::sqrt(2.0 / static_cast<double>(w));
  for (Index j = 0; j < w; ++j) {
    for (Index n = 0; n < w; ++n) {
      c(j, n) = (j == 0 ? a0 : a) *
                std::cos(std::numbers::pi * static_cast<double>((2 * n + 1) * j) /
                         static_cast<double>(2 * w));
    }
  }
  return c;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NoObliqueProjection: return "NoObliqueProjection";
    case ErrorKind::EmptySubspace: return "EmptySubspace";
    case ErrorKind::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorKind::DivergentBound: return "DivergentBound";
    case ErrorKind::MissingFrame: return "MissingFrame";
    case ErrorKind::MissingPrerequisite: return "MissingPrerequisite";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NotComplementary: return "NotComplementary";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::IllPosed: return "IllPosed";
    case ErrorKind::IsolatedNode: return "IsolatedNode";
    case ErrorKind::BlockMismatch: return "BlockMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace guided
