#include "guided/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace guided {

SubspaceBasis::SubspaceBasis(Matrix columns) : q_(std::move(columns)) {
  if (q_.cols() > q_.rows()) throw Error(ErrorKind::InvalidArgument, "more columns than rows");
  if (q_.cols() > 0) {
    const Matrix gram = q_.transpose() * q_;
    if ((gram - Matrix::Identity(q_.cols(), q_.cols())).cwiseAbs().maxCoeff() > kProjectorTol) {
      throw Error(ErrorKind::InvalidArgument, "basis columns are not orthonormal");
    }
  }
}

SubspaceBasis SubspaceBasis::trivial(Index dim) {
  SubspaceBasis b;
  b.q_ = Matrix(dim, 0);
  return b;
}

SubspaceBasis SubspaceBasis::span_of(const Matrix& frame) {
  SubspaceBasis b;
  b.q_ = orthonormalize(frame);
  return b;
}

SubspaceBasis SubspaceBasis::range_of(const Projector& p) {
  SubspaceBasis b;
  b.q_ = p.range_basis();
  return b;
}

SubspaceBasis SubspaceBasis::orthogonal_complement() const {
  SubspaceBasis b;
  b.q_ = guided::orthogonal_complement(q_);
  return b;
}

namespace {

// Singular values of a^T b, largest first, clamped to [0,1].
Vector cosines(const Matrix& a, const Matrix& b) {
  const Matrix m = a.transpose() * b;
  Eigen::JacobiSVD<Matrix> svd(m);
  Vector s = svd.singularValues();
  for (Index i = 0; i < s.size(); ++i) s[i] = std::clamp(s[i], 0.0, 1.0);
  return s;
}

double to_angle(double c) { return std::acos(std::clamp(c, 0.0, 1.0)); }

}  // namespace

std::vector<double> directed_angles(const SubspaceBasis& a, const SubspaceBasis& b) {
  require_same_dim(a.dim(), b.dim(), "directed_angles");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(a.k()));
  if (!b.empty() && !a.empty()) {
    const Vector s = cosines(a.columns(), b.columns());
    for (Index i = 0; i < s.size(); ++i) out.push_back(to_angle(s[i]));
  }
  while (static_cast<Index>(out.size()) < a.k()) out.push_back(std::numbers::pi / 2);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<double> intersect_angles(std::vector<double> x, std::vector<double> y, double tol) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::vector<double> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() && j < y.size()) {
    if (std::abs(x[i] - y[j]) <= tol) {
      out.push_back(0.5 * (x[i] + y[j]));
      ++i;
      ++j;
    } else if (x[i] < y[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

AngleReport principal_angles(const SubspaceBasis& a, const SubspaceBasis& b) {
  require_same_dim(a.dim(), b.dim(), "principal_angles");
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySubspace, "principal_angles of {0}");

  AngleReport rep;
  // The angles from a to b and from b to a share the min(ka,kb) SVD angles;
  // the padding pi/2 entries only survive where both sides have them.
  rep.angles = intersect_angles(directed_angles(a, b), directed_angles(b, a));
  const Vector s = cosines(a.columns(), b.columns());

  // theta_max: largest angle that is not pi/2; its cosine is taken straight
  // from the singular value to avoid an acos/cos round trip.
  double cmax = -1.0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] >= kAngleTol) {
      cmax = cmax < 0 ? s[i] : std::min(cmax, s[i]);
    }
  }
  if (cmax < 0) {
    rep.all_orthogonal = true;
    rep.theta_max = 0.0;
    rep.cos_theta_max = 1.0;
  } else {
    rep.theta_max = to_angle(cmax);
    rep.cos_theta_max = std::cos(rep.theta_max);
  }

  // Smallest angle that is not 0.
  double cmin = -1.0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] <= 1.0 - kAngleTol) cmin = std::max(cmin, s[i]);
  }
  if (cmin < 0) {
    rep.no_nonzero_angle = true;
    rep.minimal_gap = 1.0;
  } else {
    rep.minimal_gap = std::sin(to_angle(cmin));
  }

  rep.condition_bound = rep.cos_theta_max > 0
                            ? 1.0 / (rep.cos_theta_max * rep.cos_theta_max)
                            : std::numeric_limits<double>::infinity();
  return rep;
}

SubspaceBasis intersection_basis(const SubspaceBasis& a, const SubspaceBasis& b) {
  require_same_dim(a.dim(), b.dim(), "intersection_basis");
  if (a.empty() || b.empty()) return SubspaceBasis::trivial(a.dim());
  const Matrix m = a.columns().transpose() * b.columns();
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  Index count = 0;
  while (count < s.size() && s[count] >= 1.0 - kIntersectTol) ++count;
  if (count == 0) return SubspaceBasis::trivial(a.dim());
  // a U_i are orthonormal already; one cleanup pass keeps the check strict.
  return SubspaceBasis::span_of(a.columns() * svd.matrixU().leftCols(count));
}

Matrix pseudo_inverse(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return Matrix::Zero(a.cols(), a.rows());
  const double cut = kRankCutoff * s[0];
  Vector inv(s.size());
  for (Index i = 0; i < s.size(); ++i) inv[i] = s[i] > cut ? 1.0 / s[i] : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Projector anderson_duffin(const Projector& m, const Projector& s_perp) {
  require_same_dim(m.dim(), s_perp.dim(), "anderson_duffin");
  const Matrix pm = m.to_dense();
  const Matrix pn = s_perp.to_dense();
  Matrix f = 2.0 * pm * pseudo_inverse(pm + pn) * pn;
  f = 0.5 * (f + f.transpose());
  return Projector::explicit_matrix(std::move(f));
}

HalmosDecomposition halmos(const SubspaceBasis& s, const SubspaceBasis& t) {
  require_same_dim(s.dim(), t.dim(), "halmos");
  const SubspaceBasis s_perp = s.orthogonal_complement();
  const SubspaceBasis t_perp = t.orthogonal_complement();
  SubspaceBasis st = intersection_basis(s, t);
  SubspaceBasis st_perp = intersection_basis(s, t_perp);
  SubspaceBasis sperp_t = intersection_basis(s_perp, t);
  SubspaceBasis sperp_tperp = intersection_basis(s_perp, t_perp);

  const Index n = s.dim();
  Matrix all(n, st.k() + st_perp.k() + sperp_t.k() + sperp_tperp.k());
  Index c = 0;
  for (const SubspaceBasis* b : {&st, &st_perp, &sperp_t, &sperp_tperp}) {
    all.middleCols(c, b->k()) = b->columns();
    c += b->k();
  }
  // The four pieces are orthogonal in exact arithmetic; re-orthonormalize
  // anyway so the complement is taken against a clean basis.
  SubspaceBasis b0(guided::orthogonal_complement(orthonormalize(all)));

  return HalmosDecomposition{st,
                             st_perp,
                             sperp_t,
                             sperp_tperp,
                             b0,
                             st.projector(),
                             st_perp.projector(),
                             sperp_t.projector(),
                             sperp_tperp.projector(),
                             b0.projector()};
}

Vector oblique_project(const Vector& f, const SubspaceBasis& onto,
                       const SubspaceBasis& along_complement_of) {
  require_same_dim(f.size(), onto.dim(), "oblique_project");
  require_same_dim(f.size(), along_complement_of.dim(), "oblique_project");
  if (onto.empty()) throw Error(ErrorKind::NoObliqueProjection, "target subspace is {0}");
  const Matrix& bt = onto.columns();
  const Matrix& bs = along_complement_of.columns();
  // S B_T in coordinates: (B_S^T B_T); normal equations (B_T^T S B_T) y = B_T^T S f.
  const Matrix sbt = bs * (bs.transpose() * bt);
  const Vector sf = bs * (bs.transpose() * f);
  const Matrix a = bt.transpose() * sbt;
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(kRankCutoff);
  if (lu.rank() < a.rows()) {
    throw Error(ErrorKind::NoObliqueProjection, "T meets the complement of S; system is singular");
  }
  const Vector y = lu.solve(bt.transpose() * sf);
  const Vector t = bt * y;
  const Vector resid = bs.transpose() * (f - t);
  if (resid.norm() > 1e-9 * std::max(1.0, f.norm())) {
    throw Error(ErrorKind::NoObliqueProjection, "no element of T matches the sample of f");
  }
  return t;
}

}  // namespace guided
