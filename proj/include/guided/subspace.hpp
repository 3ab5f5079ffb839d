#pragma once

#include "guided/common.hpp"
#include "guided/projector.hpp"

#include <array>
#include <vector>

namespace guided {

/// Orthonormal column basis of a subspace of R^dim. k = 0 is allowed and
/// stands for the trivial subspace {0}.
class SubspaceBasis {
 public:
  SubspaceBasis() = default;
  /// Columns must already be orthonormal (checked at kProjectorTol).
  explicit SubspaceBasis(Matrix columns);
  /// Zero-column basis in R^dim.
  static SubspaceBasis trivial(Index dim);
  /// Orthonormalize an arbitrary spanning set. May return k = 0.
  static SubspaceBasis span_of(const Matrix& frame);
  /// Basis of the range of a projector.
  static SubspaceBasis range_of(const Projector& p);

  Index dim() const { return q_.rows(); }
  Index k() const { return q_.cols(); }
  bool empty() const { return q_.cols() == 0; }
  const Matrix& columns() const { return q_; }

  Projector projector() const { return Projector::orthonormal_basis(q_); }
  SubspaceBasis orthogonal_complement() const;

 private:
  Matrix q_;
};

struct AngleReport {
  std::vector<double> angles;  // radians, nonincreasing
  double theta_max = 0.0;
  double cos_theta_max = 1.0;
  double minimal_gap = 1.0;
  double condition_bound = 1.0;
  // Degenerate-convention flags: every angle was pi/2, or every angle was 0.
  bool all_orthogonal = false;
  bool no_nonzero_angle = false;
};

/// Angles between span(a) and span(b), with theta_max and the minimal gap.
/// Throws EmptySubspace if either side is {0}.
AngleReport principal_angles(const SubspaceBasis& a, const SubspaceBasis& b);

/// Angles "from a to b": arccos of the square roots of the spectrum of
/// (P_a P_b) restricted to span(a). Has a.k() entries, padded with pi/2.
std::vector<double> directed_angles(const SubspaceBasis& a, const SubspaceBasis& b);

/// Multiset intersection of two angle lists, matching within `tol`.
/// Result is sorted nonincreasing.
std::vector<double> intersect_angles(std::vector<double> x, std::vector<double> y,
                                     double tol = kAngleMatchTol);

SubspaceBasis intersection_basis(const SubspaceBasis& a, const SubspaceBasis& b);

/// Orthogonal projector onto range(m) ∩ range(s_perp) via 2 M (M + N)^+ N.
/// Always explicit (dense); meant for small dims.
Projector anderson_duffin(const Projector& m, const Projector& s_perp);

/// Moore-Penrose pseudo-inverse with singular values below
/// kRankCutoff * sigma_max treated as zero.
Matrix pseudo_inverse(const Matrix& a);

struct HalmosDecomposition {
  // S∩T, S∩T⊥, S⊥∩T, S⊥∩T⊥, H0.
  SubspaceBasis b_st, b_st_perp, b_sperp_t, b_sperp_tperp, b0;
  Projector p_st, p_st_perp, p_sperp_t, p_sperp_tperp, p0;

  std::array<Index, 5> dims() const {
    return {b_st.k(), b_st_perp.k(), b_sperp_t.k(), b_sperp_tperp.k(), b0.k()};
  }
};

HalmosDecomposition halmos(const SubspaceBasis& s, const SubspaceBasis& t);

/// Oblique projection of f onto `onto` along the orthogonal complement of
/// `along_complement_of`. Throws NoObliqueProjection when no such element
/// exists for this f.
Vector oblique_project(const Vector& f, const SubspaceBasis& onto,
                       const SubspaceBasis& along_complement_of);

}  // namespace guided
