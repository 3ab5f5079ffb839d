#pragma once

#include "guided/common.hpp"

#include <memory>
#include <string_view>
#include <vector>

namespace guided {

enum class ProjectorRepr {
  ExplicitMatrix,    // dense symmetric dim x dim
  OrthonormalBasis,  // P = Q Q^T
  CoordinateMask,    // keeps a subset of coordinates
  SpectralFilter,    // eigenbasis U with a 0/1 indicator per eigenvalue
  BlockAverage,      // w x w image, replace each r x r block by its mean
  DctLowpass,        // w x w image, keep the lowest k x k orthonormal DCT-II coefficients
};

std::string_view to_string(ProjectorRepr repr);
ProjectorRepr projector_repr_from_string(std::string_view name);

/// Orthogonal projector onto a subspace of R^dim.
///
/// Immutable; copies share the payload. Matrix-free by default: `apply` never
/// forms a dim x dim matrix except for the ExplicitMatrix representation.
/// A complemented projector applies `v - P v` by subtraction.
///
/// Some representations carry an orthonormal frame of their range
/// (`analyze` maps to frame coefficients, `synthesize` maps back). The
/// frame is what frame-based guided reconstruction needs.
class Projector {
 public:
  static Projector explicit_matrix(Matrix p);
  /// `q` must already have orthonormal columns (checked at kProjectorTol).
  static Projector orthonormal_basis(Matrix q);
  /// Zero-based coordinate indices; duplicates are ignored.
  static Projector coordinate_mask(Index dim, std::vector<Index> indices);
  static Projector spectral_filter(std::shared_ptr<const Matrix> eigenvectors, std::vector<bool> keep);
  static Projector block_average(Index w, Index r);
  static Projector dct_lowpass(Index w, Index k);

  Index dim() const;
  Index rank() const;
  ProjectorRepr repr() const;
  bool is_complement() const { return complemented_; }

  Vector apply(const Vector& v) const;
  Vector operator()(const Vector& v) const { return apply(v); }
  Projector complement() const;

  bool has_frame() const;
  Index frame_size() const;
  Vector analyze(const Vector& v) const;
  Vector synthesize(const Vector& coeffs) const;

  /// Dense dim x dim matrix. Intended for small problems and tests.
  Matrix to_dense() const;
  /// Orthonormal dim x rank basis of the range.
  Matrix range_basis() const;

  // Payload access, mainly for serialization. Each throws InvalidArgument
  // when called on the wrong representation.
  const Matrix& matrix() const;
  const Matrix& basis() const;
  const std::vector<Index>& mask_indices() const;
  const Matrix& eigenvectors() const;
  const std::vector<bool>& spectral_keep() const;
  Index image_side() const;
  Index block_factor() const;
  Index lowpass_cutoff() const;

  struct Impl;

 private:
  Projector(std::shared_ptr<const Impl> impl, bool complemented)
      : impl_(std::move(impl)), complemented_(complemented) {}

  Vector apply_base(const Vector& v) const;

  std::shared_ptr<const Impl> impl_;
  bool complemented_ = false;
};

/// Modified Gram-Schmidt with one re-orthogonalization pass. Columns whose
/// residual falls below kRankCutoff times the largest input column norm are
/// dropped. Returns dim x rank.
Matrix orthonormalize(const Matrix& columns);

/// Orthonormalize a frame and wrap it as an OrthonormalBasis projector.
/// Throws RankDeficient when the columns span only {0}.
Projector projector_from_basis(const Matrix& columns);

/// Orthonormal basis of the orthogonal complement of span(q), q orthonormal.
Matrix orthogonal_complement(const Matrix& q);

/// Orthonormal DCT-II matrix, row j holds basis function j sampled at n = 0..w-1.
Matrix dct2_matrix(Index w);

}  // namespace guided
