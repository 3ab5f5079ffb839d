#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace guided {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Absolute tolerance for projector laws on unit-norm inputs.
inline constexpr double kProjectorTol = 1e-10;
/// Rank cutoff relative to the largest column norm / singular value.
inline constexpr double kRankCutoff = 1e-10;
/// An angle is 0 when cos > 1 - kAngleTol and pi/2 when cos < kAngleTol.
inline constexpr double kAngleTol = 1e-10;
/// Singular values of Q_a^T Q_b at or above 1 - kIntersectTol span a ∩ b.
inline constexpr double kIntersectTol = 1e-8;
/// Tolerance for matching angle multisets.
inline constexpr double kAngleMatchTol = 1e-8;
/// Reconstruction invariants on unit-normalized problems.
inline constexpr double kReconTol = 1e-8;

enum class ErrorKind {
  RankDeficient,
  DimensionMismatch,
  NoObliqueProjection,
  EmptySubspace,
  NumericalBreakdown,
  DivergentBound,
  MissingFrame,
  MissingPrerequisite,
  OutOfRange,
  NotComplementary,
  HypothesisViolated,
  IllPosed,
  IsolatedNode,
  BlockMismatch,
  InvalidArgument,
  Io,
  Parse,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require_same_dim(Index a, Index b, const char* where) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(where) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

bool all_finite(const Vector& v);

}  // namespace guided
