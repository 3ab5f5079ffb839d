#pragma once

#include "guided/common.hpp"
#include "guided/projector.hpp"
#include "guided/solvers.hpp"
#include "guided/subspace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace guided {

/// Geometry (angles between range S and range T) is only computed up to this
/// ambient dimension; above it the dense SVD costs more than the solve.
inline constexpr Index kGeometryMaxDim = 1024;

struct ReconstructionProblem {
  Projector s;
  Projector t;
  Vector sf;
  std::optional<double> noise_norm;

  /// Build from a known signal: sf = S f.
  static ReconstructionProblem from_signal(const Projector& s, const Projector& t, const Vector& f);
  /// Throws on dimension mismatch or when sf is not in range(S).
  void validate() const;
};

struct ReconstructionResult {
  Vector f_consistent;
  Vector t_guided;  // T f_consistent
  std::optional<double> alpha;
  std::optional<Vector> f_alpha;
  SolveResult solver;
  std::optional<AngleReport> geometry;
  double gap_distance = 0.0;  // ||P_{S∩T⊥} f_consistent|| = ||T⊥ f_consistent||
  std::vector<std::string> warnings;
};

ReconstructionResult consistent_reconstruct(const ReconstructionProblem& p,
                                            const SolveOptions& opts = {});

enum class GuidedImpl { G1Frame, G2Projector, G3FromConsistent };

struct GuidedResult {
  Vector t;
  SolveResult solve;  // empty for G3
};

/// Strictly guided reconstruction t̂ with T S (t̂ - f) = 0.
/// G3 needs `prior` (a consistent result); G1 needs T to carry a frame.
GuidedResult guided_reconstruct(const ReconstructionProblem& p, GuidedImpl impl,
                                const SolveOptions& opts = {},
                                const ReconstructionResult* prior = nullptr);

/// alpha f_c + (1 - alpha) t_hat.
Vector blend(const Vector& f_c, const Vector& t_hat, double alpha);

struct RegularizedResult {
  Vector f;
  SolveResult solve;
  // S⊥∩T is nontrivial, so the operator is singular and f is the
  // minimum-norm solution. Only detected when dim <= kGeometryMaxDim.
  bool singular = false;
};

/// Solves (S + rho T⊥) f = sf by CG.
RegularizedResult regularized_reconstruct(const ReconstructionProblem& p, double rho,
                                          const SolveOptions& opts = {});

inline double rho_from_alpha(double alpha) { return (1.0 - alpha) / alpha; }
inline double alpha_from_rho(double rho) { return 1.0 / (1.0 + rho); }

struct AlphaSelection {
  double alpha = 1.0;          // 1 - ||n|| / ||f - T f|| clamped to [0,1]
  double alpha_squared = 1.0;  // 1 - ||n||^2 / ||f - T f||^2 clamped to [0,1]
  double distance = 0.0;       // ||f - T f||
  bool intersection_exists = false;  // distance is 0: the plane meets T
};

AlphaSelection select_alpha(const ReconstructionProblem& p, const Vector& f_c);

/// T sf, no iteration.
Vector minimax_regret(const ReconstructionProblem& p);

struct SubspaceReconstruction {
  Vector f;
  Vector x;  // in M ∩ S⊥
  SolveResult solve;
};

/// Reconstruction with the missing part restricted to span(m). M must be
/// complementary to S⊥∩T. Dense; for small dims.
SubspaceReconstruction reconstruct_in_subspace(const ReconstructionProblem& p,
                                               const SubspaceBasis& m,
                                               const SolveOptions& opts = {});

struct BoundReport {
  double cos_theta_max = 1.0;
  double x_norm = 0.0;
  double cos_bound = 0.0;
  double tan_bound = 0.0;
  double fn_norm_sq = 0.0;
  double fnog_bound = 0.0;
  double err_measured = 0.0;
  double err_bound_cos2 = 0.0;
  double err_bound_cos1 = 0.0;
  // |lhs - rhs| of the two error identities.
  double identity_m_residual = 0.0;
  double identity_n_residual = 0.0;

  /// Every measured value <= bound * (1 + rel_tol) + abs_tol.
  bool all_hold(double rel_tol = 1e-8, double abs_tol = 1e-12) const;
};

/// Diagnostic: needs the true signal. Throws IllPosed when cos(theta_max) = 0.
BoundReport evaluate_bounds(const ReconstructionProblem& p, const Vector& f_true,
                            const ReconstructionResult& result, const HalmosDecomposition& h);

struct QuotientCheck {
  bool holds = false;
  double decomposition_residual = 0.0;  // ||f̂ - (f̂_g + P_{S∩T⊥} f)||
  double oblique_residual = 0.0;        // ||f̂_g - oblique projection of reduced f||
};

/// Throws HypothesisViolated when S⊥∩T is nontrivial.
QuotientCheck verify_quotient_equivalence(const ReconstructionProblem& p, const Vector& f_true,
                                          const SolveOptions& opts = {}, double tol = 1e-8);

}  // namespace guided
