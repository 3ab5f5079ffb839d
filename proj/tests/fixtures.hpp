#pragma once

#include "guided/random_instances.hpp"
#include "guided/reconstruction.hpp"

#include <initializer_list>
#include <utility>

namespace fixtures {

using namespace guided;

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Matrix col(std::initializer_list<double> xs) { return vec(xs); }

// S = span(e1), T = span(e1 + a e2).
inline ReconstructionProblem two_dim(double a, const Vector& f) {
  Matrix t(2, 1);
  t << 1, a;
  return ReconstructionProblem::from_signal(Projector::coordinate_mask(2, {0}),
                                            projector_from_basis(t), f);
}

// S = span(e1, e2), T = span(e1 + a e3).
inline ReconstructionProblem three_dim(double a, const Vector& f) {
  Matrix t(3, 1);
  t << 1, 0, a;
  return ReconstructionProblem::from_signal(Projector::coordinate_mask(3, {0, 1}),
                                            projector_from_basis(t), f);
}

// S = span(e1, e3, e5, e6), T = span(e1 + a e2, e3 + b e4, e5, e7).
inline std::pair<SubspaceBasis, SubspaceBasis> eight_dim_bases(double a, double b) {
  Matrix s = Matrix::Zero(8, 4);
  s(0, 0) = s(2, 1) = s(4, 2) = s(5, 3) = 1.0;
  Matrix t = Matrix::Zero(8, 4);
  t(0, 0) = 1.0;
  t(1, 0) = a;
  t(2, 1) = 1.0;
  t(3, 1) = b;
  t(4, 2) = 1.0;
  t(6, 3) = 1.0;
  return {SubspaceBasis::span_of(s), SubspaceBasis::span_of(t)};
}

inline ReconstructionProblem eight_dim(double a, double b, const Vector& f) {
  auto [s, t] = eight_dim_bases(a, b);
  return ReconstructionProblem::from_signal(s.projector(), t.projector(), f);
}

struct RandomProblem {
  ReconstructionProblem p;
  Vector f;
  StructuredPair pair;
};

inline RandomProblem random_problem(CounterRng& rng, Index dim, Index max_intersection = 2,
                                    double min_angle = 0.25, double max_angle = 1.3) {
  const HalmosShape shape = random_shape(rng, dim, max_intersection, min_angle, max_angle);
  StructuredPair pair = random_structured_pair(rng, shape);
  Vector f = random_vector(rng, dim);
  auto p = ReconstructionProblem::from_signal(pair.s.projector(), pair.t.projector(), f);
  return {std::move(p), std::move(f), std::move(pair)};
}

inline double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace fixtures
