#pragma once

#include <array>

#include "vicsek/vsgraph.hpp"

namespace vicsek {

/// A point of the skeleton given by its arm, the diagonal attachment
/// distance s = d'(., q0) in [0, 1], the path distance `offset` from the
/// attachment point into the hanging tree (0 on the diagonal), and an
/// optional branch word locating the tree branch. Letter i of the word is a
/// junction choice at depth i; it contributes one cell scale to common-path
/// lengths.
struct SkeletonPoint {
  int arm = 1;
  double s = 0.0;
  double offset = 0.0;
  std::vector<int> branch_path;
};

/// Dirichlet Green's function on the skeleton with arms normalized to
/// length 1: product form across arms, piecewise linear along the source
/// path, constant on hanging trees.
double green_eval(const VicsekParams& params, const SkeletonPoint& x, const SkeletonPoint& y);

/// G(., y) sampled at every vertex of the graph. y must lie on a diagonal
/// (offset 0) or coincide with a vertex of g given by `y_vertex`.
FunctionOnGraph green_field(const GraphApprox& g, const SkeletonPoint& y);
FunctionOnGraph green_field_at_vertex(const GraphApprox& g, int32_t y_vertex);

/// Residuals of the three defining balance equations at (a, b, c) produced
/// by the closed form, for attachment distance s in (0,1) and tree offset
/// t >= 0.
struct GreenVerification {
  double a = 0, b = 0, c = 0;
  std::array<double, 3> residuals{};
};
GreenVerification green_verify(double s, double t);

/// Arm, attachment distance and tree offset of every vertex, derived from
/// geodesic distances (exact multiples of 1/scale).
struct VertexSkeletonData {
  std::vector<int> arm;
  Vec s;
  Vec offset;
};
VertexSkeletonData vertex_skeleton_data(const GraphApprox& g);

}  // namespace vicsek
