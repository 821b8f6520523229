#pragma once

#include <cstddef>
#include <vector>

#include "lg/geometry.hpp"

namespace lg {

inline constexpr std::size_t kMaxHullDimension = 8;

struct HalfSpace {
  Vector normal;  // unit length
  double offset = 0.0;
};

// {x : <a_i, x> <= b_i for all i}. A lower-dimensional hull carries paired
// opposing constraints across each missing direction. origin/basis describe
// the affine hull so callers can sample inside it.
struct HullRepresentation {
  std::size_t dimension = 0;
  std::vector<HalfSpace> constraints;
  Vector origin;
  std::vector<Vector> basis;  // orthonormal, size = affine dimension

  std::size_t affine_dimension() const { return basis.size(); }
};

HullRepresentation convex_hull(const std::vector<Vector>& points);
bool hull_contains(const HullRepresentation& h, const Vector& x, const Tolerances& tol);

// Constraint-wise intersection; the affine frame is dropped.
HullRepresentation hull_intersection(const HullRepresentation& a, const HullRepresentation& b);

}  // namespace lg
