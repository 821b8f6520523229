#include <random>

#include "doctest.h"
#include "lg/errors.hpp"
#include "lg/hull.hpp"

using namespace lg;

TEST_CASE("unit square hull") {
  const auto h = convex_hull({Vector{0.0, 0.0}, Vector{1.0, 0.0}, Vector{1.0, 1.0}, Vector{0.0, 1.0},
                              Vector{0.5, 0.5}});
  const Tolerances tol;
  CHECK(h.affine_dimension() == 2);
  CHECK(h.constraints.size() == 4);
  CHECK(hull_contains(h, Vector{0.5, 0.5}, tol));
  CHECK(hull_contains(h, Vector{1.0, 1.0}, tol));
  CHECK_FALSE(hull_contains(h, Vector{1.5, 0.5}, tol));
  CHECK_FALSE(hull_contains(h, Vector{-1e-6, 0.5}, tol));
}

TEST_CASE("cube hull merges coplanar facets") {
  std::vector<Vector> pts;
  for (int m = 0; m < 8; ++m) pts.push_back(Vector{double(m & 1), double((m >> 1) & 1), double((m >> 2) & 1)});
  const auto h = convex_hull(pts);
  CHECK(h.affine_dimension() == 3);
  CHECK(h.constraints.size() == 6);
}

TEST_CASE("degenerate hulls keep their affine hull") {
  const Tolerances tol;
  const auto seg = convex_hull({Vector{0.0, 0.0}, Vector{1.0, 1.0}, Vector{2.0, 2.0}});
  CHECK(seg.affine_dimension() == 1);
  CHECK(hull_contains(seg, Vector{1.5, 1.5}, tol));
  CHECK_FALSE(hull_contains(seg, Vector{1.5, 1.0}, tol));
  CHECK_FALSE(hull_contains(seg, Vector{2.5, 2.5}, tol));
  const auto pt = convex_hull({Vector{3.0, 1.0, 2.0}, Vector{3.0, 1.0, 2.0}});
  CHECK(pt.affine_dimension() == 0);
  CHECK(hull_contains(pt, Vector{3.0, 1.0, 2.0}, tol));
  CHECK_FALSE(hull_contains(pt, Vector{3.0, 1.0, 2.1}, tol));
  const auto flat = convex_hull({Vector{0.0, 0.0, 1.0}, Vector{1.0, 0.0, 1.0}, Vector{0.0, 1.0, 1.0}});
  CHECK(flat.affine_dimension() == 2);
  CHECK(hull_contains(flat, Vector{0.2, 0.2, 1.0}, tol));
  CHECK_FALSE(hull_contains(flat, Vector{0.2, 0.2, 1.1}, tol));
}

TEST_CASE("random point clouds: inputs inside, pushed extreme points outside") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  const Tolerances tol;
  for (int dim = 2; dim <= 4; ++dim) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Vector> pts;
      for (int i = 0; i < 40; ++i) {
        std::vector<double> c(static_cast<std::size_t>(dim));
        for (double& x : c) x = g(rng);
        pts.emplace_back(c);
      }
      const auto h = convex_hull(pts);
      Vector centroid(static_cast<std::size_t>(dim), 0.0);
      for (const Vector& p : pts) {
        CHECK(hull_contains(h, p, tol));
        centroid += (1.0 / pts.size()) * p;
      }
      CHECK(hull_contains(h, centroid, tol));
      // The maximiser of a random direction is extreme; stepping past it along
      // that direction leaves the hull.
      std::vector<double> dir(static_cast<std::size_t>(dim));
      for (double& x : dir) x = g(rng);
      const Vector d(dir);
      const Vector* best = &pts.front();
      for (const Vector& p : pts) {
        if (dot(p, d) > dot(*best, d)) best = &p;
      }
      CHECK_FALSE(hull_contains(h, *best + (0.01 / norm(d)) * d, tol));
    }
  }
}

TEST_CASE("hull errors and intersection") {
  CHECK_THROWS_AS(convex_hull({}), ArgumentError);
  CHECK_THROWS_AS(convex_hull({Vector(9, 0.0)}), ArgumentError);
  CHECK_THROWS_AS(convex_hull({Vector{0.0}, Vector{0.0, 1.0}}), DimensionError);
  const auto a = convex_hull({Vector{0.0, 0.0}, Vector{2.0, 0.0}, Vector{0.0, 2.0}, Vector{2.0, 2.0}});
  const auto b = convex_hull({Vector{1.0, 1.0}, Vector{3.0, 1.0}, Vector{1.0, 3.0}, Vector{3.0, 3.0}});
  const auto i = hull_intersection(a, b);
  const Tolerances tol;
  CHECK(hull_contains(i, Vector{1.5, 1.5}, tol));
  CHECK_FALSE(hull_contains(i, Vector{0.5, 0.5}, tol));
  CHECK_FALSE(hull_contains(i, Vector{2.5, 2.5}, tol));
}
