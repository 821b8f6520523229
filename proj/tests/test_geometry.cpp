#include <cmath>

#include "doctest.h"
#include "lg/errors.hpp"
#include "lg/geometry.hpp"

using namespace lg;

TEST_CASE("vector arithmetic and norms") {
  const Vector a{1.0, 2.0, 2.0};
  const Vector b{0.0, 0.0, 0.0};
  CHECK(norm(a) == doctest::Approx(3.0));
  CHECK(distance(a, b) == doctest::Approx(3.0));
  CHECK(dot(a, Vector{1.0, 0.0, 1.0}) == doctest::Approx(3.0));
  CHECK((a + a) == Vector{2.0, 4.0, 4.0});
  CHECK((a - a) == b);
  CHECK((0.5 * a) == Vector{0.5, 1.0, 1.0});
  CHECK(lerp(b, a, 0.5) == Vector{0.5, 1.0, 1.0});
}

TEST_CASE("mismatched dimensions throw") {
  CHECK_THROWS_AS(distance(Vector{1.0}, Vector{1.0, 2.0}), DimensionError);
  CHECK_THROWS_AS(dot(Vector{1.0}, Vector{1.0, 2.0}), DimensionError);
  CHECK_THROWS_AS(path_length({Vector{0.0}, Vector{0.0, 1.0}}), DimensionError);
}

TEST_CASE("polygonal length sums consecutive gaps") {
  CHECK(path_length({Vector{0.0, 0.0}, Vector{3.0, 4.0}, Vector{3.0, 4.0}, Vector{3.0, 5.0}}) ==
        doctest::Approx(6.0));
  CHECK(path_length({Vector{7.0}}) == 0.0);
  CHECK_THROWS_AS(path_length({}), ArgumentError);
}

TEST_CASE("monotone straight predicate") {
  const Tolerances tol;
  CHECK(is_monotone_straight({Vector{0.0, 0.0}, Vector{1.0, 1.0}, Vector{2.0, 2.0}}, tol));
  CHECK(is_monotone_straight({Vector{0.0, 0.0}, Vector{1.0, 1.0}, Vector{1.0, 1.0}, Vector{3.0, 3.0}}, tol));
  CHECK(is_monotone_straight({Vector{4.0}, Vector{4.0}}, tol));
  // Backtracking along the line is not monotone.
  CHECK_FALSE(is_monotone_straight({Vector{0.0}, Vector{2.0}, Vector{1.0}}, tol));
  // A detour off the segment.
  CHECK_FALSE(is_monotone_straight({Vector{0.0, 0.0}, Vector{1.0, 1.0}, Vector{2.0, 0.0}}, tol));
  // The 1e-3 bump adds about 1e-6 of length.
  const PolyPathImage bump{Vector{0.0, 0.0}, Vector{1.0, 1e-3}, Vector{2.0, 0.0}};
  CHECK_FALSE(is_monotone_straight(bump, tol));
  CHECK(is_monotone_straight(bump, Tolerances{1e-6, 1e-9, 0, 1e-9}));
}

TEST_CASE("straight length form uses relative slack") {
  CHECK(is_straight_length(1000.0 + 1e-7, 1000.0, 1e-9));
  CHECK_FALSE(is_straight_length(1000.0 + 1e-5, 1000.0, 1e-9));
  CHECK(is_straight_length(1e-10, 0.0, 1e-9));
  CHECK_FALSE(is_straight_length(1e-8, 0.0, 1e-9));
}

TEST_CASE("collinear midpoint") {
  const Tolerances tol;
  CHECK(are_collinear_midpoint(Vector{0.0, 0.0}, Vector{1.0, 2.0}, Vector{2.0, 4.0}, tol));
  CHECK_FALSE(are_collinear_midpoint(Vector{0.0, 0.0}, Vector{1.0, 2.1}, Vector{2.0, 4.0}, tol));
  CHECK_FALSE(are_collinear_midpoint(Vector{0.0, 0.0}, Vector{3.0, 6.0}, Vector{2.0, 4.0}, tol));
}

TEST_CASE("tolerance validation") {
  Tolerances t;
  CHECK_NOTHROW(t.validate());
  t.eta_hull = -1.0;
  CHECK_THROWS_AS(t.validate(), ArgumentError);
  t.eta_hull = std::nan("");
  CHECK_THROWS_AS(t.validate(), ArgumentError);
}
