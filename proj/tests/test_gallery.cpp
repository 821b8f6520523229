#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lg/errors.hpp"
#include "lg/gallery.hpp"
#include "lg/psi_metric.hpp"
#include "lg/verifier.hpp"
#include "support.hpp"

using namespace lg;
using nlohmann::json;

namespace {

// Parses "key=a,b,c" style labels.
std::vector<double> label_values(const VertexRecord& v, const std::string& key) {
  for (const std::string& l : v.labels) {
    if (l.rfind(key + "=", 0) != 0) continue;
    std::vector<double> out;
    std::stringstream ss(l.substr(key.size() + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
  }
  return {};
}

VerifyOptions exhaustive() {
  VerifyOptions o;
  o.mode.kind = VerifyMode::Kind::Exhaustive;
  return o;
}

// Largest singular value of a 2x2 matrix from its characteristic polynomial.
double sigma_max_2x2(double a, double b, double c, double d) {
  const double s = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  return std::sqrt((s + std::sqrt(s * s - 4.0 * det * det)) / 2.0);
}

}  // namespace

TEST_CASE("icosphere combinatorics") {
  for (int r = 0; r <= 3; ++r) {
    const auto s = gen_sphere(r, SphereMap::Height);
    const std::size_t faces = 20u << (2 * r);
    CHECK(s.vertex_count() == faces / 2 + 2);
    bool unit = true;
    for (std::size_t i = 0; i < s.vertex_count(); ++i) {
      const auto p = label_values(s.vertex(i), "xyz");
      unit = unit && std::abs(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - 1.0) < 1e-12;
    }
    CHECK(unit);
  }
  CHECK(gen_sphere(2, SphereMap::Height).vertex_count() == 162);
}

TEST_CASE("height sphere: poles, fibers, distance") {
  const auto s = gen_sphere(3, SphereMap::Height);
  VertexId north = 0;
  VertexId south = 0;
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    if (s.psi(i)[0] > s.psi(s.index_of(north))[0]) north = s.id(i);
    if (s.psi(i)[0] < s.psi(s.index_of(south))[0]) south = s.id(i);
  }
  CHECK(s.psi(s.index_of(north))[0] == doctest::Approx(1.0).epsilon(0.01));
  CHECK(s.psi(s.index_of(south))[0] == doctest::Approx(-1.0).epsilon(0.01));
  CHECK(psi_distance(s, north, south) == doctest::Approx(s.psi(s.index_of(north))[0] - s.psi(s.index_of(south))[0]));
  CHECK(verify_fiber_connectivity(s).status == Status::Convex);
}

TEST_CASE("projected sphere: interior fibers have two components") {
  const auto s = gen_sphere(2, SphereMap::Projection);
  std::size_t two = 0;
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    const auto p = label_values(s.vertex(i), "xyz");
    CHECK(norm(s.psi(i)) <= 1.0 + 1e-12);
    if (p[2] > 0.1) {
      const auto f = fiber_components(s, s.psi(i), 0.0);
      two += f.size() == 2 ? 1 : 0;
    }
  }
  CHECK(two > 0);
  // Edges never join the open hemispheres, so each projected segment lifts
  // into one closed hemisphere.
  for (const auto& e : s.edges()) {
    const double za = label_values(s.vertex(e.a), "xyz")[2];
    const double zb = label_values(s.vertex(e.b), "xyz")[2];
    CHECK_FALSE(za * zb < 0.0);
  }
}

TEST_CASE("edge contract spot check") {
  std::mt19937_64 rng(2);
  const Tolerances tol;
  for (const auto& g : lgtest::gallery()) {
    const auto& s = g.space;
    std::uniform_int_distribution<std::size_t> pick(0, s.edge_count() - 1);
    for (int k = 0; k < 100; ++k) {
      const auto& e = s.edges()[pick(rng)];
      const auto& a = s.vertex(e.a);
      const auto& b = s.vertex(e.b);
      PolyPathImage arc;
      if (g.name == "parabola_map") {
        // Straight parameter path in (sigma, tau) with |tau| folded at sigma = 0.
        double sa = label_values(a, "sigma")[0], ta = label_values(a, "tau")[0];
        double sb = label_values(b, "sigma")[0], tb = label_values(b, "tau")[0];
        if (sa == 0.0 && sb > 0.0 && std::abs(tb) == ta) ta = tb;
        if (sb == 0.0 && sa > 0.0 && std::abs(ta) == tb) tb = ta;
        for (int i = 0; i <= 16; ++i) {
          const double t = i / 16.0;
          const double sg = sa + t * (sb - sa);
          const double ta_ = ta + t * (tb - ta);
          const double x = sg * ta_;
          const double y = (ta_ * ta_ - sg * sg) / 2.0;
          arc.push_back(Vector{parabola_value(x, y)});
        }
      } else if (g.name == "cylinder_map") {
        const double t0 = label_values(a, "t")[0], t1 = label_values(b, "t")[0];
        const double k0 = label_values(a, "theta")[0], k1 = label_values(b, "theta")[0];
        for (int i = 0; i <= 16; ++i) {
          const double t = t0 + (t1 - t0) * i / 16.0;
          const double th = 2.0 * 3.141592653589793 * (k0 + (k1 - k0) * i / 16.0) / 8.0;
          arc.push_back(Vector{t * std::cos(th), t * std::sin(th)});
        }
      } else {
        // Segment interpolation of the end values; for the moment models the
        // values form a linear function of s along the edge.
        for (int i = 0; i <= 16; ++i) arc.push_back(lerp(s.psi(e.a), s.psi(e.b), i / 16.0));
      }
      CHECK(is_monotone_straight(arc, tol));
    }
  }
}

TEST_CASE("cn moment image and fibers") {
  const auto s1 = gen_cn_moment(1, 1.0, 10);
  double lo = 1e9, hi = -1e9;
  for (std::size_t i = 0; i < s1.vertex_count(); ++i) {
    lo = std::min(lo, s1.psi(i)[0]);
    hi = std::max(hi, s1.psi(i)[0]);
  }
  CHECK(lo == 0.0);
  CHECK(hi < 1.0);
  CHECK(hi >= 1.0 - 0.1 - 1e-12);
  const auto s2 = gen_cn_moment(2, 1.0, 10);
  CHECK(s2.vertex_count() == 55u * 64u);
  for (std::size_t i = 0; i < s2.vertex_count(); ++i) {
    CHECK(s2.psi(i)[0] >= 0.0);
    CHECK(s2.psi(i)[0] + s2.psi(i)[1] < 1.0);
  }
  CHECK(verify_image_convexity(s2).status == Status::Convex);
  // theta-only moves stay in the fiber.
  CHECK(psi_distance(s2, 0, 63) == 0.0);
  CHECK_THROWS_AS(gen_cn_moment(0, 1.0, 10), ArgumentError);
  CHECK_THROWS_AS(gen_cn_moment(2, -1.0, 10), ArgumentError);
  CHECK_THROWS_AS(gen_cn_moment(2, 1.0, 1), ArgumentError);
}

TEST_CASE("weighted moment with basis weights equals cn moment") {
  const auto a = gen_cn_moment(2, 1.5, 6);
  const auto b = gen_weighted_moment({Vector{1.0, 0.0}, Vector{0.0, 1.0}}, 1.5, 6);
  json da = to_document(a);
  json db = to_document(b);
  da.erase("name");
  db.erase("name");
  CHECK(da.dump() == db.dump());
  const auto c = gen_weighted_moment({Vector{1.0}, Vector{-1.0}}, 1.0, 6);
  double lo = 1e9, hi = -1e9;
  for (std::size_t i = 0; i < c.vertex_count(); ++i) {
    lo = std::min(lo, c.psi(i)[0]);
    hi = std::max(hi, c.psi(i)[0]);
  }
  CHECK(lo > -1.0);
  CHECK(hi < 1.0);
  CHECK(verify_convex_map(c, exhaustive()).status == Status::Convex);
  CHECK_THROWS_AS(gen_weighted_moment({}, 1.0, 4), ArgumentError);
  CHECK_THROWS_AS(gen_weighted_moment({Vector(std::vector<double>{})}, 1.0, 4), ArgumentError);
  CHECK_THROWS_AS(gen_weighted_moment({Vector{1.0}, Vector{1.0, 0.0}}, 1.0, 4), ArgumentError);
}

TEST_CASE("weighted moment image stays in the cone") {
  const auto s = gen_weighted_moment({Vector{1.0, 0.0}, Vector{1.0, 1.0}}, 1.0, 8);
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    // Cone of (1,0) and (1,1): y >= 0 and x >= y.
    CHECK(s.psi(i)[1] >= 0.0);
    CHECK(s.psi(i)[0] >= s.psi(i)[1]);
  }
  CHECK(verify_image_convexity(s).status == Status::Convex);
}

TEST_CASE("local model") {
  const auto flat = gen_local_model(1, {{2}}, 0, 1.0, 6);
  const auto wm = gen_weighted_moment({Vector{1.0}}, 1.0, 6);
  json a = to_document(flat);
  json b = to_document(wm);
  a.erase("name");
  b.erase("name");
  for (auto* d : {&a, &b}) {
    for (auto& v : (*d)["vertices"]) v.erase("labels");
  }
  CHECK(a.dump() == b.dump());
  const auto box = gen_local_model(2, {}, 2, 1.0, 4);
  CHECK(box.vertex_count() == 25u * 64u);
  for (std::size_t i = 0; i < box.vertex_count(); ++i) {
    CHECK(std::abs(box.psi(i)[0]) <= 1.0);
    CHECK(std::abs(box.psi(i)[1]) <= 1.0);
  }
  CHECK(verify_image_convexity(box).status == Status::Convex);
  const auto m = gen_local_model(2, {{2}}, 1, 1.0, 4);
  CHECK(verify_convex_map(m, exhaustive()).status == Status::Convex);
  CHECK_THROWS_AS(gen_local_model(3, {{2}}, 1, 1.0, 4), ArgumentError);
  CHECK_THROWS_AS(gen_local_model(2, {{2}, {1, 1}}, 1, 1.0, 4), ArgumentError);
}

TEST_CASE("parabola map") {
  CHECK(parabola_value(0.0, 1.0) == 0.0);
  CHECK(parabola_value(3.0, 4.0) == doctest::Approx(1.0));
  const auto s = gen_parabola_map(2.0, 8);
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    const double x = label_values(s.vertex(i), "x")[0];
    const double y = label_values(s.vertex(i), "y")[0];
    CHECK(s.psi(i)[0] == doctest::Approx(parabola_value(x, y)).epsilon(1e-12).scale(1.0));
  }
  CHECK(verify_convex_map(s, exhaustive()).status == Status::Convex);
  CHECK_THROWS_AS(gen_parabola_map(2.0, 7), ArgumentError);
  CHECK_THROWS_AS(gen_parabola_map(0.0, 8), ArgumentError);
}

TEST_CASE("parabola map: small balls on the positive y-axis are not convex") {
  const auto s = gen_parabola_map(2.0, 8);
  // Zero-level vertex closest to the plane point (0, 1).
  std::size_t centre = 0;
  double best = 1e9;
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    if (s.psi(i)[0] != 0.0) continue;
    const double d = std::abs(label_values(s.vertex(i), "y")[0] - 1.0);
    if (d < best) {
      best = d;
      centre = i;
    }
  }
  const double cy = label_values(s.vertex(centre), "y")[0];
  std::vector<VertexId> ball;
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    const double x = label_values(s.vertex(i), "x")[0];
    const double y = label_values(s.vertex(i), "y")[0];
    if (std::hypot(x, y - cy) < 0.6) ball.push_back(s.id(i));
  }
  const auto sub = restrict_to_vertices(s, ball, "plane ball");
  const auto v = verify_convex_map(sub, exhaustive());
  CHECK(v.status == Status::NotConvex);
  REQUIRE_FALSE(v.witnesses.empty());
  CHECK(v.witnesses.front().kind == WitnessKind::DisconnectedFiber);
  // The full neighbourhood component contains whole parabolas and passes.
  const auto full = verify_local_convexity(s, s.id(centre), 0.1);
  CHECK(full.status == Status::Convex);
}

TEST_CASE("cylinder map") {
  const auto s = gen_cylinder_map(1.0, 4, 8);
  // The zero section is one fiber component.
  const auto f = fiber_components(s, Vector{0.0, 0.0}, 0.0);
  REQUIRE(f.size() == 1);
  CHECK(f.front().member_vertex_ids.size() == 8);
  // (t=1, theta=0) to (t=1, theta=pi) through the zero section.
  const VertexId a = 8 * 8 + 0;
  const VertexId b = 8 * 8 + 4;
  const auto d = shortest_psi_path(s, a, b);
  CHECK(d.is_straight);
  CHECK(d.psi_length == doctest::Approx(2.0));
  CHECK(verify_image_convexity(gen_cylinder_map(1.0, 8, 32)).status == Status::Convex);
  CHECK(verify_convex_map(s, exhaustive()).status == Status::NotConvex);
}

TEST_CASE("cone openness epsilon") {
  CHECK(cone_openness_epsilon({Vector{1.0, 0.0}, Vector{0.0, 1.0}}) == doctest::Approx(0.99));
  CHECK(cone_openness_epsilon({Vector{2.0, 0.0}}) == doctest::Approx(1.98));
  const double smax = sigma_max_2x2(1.0, -1.0, 0.0, 1.0);
  CHECK(smax == doctest::Approx(1.6180339887));
  CHECK(std::abs(cone_openness_epsilon({Vector{1.0, 0.0}, Vector{1.0, 1.0}}) - 0.99 / smax) < 1e-9);
  CHECK_THROWS_AS(cone_openness_epsilon({Vector{0.0, 0.0}}), DegenerateInputError);
  CHECK_THROWS_AS(cone_openness_epsilon({}), ArgumentError);
  // Dependent weights are skipped, not inverted.
  CHECK(cone_openness_epsilon({Vector{1.0, 0.0}, Vector{2.0, 0.0}}) == doctest::Approx(0.99));
}

TEST_CASE("generate validates parameters") {
  const auto g = generate({"cn_moment", {{"n", 2}, {"rho", 1.0}}});
  CHECK(g.truth["expected_verdict"] == "Convex");
  CHECK(g.document["format"] == "space");
  CHECK(load_space(g.document).dimension() == 2);
  CHECK(generate({"sphere_height", {{"resolution", 2}}}).document["vertices"].size() == 162);
  CHECK(generate({"grid_random", {{"seed", 4}}}).document["format"] == "grid");
  CHECK(generate({"sphere_projection", json::object()}).truth["expected_verdict"] == "NotConvex");
  CHECK_THROWS_AS(generate({"weighted_moment", {{"alphas", {json::array()}}}}), ArgumentError);
  CHECK_THROWS_AS(generate({"cn_moment", {{"n", "two"}}}), ArgumentError);
  CHECK_THROWS_AS(generate({"torus", json::object()}), ArgumentError);
  CHECK(generate({"parabola_map", json::object()}).document.dump() ==
        generate({"parabola_map", json::object()}).document.dump());
}
