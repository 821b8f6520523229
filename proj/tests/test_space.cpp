#include <algorithm>

#include "doctest.h"
#include "lg/errors.hpp"
#include "lg/space.hpp"
#include "support.hpp"

using namespace lg;
using nlohmann::json;
using lgtest::make_space;

namespace {

json doc_of(json vertices, json edges) {
  return {{"format", "space"}, {"name", "d"}, {"dimension", 1}, {"vertices", vertices}, {"edges", edges}};
}

bool throws_with(const json& doc, const std::string& text) {
  try {
    load_space(doc);
  } catch (const ValidationError& e) {
    return std::string(e.what()).find(text) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("documents round-trip") {
  const json doc = doc_of({{{"id", 5}, {"psi", {0.5}}, {"labels", {"a"}}}, {{"id", 2}, {"psi", {1.5}}}},
                          {{5, 2}});
  const EmbeddedSpace s = load_space(doc);
  CHECK(s.vertex_count() == 2);
  CHECK(s.id(0) == 2);  // stored sorted by id
  CHECK(s.vertex(1).labels == std::vector<std::string>{"a"});
  CHECK(s.edge_count() == 1);
  CHECK(s.edges().front().length == doctest::Approx(1.0));
  const EmbeddedSpace back = load_space(to_document(s));
  CHECK(to_document(back).dump() == to_document(s).dump());
}

TEST_CASE("validation errors name their location") {
  CHECK(throws_with(doc_of({{{"id", 0}, {"psi", {0.0}}}}, {{0, 7}}), "edges[0]"));
  CHECK(throws_with(doc_of({{{"id", 0}, {"psi", {0.0}}}, {{"id", 0}, {"psi", {1.0}}}}, json::array()),
                    "vertices[1]"));
  CHECK(throws_with(doc_of({{{"id", 0}, {"psi", {0.0}}}}, {{0, 0}}), "edges[0]"));
  CHECK(throws_with(doc_of({{{"id", 0}, {"psi", {0.0, 1.0}}}}, json::array()), "vertices[0].psi"));
  CHECK(throws_with(doc_of({{{"id", 0}, {"psi", {"x"}}}}, json::array()), "vertices[0].psi"));
  CHECK(throws_with(doc_of({{{"id", 0}, {"psi", {0.0}}}, {{"id", 1}, {"psi", {1.0}}}}, {{0, 1}, {1, 0}}),
                    "edges[1]"));
  json bad = doc_of(json::array(), json::array());
  bad["format"] = "grid";
  CHECK(throws_with(bad, "format"));
  json missing = doc_of(json::array(), json::array());
  missing.erase("dimension");
  CHECK(throws_with(missing, "dimension"));
}

TEST_CASE("default fiber radius is half the shortest nonzero edge") {
  const auto s = make_space({{0.0}, {0.0}, {0.25}, {1.25}}, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(s.tolerances().eps_fiber == doctest::Approx(0.125));
  CHECK_FALSE(s.eps_fiber_overridden());
  CHECK(s.min_nonzero_edge_length() == doctest::Approx(0.25));
  CHECK(s.max_edge_length() == doctest::Approx(1.0));
  Tolerances t = s.tolerances();
  t.eps_fiber = 0.01;
  const auto o = s.with_tolerances(t);
  CHECK(o.tolerances().eps_fiber == 0.01);
  CHECK(o.eps_fiber_overridden());
  CHECK(load_space(to_document(o)).tolerances().eps_fiber == 0.01);
}

TEST_CASE("components and connectivity") {
  const auto s = make_space({{0.0}, {1.0}, {2.0}, {3.0}, {4.0}}, {{0, 1}, {3, 4}});
  CHECK_FALSE(is_connected(s));
  const auto cs = connected_components(s);
  REQUIRE(cs.size() == 3);
  CHECK(cs[0] == std::vector<std::size_t>{0, 1});
  CHECK(cs[1] == std::vector<std::size_t>{2});
  CHECK(cs[2] == std::vector<std::size_t>{3, 4});
  CHECK(is_connected(make_space({{0.0}, {1.0}}, {{0, 1}})));
}

TEST_CASE("fiber components on a V-shaped path") {
  // Psi = 0, 1, 0 along a path: the zero level has two components.
  const auto s = make_space({{0.0}, {1.0}, {0.0}}, {{0, 1}, {1, 2}});
  const auto f = fiber_components(s, Vector{0.0}, 0.0);
  REQUIRE(f.size() == 2);
  CHECK(f[0].member_vertex_ids == std::vector<VertexId>{0});
  CHECK(f[1].member_vertex_ids == std::vector<VertexId>{2});
  // A ball of radius 1.5 around 0 contains the middle vertex and joins them.
  CHECK(fiber_components(s, Vector{0.0}, 1.5).size() == 1);
  CHECK(fiber_components(s, Vector{5.0}, 0.0).empty());
}

TEST_CASE("ball preimage is strict for positive radius") {
  const auto s = make_space({{0.0}, {1.0}, {2.0}}, {{0, 1}, {1, 2}});
  CHECK(ball_preimage(s, Vector{0.0}, 1.0) == std::vector<std::size_t>{0});
  CHECK(ball_preimage(s, Vector{0.0}, 1.0 + 1e-12) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("neighborhood component follows edges inside the ball") {
  // 0 - 1 - 2 - 3 with Psi 0, 5, 0.2, 0.1: the ball around 0 of radius 1
  // holds vertices 0, 2, 3 but 0 reaches neither of them.
  const auto s = make_space({{0.0}, {5.0}, {0.2}, {0.1}}, {{0, 1}, {1, 2}, {2, 3}});
  const auto u0 = neighborhood_component(s, 0, 1.0);
  CHECK(u0.member_vertex_ids == std::vector<VertexId>{0});
  const auto u3 = neighborhood_component(s, 3, 1.0);
  CHECK(u3.member_vertex_ids == std::vector<VertexId>{2, 3});
  CHECK_THROWS_AS(neighborhood_component(s, 9, 1.0), ArgumentError);
}

TEST_CASE("induced subspace and restriction") {
  const auto s = make_space({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}}, {{0, 1}, {1, 2}, {2, 3}});
  const auto h = convex_hull({Vector{-0.5, -1.0}, Vector{1.5, -1.0}, Vector{1.5, 1.0}, Vector{-0.5, 1.0}});
  const auto sub = induced_subspace(s, h);
  CHECK(sub.vertex_count() == 2);
  CHECK(sub.edge_count() == 1);
  CHECK(sub.name().find("restricted") != std::string::npos);
  const auto r = restrict_to_vertices(s, {0, 2, 3}, "pick");
  CHECK(r.vertex_count() == 3);
  CHECK(r.edge_count() == 1);
  CHECK(r.tolerances().eps_fiber == s.tolerances().eps_fiber);
}

TEST_CASE("saturation epsilon") {
  const auto s = make_space({{0.0}, {0.3}, {1.0}, {2.0}}, {{0, 1}, {1, 2}, {2, 3}});
  const auto e = saturation_epsilon(s, Vector{0.0}, {0, 1});
  REQUIRE(e);
  CHECK(*e == doctest::Approx(1.0 - 1e-9));
  CHECK_FALSE(saturation_epsilon(s, Vector{0.0}, {0, 1, 2, 3}));
  CHECK_THROWS_AS(saturation_epsilon(s, Vector{0.0}, {1, 2}), ArgumentError);
}

TEST_CASE("distinct levels merge within the fiber radius") {
  const auto s = make_space({{1.0}, {0.0}, {1.0 + 1e-12}, {2.0}}, {{0, 1}, {1, 2}, {2, 3}});
  const auto l = distinct_levels(s);
  REQUIRE(l.size() == 3);
  CHECK(l[0] == Vector{1.0});
  CHECK(l[1] == Vector{0.0});
  CHECK(l[2] == Vector{2.0});
}

TEST_CASE("path image") {
  const auto s = make_space({{0.0}, {1.0}, {3.0}}, {{0, 1}, {1, 2}});
  const auto img = path_image(s, VertexPath{{0, 1, 2}});
  CHECK(path_length(img) == doctest::Approx(3.0));
  CHECK_THROWS(path_image(s, VertexPath{{0, 2}}));
}
