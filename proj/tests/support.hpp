#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lg/gallery.hpp"
#include "lg/space.hpp"

namespace lgtest {

using lg::EmbeddedSpace;
using lg::Vector;
using lg::VertexId;

// Vertex i gets id i and Psi-value psi[i].
inline EmbeddedSpace make_space(const std::vector<std::vector<double>>& psi,
                                const std::vector<std::pair<VertexId, VertexId>>& edges,
                                const std::string& name = "test") {
  std::vector<lg::VertexRecord> vs;
  for (std::size_t i = 0; i < psi.size(); ++i) vs.push_back({static_cast<VertexId>(i), Vector(psi[i]), {}});
  const std::size_t dim = psi.empty() ? 1 : psi.front().size();
  return EmbeddedSpace(name, dim, std::move(vs), edges);
}

// Random spanning tree plus extra edges, Psi-values uniform in [0, 1]^dim.
inline EmbeddedSpace random_connected_space(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                                            std::size_t extra) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> psi(n, std::vector<double>(dim));
  for (auto& p : psi) {
    for (double& x : p) x = u(rng);
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    edges.emplace_back(static_cast<VertexId>(pick(rng)), static_cast<VertexId>(i));
  }
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  for (std::size_t k = 0; k < extra; ++k) {
    const std::size_t a = any(rng);
    const std::size_t b = any(rng);
    if (a == b) continue;
    bool dup = false;
    for (const auto& [x, y] : edges) {
      dup = dup || (x == static_cast<VertexId>(std::min(a, b)) && y == static_cast<VertexId>(std::max(a, b))) ||
            (y == static_cast<VertexId>(std::min(a, b)) && x == static_cast<VertexId>(std::max(a, b)));
    }
    if (!dup) edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
  }
  return make_space(psi, edges, "random");
}

// Floyd-Warshall over edge Psi-lengths; independent of the library's Dijkstra.
inline std::vector<std::vector<double>> floyd_warshall(const EmbeddedSpace& s) {
  const std::size_t n = s.vertex_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& e : s.edges()) {
    double len = 0.0;
    for (std::size_t c = 0; c < s.dimension(); ++c) {
      const double t = s.psi(e.a)[c] - s.psi(e.b)[c];
      len += t * t;
    }
    len = std::sqrt(len);
    d[e.a][e.b] = std::min(d[e.a][e.b], len);
    d[e.b][e.a] = std::min(d[e.b][e.a], len);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d;
}

struct GalleryEntry {
  std::string name;
  EmbeddedSpace space;
  std::string expected;
};

// Moderate resolutions so exhaustive checks stay fast.
inline std::vector<GalleryEntry> gallery() {
  using nlohmann::json;
  const std::vector<std::pair<std::string, json>> specs{
      {"sphere_height", {{"resolution", 3}}},
      {"sphere_projection", {{"resolution", 2}}},
      {"cn_moment", {{"n", 1}, {"resolution", 10}}},
      {"cn_moment", {{"n", 2}, {"resolution", 6}}},
      {"weighted_moment", {{"alphas", {{1.0, 0.0}, {1.0, 1.0}}}, {"resolution", 6}}},
      {"local_model", {{"k", 2}, {"weights", {{2}}}, {"h0_dim", 1}, {"resolution", 4}}},
      {"parabola_map", {{"extent", 2.0}, {"resolution", 8}}},
      {"cylinder_map", {{"t_extent", 1.0}, {"resolution", 4}}},
  };
  std::vector<GalleryEntry> out;
  for (const auto& [kind, params] : specs) {
    const lg::Generated g = lg::generate({kind, params});
    out.push_back({kind, lg::load_space(g.document), g.truth["expected_verdict"].get<std::string>()});
  }
  return out;
}

inline double edge_length(const EmbeddedSpace& s, VertexId a, VertexId b) {
  return lg::distance(s.psi(s.index_of(a)), s.psi(s.index_of(b)));
}

}  // namespace lgtest
