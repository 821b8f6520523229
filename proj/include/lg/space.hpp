#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lg/geometry.hpp"
#include "lg/hull.hpp"

namespace lg {

using VertexId = std::int64_t;

struct VertexRecord {
  VertexId id = 0;
  Vector psi;
  std::vector<std::string> labels;
};

struct VertexPath {
  std::vector<VertexId> vertex_ids;
};

struct FiberComponent {
  Vector level;
  double radius = 0.0;
  std::vector<VertexId> member_vertex_ids;  // sorted
};

struct Neighbor {
  std::size_t index;
  double length;
};

struct EdgeRecord {
  std::size_t a;
  std::size_t b;
  double length;
};

// Finite graph with a Psi-value per vertex. Each edge stands for an arc whose
// Psi-image is the segment between its endpoint values, traversed
// monotonically; the library trusts this contract.
//
// Vertices are stored sorted by id, so index order equals id order and every
// index-based traversal is deterministic.
class EmbeddedSpace {
 public:
  EmbeddedSpace() = default;

  // Throws ValidationError on dangling/duplicate/self edges, duplicate ids,
  // dimension mismatch or non-finite values. When eps_fiber is absent it
  // defaults to half the minimum nonzero edge Psi-length.
  EmbeddedSpace(std::string name, std::size_t dimension, std::vector<VertexRecord> vertices,
                const std::vector<std::pair<VertexId, VertexId>>& edges,
                Tolerances tol = {}, bool eps_fiber_given = false);

  const std::string& name() const { return name_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return vertices_.empty(); }

  const VertexRecord& vertex(std::size_t index) const { return vertices_[index]; }
  const Vector& psi(std::size_t index) const { return vertices_[index].psi; }
  VertexId id(std::size_t index) const { return vertices_[index].id; }
  std::size_t index_of(VertexId id) const;  // ArgumentError if unknown
  bool contains(VertexId id) const;

  std::span<const Neighbor> neighbors(std::size_t index) const;
  const std::vector<EdgeRecord>& edges() const { return edges_; }

  const Tolerances& tolerances() const { return tol_; }
  bool eps_fiber_overridden() const { return eps_fiber_given_; }
  double min_nonzero_edge_length() const { return min_nonzero_edge_; }
  double max_edge_length() const { return max_edge_; }

  EmbeddedSpace with_tolerances(const Tolerances& tol, bool eps_fiber_given = true) const;
  EmbeddedSpace renamed(std::string name) const;

  // Subspace induced on the given vertex indices, keeping this space's
  // tolerances so fiber binning stays comparable.
  EmbeddedSpace induced_by_indices(const std::vector<std::size_t>& indices,
                                   std::string name) const;

 private:
  std::string name_;
  std::size_t dimension_ = 0;
  std::vector<VertexRecord> vertices_;
  std::vector<EdgeRecord> edges_;
  std::vector<std::size_t> adj_offset_;
  std::vector<Neighbor> adj_;
  Tolerances tol_;
  bool eps_fiber_given_ = false;
  double min_nonzero_edge_ = 0.0;
  double max_edge_ = 0.0;
};

EmbeddedSpace load_space(const nlohmann::json& document);
nlohmann::json to_document(const EmbeddedSpace& s);

bool is_connected(const EmbeddedSpace& s);
std::vector<std::vector<std::size_t>> connected_components(const EmbeddedSpace& s);

// Indices v with ||Psi(v) - w|| < eps (eps > 0) or <= eps_fiber (eps == 0).
std::vector<std::size_t> ball_preimage(const EmbeddedSpace& s, const Vector& w, double eps);

std::vector<FiberComponent> fiber_components(const EmbeddedSpace& s, const Vector& w, double eps);
FiberComponent neighborhood_component(const EmbeddedSpace& s, VertexId x, double eps);
std::vector<std::size_t> neighborhood_component_indices(const EmbeddedSpace& s, std::size_t x,
                                                        double eps);

EmbeddedSpace induced_subspace(const EmbeddedSpace& s, const HullRepresentation& h);
EmbeddedSpace restrict_to_vertices(const EmbeddedSpace& s, const std::vector<VertexId>& ids,
                                   const std::string& tag);

std::optional<double> saturation_epsilon(const EmbeddedSpace& s, const Vector& w0,
                                         const std::vector<VertexId>& U);

// Distinct Psi-values in first-occurrence (id) order, merged at eps_fiber.
std::vector<Vector> distinct_levels(const EmbeddedSpace& s);

PolyPathImage path_image(const EmbeddedSpace& s, const VertexPath& p);

}  // namespace lg
