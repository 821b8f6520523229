#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "lg/space.hpp"

namespace lg {

inline constexpr std::size_t kNoVertex = std::numeric_limits<std::size_t>::max();
inline constexpr int kDepthCap = 24;
inline constexpr std::size_t kExhaustiveSearchLimit = 12;

struct PsiPathResult {
  VertexPath path;
  double psi_length = 0.0;
  bool is_straight = false;
  int depth = 0;                      // dyadic depth used (0 when not straightened)
  std::vector<VertexId> dyadic_points;  // empty when not straightened
};

// Single-source shortest Psi-length paths. Among equal-length paths the tree
// keeps the one with fewest edges, then the lexicographically smallest id
// sequence. dist is +inf for unreached vertices.
struct ShortestPathTree {
  std::size_t source = kNoVertex;
  std::vector<double> dist;
  std::vector<int> hops;
  std::vector<std::size_t> parent;

  bool reached(std::size_t v) const { return dist[v] < std::numeric_limits<double>::infinity(); }
  std::vector<std::size_t> path_to(std::size_t v) const;  // source ... v, indices
};

// `mask` (optional, one entry per vertex) restricts the search to vertices
// with a nonzero entry. With `target` set, vertices farther than the target
// are left unsettled.
ShortestPathTree shortest_path_tree(const EmbeddedSpace& s, std::size_t source,
                                    const std::vector<char>* mask = nullptr,
                                    std::size_t target = kNoVertex);

double psi_distance(const EmbeddedSpace& s, VertexId x0, VertexId x1);
PsiPathResult shortest_psi_path(const EmbeddedSpace& s, VertexId x0, VertexId x1);
VertexId midpoint_between(const EmbeddedSpace& s, VertexId x0, VertexId x1);

int default_max_depth(const EmbeddedSpace& s, double d);
PsiPathResult dyadic_straighten(const EmbeddedSpace& s, VertexId x0, VertexId x1, int max_depth);
std::optional<PsiPathResult> straight_path_between(const EmbeddedSpace& s, VertexId x0,
                                                   VertexId x1);

// Depth-first search over simple paths in id order with length pruning.
// Intended for small spaces; returns the first straight path found.
std::optional<PsiPathResult> exhaustive_straight_search(const EmbeddedSpace& s, VertexId x0,
                                                        VertexId x1);

PsiPathResult make_path_result(const EmbeddedSpace& s, const std::vector<std::size_t>& indices);

}  // namespace lg
