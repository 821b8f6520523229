#include "lg/psi_metric.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <queue>

#include "lg/errors.hpp"

namespace lg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tie_slack(double d) { return 1e-12 * std::max(1.0, d); }

}  // namespace

std::vector<std::size_t> ShortestPathTree::path_to(std::size_t v) const {
  if (!reached(v)) throw NoPathError("no path between the requested vertices");
  std::vector<std::size_t> rev;
  for (std::size_t cur = v; cur != kNoVertex; cur = parent[cur]) rev.push_back(cur);
  std::reverse(rev.begin(), rev.end());
  return rev;
}

ShortestPathTree shortest_path_tree(const EmbeddedSpace& s, std::size_t source,
                                    const std::vector<char>* mask, std::size_t target) {
  const std::size_t n = s.vertex_count();
  ShortestPathTree t;
  t.source = source;
  t.dist.assign(n, kInf);
  t.hops.assign(n, -1);
  t.parent.assign(n, kNoVertex);
  auto allowed = [&](std::size_t v) { return mask == nullptr || (*mask)[v] != 0; };

  std::vector<double> tentative(n, kInf);
  std::vector<char> settled(n, 0);
  std::vector<std::size_t> order;  // settle order
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  tentative[source] = 0.0;
  heap.push({0.0, source});
  double bound = kInf;
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d > tentative[u]) continue;
    if (d > bound) break;
    settled[u] = 1;
    order.push_back(u);
    if (u == target) bound = d + tie_slack(d);
    for (const Neighbor& nb : s.neighbors(u)) {
      if (!allowed(nb.index) || settled[nb.index]) continue;
      const double nd = d + nb.length;
      if (nd < tentative[nb.index]) {
        tentative[nb.index] = nd;
        heap.push({nd, nb.index});
      }
    }
  }
  for (std::size_t u : order) t.dist[u] = tentative[u];

  auto tight = [&](std::size_t u, std::size_t v, double w) {
    return t.dist[u] + w <= t.dist[v] + tie_slack(t.dist[v]);
  };

  // Fewest edges among (near-)shortest paths: BFS over tight edges.
  std::deque<std::size_t> queue{source};
  t.hops[source] = 0;
  int max_hops = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (const Neighbor& nb : s.neighbors(u)) {
      const std::size_t v = nb.index;
      if (!settled[v] || t.hops[v] >= 0 || !tight(u, v, nb.length)) continue;
      t.hops[v] = t.hops[u] + 1;
      max_hops = std::max(max_hops, t.hops[v]);
      queue.push_back(v);
    }
  }

  // Lexicographic order of id sequences, assigned one hop layer at a time.
  std::vector<std::vector<std::size_t>> layers(static_cast<std::size_t>(max_hops) + 1);
  for (std::size_t v : order) {
    if (t.hops[v] >= 0) layers[static_cast<std::size_t>(t.hops[v])].push_back(v);
  }
  std::vector<std::size_t> rank(n, kNoVertex);
  rank[source] = 0;
  for (std::size_t h = 1; h < layers.size(); ++h) {
    for (std::size_t v : layers[h]) {
      std::size_t best = kNoVertex;
      for (const Neighbor& nb : s.neighbors(v)) {
        const std::size_t u = nb.index;
        if (t.hops[u] != static_cast<int>(h) - 1 || !tight(u, v, nb.length)) continue;
        if (best == kNoVertex || rank[u] < rank[best]) best = u;
      }
      t.parent[v] = best;
    }
    std::sort(layers[h].begin(), layers[h].end(), [&](std::size_t a, std::size_t b) {
      return std::pair(rank[t.parent[a]], a) < std::pair(rank[t.parent[b]], b);
    });
    for (std::size_t k = 0; k < layers[h].size(); ++k) rank[layers[h][k]] = k;
  }
  // Vertices settled but missed by the tight BFS (tolerance corner cases)
  // fall back to their Dijkstra predecessor.
  for (std::size_t v : order) {
    if (v == source || t.hops[v] >= 0) continue;
    for (const Neighbor& nb : s.neighbors(v)) {
      if (t.hops[nb.index] >= 0 && t.dist[nb.index] + nb.length <= t.dist[v] + 1e-9) {
        t.parent[v] = nb.index;
        t.hops[v] = t.hops[nb.index] + 1;
        break;
      }
    }
    if (t.hops[v] < 0) t.dist[v] = kInf;
  }
  return t;
}

PsiPathResult make_path_result(const EmbeddedSpace& s, const std::vector<std::size_t>& indices) {
  PsiPathResult r;
  PolyPathImage img;
  for (std::size_t i : indices) {
    r.path.vertex_ids.push_back(s.id(i));
    img.push_back(s.psi(i));
  }
  r.psi_length = path_length(img);
  r.is_straight = is_monotone_straight(img, s.tolerances());
  return r;
}

double psi_distance(const EmbeddedSpace& s, VertexId x0, VertexId x1) {
  // Searching from the lower index makes the value exactly symmetric.
  const std::size_t a = std::min(s.index_of(x0), s.index_of(x1));
  const std::size_t b = std::max(s.index_of(x0), s.index_of(x1));
  if (a == b) return 0.0;
  // Summing collinear edges can round one ulp below the endpoint gap.
  return std::max(shortest_path_tree(s, a, nullptr, b).dist[b], distance(s.psi(a), s.psi(b)));
}

PsiPathResult shortest_psi_path(const EmbeddedSpace& s, VertexId x0, VertexId x1) {
  const std::size_t a = s.index_of(x0);
  const std::size_t b = s.index_of(x1);
  return make_path_result(s, shortest_path_tree(s, a, nullptr, b).path_to(b));
}

namespace {

std::size_t midpoint_index(const EmbeddedSpace& s, const std::vector<std::size_t>& path) {
  std::vector<double> prefix(path.size(), 0.0);
  for (std::size_t k = 1; k < path.size(); ++k) {
    prefix[k] = prefix[k - 1] + distance(s.psi(path[k - 1]), s.psi(path[k]));
  }
  const double half = 0.5 * prefix.back();
  std::size_t best = 0;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const double e = std::abs(prefix[k] - half);
    const double be = std::abs(prefix[best] - half);
    if (e < be || (e == be && prefix[k] == prefix[best] && path[k] < path[best])) best = k;
  }
  return path[best];
}

}  // namespace

VertexId midpoint_between(const EmbeddedSpace& s, VertexId x0, VertexId x1) {
  const std::size_t a = s.index_of(x0);
  const std::size_t b = s.index_of(x1);
  if (a == b) return x0;
  const auto path = shortest_path_tree(s, a, nullptr, b).path_to(b);
  return s.id(midpoint_index(s, path));
}

int default_max_depth(const EmbeddedSpace& s, double d) {
  const double lmin = s.min_nonzero_edge_length();
  if (!(d > 0.0) || !(lmin > 0.0) || !std::isfinite(d)) return 1;
  const double depth = std::ceil(std::log2(d / lmin)) + 2.0;
  return static_cast<int>(std::clamp(depth, 1.0, static_cast<double>(kDepthCap)));
}

PsiPathResult dyadic_straighten(const EmbeddedSpace& s, VertexId x0, VertexId x1, int max_depth) {
  if (max_depth < 1) throw ArgumentError("dyadic_straighten: max_depth must be >= 1");
  const std::size_t a0 = s.index_of(x0);
  const std::size_t b0 = s.index_of(x1);
  const Tolerances& tol = s.tolerances();

  struct Segment {
    std::size_t a, b;
    std::vector<std::size_t> path;
    bool done = false;
  };
  std::vector<Segment> segs{{a0, b0, {}, false}};
  int depth = 0;
  for (int level = 1; level <= max_depth; ++level) {
    bool refined = false;
    std::vector<Segment> next;
    for (Segment& seg : segs) {
      if (seg.done) {
        next.push_back(std::move(seg));
        continue;
      }
      depth = level;
      if (seg.a == seg.b) {
        next.push_back({seg.a, seg.b, {seg.a}, true});
        continue;
      }
      const auto tree = shortest_path_tree(s, seg.a, nullptr, seg.b);
      std::vector<std::size_t> path = tree.path_to(seg.b);
      PolyPathImage img;
      for (std::size_t i : path) img.push_back(s.psi(i));
      const bool accept = is_monotone_straight(img, tol) || tree.dist[seg.b] <= tol.eps_fiber ||
                          level == max_depth;
      const std::size_t m = accept ? seg.a : midpoint_index(s, path);
      if (accept || m == seg.a || m == seg.b) {
        next.push_back({seg.a, seg.b, std::move(path), true});
        continue;
      }
      refined = true;
      next.push_back({seg.a, m, {}, false});
      next.push_back({m, seg.b, {}, false});
    }
    segs = std::move(next);
    if (!refined) break;
  }

  std::vector<std::size_t> full;
  PsiPathResult r;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const auto& p = segs[k].path;
    full.insert(full.end(), p.begin() + (full.empty() ? 0 : 1), p.end());
    if (k == 0) r.dyadic_points.push_back(s.id(segs[k].a));
    r.dyadic_points.push_back(s.id(segs[k].b));
  }
  PsiPathResult base = make_path_result(s, full);
  base.depth = depth;
  base.dyadic_points = std::move(r.dyadic_points);
  return base;
}

std::optional<PsiPathResult> exhaustive_straight_search(const EmbeddedSpace& s, VertexId x0,
                                                        VertexId x1) {
  const std::size_t a = s.index_of(x0);
  const std::size_t b = s.index_of(x1);
  const Tolerances& tol = s.tolerances();
  if (a == b) return make_path_result(s, {a});
  const double gap = distance(s.psi(a), s.psi(b));
  std::vector<char> on_path(s.vertex_count(), 0);
  std::vector<std::size_t> path{a};
  on_path[a] = 1;
  std::optional<PsiPathResult> found;
  std::function<void(double)> dfs = [&](double len) {
    if (found) return;
    const std::size_t u = path.back();
    if (u == b) {
      if (is_straight_length(len, gap, tol.eta_collinear)) found = make_path_result(s, path);
      return;
    }
    for (const Neighbor& nb : s.neighbors(u)) {
      if (on_path[nb.index]) continue;
      const double nl = len + nb.length;
      // A prefix longer than gap plus slack can never complete a straight path.
      if (!is_straight_length(nl, gap, tol.eta_collinear)) continue;
      on_path[nb.index] = 1;
      path.push_back(nb.index);
      dfs(nl);
      path.pop_back();
      on_path[nb.index] = 0;
      if (found) return;
    }
  };
  dfs(0.0);
  return found;
}

std::optional<PsiPathResult> straight_path_between(const EmbeddedSpace& s, VertexId x0,
                                                   VertexId x1) {
  const std::size_t a = s.index_of(x0);
  const std::size_t b = s.index_of(x1);
  const double d = shortest_path_tree(s, a, nullptr, b).dist[b];
  if (std::isfinite(d)) {
    PsiPathResult r = dyadic_straighten(s, x0, x1, default_max_depth(s, d));
    if (r.is_straight) return r;
  }
  if (s.vertex_count() <= kExhaustiveSearchLimit) return exhaustive_straight_search(s, x0, x1);
  return std::nullopt;
}

}  // namespace lg
