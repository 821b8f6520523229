#include "lg/space.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <unordered_map>

#include "lg/errors.hpp"

namespace lg {

using nlohmann::json;

EmbeddedSpace::EmbeddedSpace(std::string name, std::size_t dimension,
                             std::vector<VertexRecord> vertices,
                             const std::vector<std::pair<VertexId, VertexId>>& edges,
                             Tolerances tol, bool eps_fiber_given)
    : name_(std::move(name)), dimension_(dimension), vertices_(std::move(vertices)),
      tol_(tol), eps_fiber_given_(eps_fiber_given) {
  if (dimension_ == 0) throw ValidationError("dimension: must be a positive integer");
  tol_.validate();
  std::sort(vertices_.begin(), vertices_.end(),
            [](const VertexRecord& a, const VertexRecord& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const VertexRecord& v = vertices_[i];
    const std::string where = "vertex id " + std::to_string(v.id);
    if (v.id < 0) throw ValidationError(where + ": ids must be nonnegative");
    if (i > 0 && vertices_[i - 1].id == v.id) throw ValidationError(where + ": duplicate vertex id");
    if (v.psi.size() != dimension_) {
      throw ValidationError(where + ": psi has " + std::to_string(v.psi.size()) +
                            " coordinates, expected " + std::to_string(dimension_));
    }
    if (!v.psi.all_finite()) throw ValidationError(where + ": psi is not finite");
  }

  std::set<std::pair<std::size_t, std::size_t>> seen;
  edges_.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto [u, v] = edges[k];
    const std::string where = "edges[" + std::to_string(k) + "]";
    if (!contains(u) || !contains(v)) {
      throw ValidationError(where + ": references unknown vertex id " +
                            std::to_string(contains(u) ? v : u));
    }
    if (u == v) throw ValidationError(where + ": self-loop on vertex " + std::to_string(u));
    std::size_t a = index_of(u);
    std::size_t b = index_of(v);
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) throw ValidationError(where + ": duplicate edge");
    edges_.push_back({a, b, distance(vertices_[a].psi, vertices_[b].psi)});
  }
  std::sort(edges_.begin(), edges_.end(), [](const EdgeRecord& x, const EdgeRecord& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });

  std::vector<std::size_t> degree(vertices_.size(), 0);
  for (const EdgeRecord& e : edges_) {
    ++degree[e.a];
    ++degree[e.b];
  }
  adj_offset_.assign(vertices_.size() + 1, 0);
  for (std::size_t i = 0; i < vertices_.size(); ++i) adj_offset_[i + 1] = adj_offset_[i] + degree[i];
  adj_.resize(adj_offset_.back());
  std::vector<std::size_t> fill(adj_offset_.begin(), adj_offset_.end() - 1);
  for (const EdgeRecord& e : edges_) {
    adj_[fill[e.a]++] = {e.b, e.length};
    adj_[fill[e.b]++] = {e.a, e.length};
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(adj_offset_[i]),
              adj_.begin() + static_cast<std::ptrdiff_t>(adj_offset_[i + 1]),
              [](const Neighbor& x, const Neighbor& y) { return x.index < y.index; });
  }

  min_nonzero_edge_ = 0.0;
  max_edge_ = 0.0;
  for (const EdgeRecord& e : edges_) {
    max_edge_ = std::max(max_edge_, e.length);
    if (e.length > tol_.eta_zero && (min_nonzero_edge_ == 0.0 || e.length < min_nonzero_edge_)) {
      min_nonzero_edge_ = e.length;
    }
  }
  if (!eps_fiber_given_) tol_.eps_fiber = 0.5 * min_nonzero_edge_;
}

std::size_t EmbeddedSpace::index_of(VertexId id) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id,
                             [](const VertexRecord& v, VertexId x) { return v.id < x; });
  if (it == vertices_.end() || it->id != id) {
    throw ArgumentError("unknown vertex id " + std::to_string(id));
  }
  return static_cast<std::size_t>(it - vertices_.begin());
}

bool EmbeddedSpace::contains(VertexId id) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id,
                             [](const VertexRecord& v, VertexId x) { return v.id < x; });
  return it != vertices_.end() && it->id == id;
}

std::span<const Neighbor> EmbeddedSpace::neighbors(std::size_t index) const {
  return {adj_.data() + adj_offset_[index], adj_offset_[index + 1] - adj_offset_[index]};
}

EmbeddedSpace EmbeddedSpace::with_tolerances(const Tolerances& tol, bool eps_fiber_given) const {
  tol.validate();
  EmbeddedSpace c = *this;
  c.tol_ = tol;
  c.eps_fiber_given_ = eps_fiber_given;
  if (!eps_fiber_given) c.tol_.eps_fiber = 0.5 * c.min_nonzero_edge_;
  return c;
}

EmbeddedSpace EmbeddedSpace::renamed(std::string name) const {
  EmbeddedSpace c = *this;
  c.name_ = std::move(name);
  return c;
}

EmbeddedSpace EmbeddedSpace::induced_by_indices(const std::vector<std::size_t>& indices,
                                                std::string name) const {
  std::vector<char> keep(vertices_.size(), 0);
  std::vector<VertexRecord> verts;
  for (std::size_t i : indices) {
    if (!keep[i]) verts.push_back(vertices_[i]);
    keep[i] = 1;
  }
  std::vector<std::pair<VertexId, VertexId>> es;
  for (const EdgeRecord& e : edges_) {
    if (keep[e.a] && keep[e.b]) es.emplace_back(vertices_[e.a].id, vertices_[e.b].id);
  }
  return EmbeddedSpace(std::move(name), dimension_, std::move(verts), es, tol_, true);
}

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ValidationError(where + ": expected a number");
  return j.get<double>();
}

}  // namespace

EmbeddedSpace load_space(const json& doc) {
  if (!doc.is_object()) throw ValidationError("document: expected an object");
  if (doc.contains("format") && doc.at("format") != "space") {
    throw ValidationError("format: expected \"space\"");
  }
  std::string name = "unnamed";
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) throw ValidationError("name: expected a string");
    name = doc.at("name").get<std::string>();
  }
  const json& dim = require(doc, "dimension", "document");
  if (!dim.is_number_integer() || dim.get<long long>() <= 0) {
    throw ValidationError("dimension: expected a positive integer");
  }
  const std::size_t n = dim.get<std::size_t>();

  const json& vs = require(doc, "vertices", "document");
  if (!vs.is_array()) throw ValidationError("vertices: expected an array");
  std::vector<VertexRecord> verts;
  verts.reserve(vs.size());
  std::set<VertexId> ids;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string where = "vertices[" + std::to_string(i) + "]";
    const json& v = vs[i];
    const json& id = require(v, "id", where);
    if (!id.is_number_integer() || id.get<long long>() < 0) {
      throw ValidationError(where + ".id: expected a nonnegative integer");
    }
    VertexRecord rec;
    rec.id = id.get<VertexId>();
    if (!ids.insert(rec.id).second) {
      throw ValidationError(where + ".id: duplicate vertex id " + std::to_string(rec.id));
    }
    const json& psi = require(v, "psi", where);
    if (!psi.is_array()) throw ValidationError(where + ".psi: expected an array");
    if (psi.size() != n) {
      throw ValidationError(where + ".psi: " + std::to_string(psi.size()) +
                            " coordinates in a " + std::to_string(n) + "-dimensional space");
    }
    std::vector<double> c;
    for (std::size_t k = 0; k < psi.size(); ++k) {
      c.push_back(as_number(psi[k], where + ".psi[" + std::to_string(k) + "]"));
    }
    rec.psi = Vector(std::move(c));
    if (v.contains("labels")) {
      const json& labels = v.at("labels");
      if (!labels.is_array()) throw ValidationError(where + ".labels: expected an array");
      for (const json& l : labels) {
        if (!l.is_string()) throw ValidationError(where + ".labels: expected strings");
        rec.labels.push_back(l.get<std::string>());
      }
    }
    verts.push_back(std::move(rec));
  }

  const json& es = require(doc, "edges", "document");
  if (!es.is_array()) throw ValidationError("edges: expected an array");
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t k = 0; k < es.size(); ++k) {
    const std::string where = "edges[" + std::to_string(k) + "]";
    const json& e = es[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw ValidationError(where + ": expected a pair of vertex ids");
    }
    const VertexId u = e[0].get<VertexId>();
    const VertexId v = e[1].get<VertexId>();
    for (VertexId x : {u, v}) {
      if (!ids.count(x)) throw ValidationError(where + ": dangling edge to unknown id " + std::to_string(x));
    }
    edges.emplace_back(u, v);
  }

  Tolerances tol;
  bool eps_given = false;
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    if (!t.is_object()) throw ValidationError("tolerances: expected an object");
    auto read = [&](const char* key, double& out) {
      if (t.contains(key)) {
        out = as_number(t.at(key), std::string("tolerances.") + key);
        if (!std::isfinite(out) || out < 0) {
          throw ValidationError(std::string("tolerances.") + key + ": must be >= 0");
        }
        return true;
      }
      return false;
    };
    read("eta_collinear", tol.eta_collinear);
    read("eta_hull", tol.eta_hull);
    read("eta_zero", tol.eta_zero);
    eps_given = read("eps_fiber", tol.eps_fiber);
  }
  return EmbeddedSpace(name, n, std::move(verts), edges, tol, eps_given);
}

json to_document(const EmbeddedSpace& s) {
  json doc;
  doc["format"] = "space";
  doc["name"] = s.name();
  doc["dimension"] = s.dimension();
  json verts = json::array();
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    const VertexRecord& v = s.vertex(i);
    json jv;
    jv["id"] = v.id;
    jv["psi"] = v.psi.coords();
    if (!v.labels.empty()) jv["labels"] = v.labels;
    verts.push_back(std::move(jv));
  }
  doc["vertices"] = std::move(verts);
  json edges = json::array();
  for (const EdgeRecord& e : s.edges()) edges.push_back({s.id(e.a), s.id(e.b)});
  doc["edges"] = std::move(edges);
  if (s.eps_fiber_overridden()) doc["tolerances"] = {{"eps_fiber", s.tolerances().eps_fiber}};
  return doc;
}

namespace {

// Components of the subgraph induced on `members` (sorted indices), each
// sorted, ordered by smallest index.
std::vector<std::vector<std::size_t>> components_within(const EmbeddedSpace& s,
                                                        const std::vector<std::size_t>& members) {
  std::unordered_map<std::size_t, std::size_t> slot;
  slot.reserve(members.size() * 2);
  for (std::size_t k = 0; k < members.size(); ++k) slot[members[k]] = k;
  std::vector<char> seen(members.size(), 0);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (seen[k]) continue;
    std::vector<std::size_t> comp;
    std::deque<std::size_t> queue{k};
    seen[k] = 1;
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      comp.push_back(members[cur]);
      for (const Neighbor& nb : s.neighbors(members[cur])) {
        auto it = slot.find(nb.index);
        if (it != slot.end() && !seen[it->second]) {
          seen[it->second] = 1;
          queue.push_back(it->second);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

std::vector<VertexId> to_ids(const EmbeddedSpace& s, const std::vector<std::size_t>& idx) {
  std::vector<VertexId> ids;
  ids.reserve(idx.size());
  for (std::size_t i : idx) ids.push_back(s.id(i));
  return ids;
}

}  // namespace

std::vector<std::vector<std::size_t>> connected_components(const EmbeddedSpace& s) {
  std::vector<std::size_t> all(s.vertex_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return components_within(s, all);
}

bool is_connected(const EmbeddedSpace& s) {
  return s.vertex_count() == 0 || connected_components(s).size() == 1;
}

std::vector<std::size_t> ball_preimage(const EmbeddedSpace& s, const Vector& w, double eps) {
  if (!(eps >= 0.0)) throw ArgumentError("fiber radius must be >= 0");
  if (w.size() != s.dimension()) throw DimensionError("fiber level has wrong dimension");
  std::vector<std::size_t> out;
  const double fiber = s.tolerances().eps_fiber;
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    const double d = distance(s.psi(i), w);
    if (eps > 0.0 ? d < eps : d <= fiber) out.push_back(i);
  }
  return out;
}

std::vector<FiberComponent> fiber_components(const EmbeddedSpace& s, const Vector& w, double eps) {
  std::vector<FiberComponent> out;
  for (auto& comp : components_within(s, ball_preimage(s, w, eps))) {
    out.push_back({w, eps, to_ids(s, comp)});
  }
  return out;
}

std::vector<std::size_t> neighborhood_component_indices(const EmbeddedSpace& s, std::size_t x,
                                                        double eps) {
  if (!(eps > 0.0)) throw ArgumentError("neighborhood_component: eps must be > 0");
  const Vector& w = s.psi(x);
  std::vector<char> seen(s.vertex_count(), 0);
  std::vector<std::size_t> comp;
  std::deque<std::size_t> queue{x};
  seen[x] = 1;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    comp.push_back(cur);
    for (const Neighbor& nb : s.neighbors(cur)) {
      if (!seen[nb.index] && distance(s.psi(nb.index), w) < eps) {
        seen[nb.index] = 1;
        queue.push_back(nb.index);
      }
    }
  }
  std::sort(comp.begin(), comp.end());
  return comp;
}

FiberComponent neighborhood_component(const EmbeddedSpace& s, VertexId x, double eps) {
  const std::size_t xi = s.index_of(x);
  return {s.psi(xi), eps, to_ids(s, neighborhood_component_indices(s, xi, eps))};
}

EmbeddedSpace induced_subspace(const EmbeddedSpace& s, const HullRepresentation& h) {
  if (h.dimension != s.dimension()) throw DimensionError("induced_subspace: hull dimension mismatch");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    if (hull_contains(h, s.psi(i), s.tolerances())) keep.push_back(i);
  }
  const std::string tag = s.name() + " | restricted(" + std::to_string(h.constraints.size()) +
                          " half-spaces)";
  return s.induced_by_indices(keep, tag);
}

EmbeddedSpace restrict_to_vertices(const EmbeddedSpace& s, const std::vector<VertexId>& ids,
                                   const std::string& tag) {
  std::vector<std::size_t> idx;
  idx.reserve(ids.size());
  for (VertexId id : ids) idx.push_back(s.index_of(id));
  std::sort(idx.begin(), idx.end());
  return s.induced_by_indices(idx, s.name() + " | " + tag);
}

std::optional<double> saturation_epsilon(const EmbeddedSpace& s, const Vector& w0,
                                         const std::vector<VertexId>& U) {
  if (w0.size() != s.dimension()) throw DimensionError("saturation_epsilon: wrong dimension");
  std::vector<char> in_u(s.vertex_count(), 0);
  for (VertexId id : U) in_u[s.index_of(id)] = 1;
  const double fiber = s.tolerances().eps_fiber;
  double best = std::numeric_limits<double>::infinity();
  bool outside = false;
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    const double d = distance(s.psi(i), w0);
    if (in_u[i]) continue;
    if (d <= fiber) {
      throw ArgumentError("saturation_epsilon: fiber vertex " + std::to_string(s.id(i)) +
                          " lies outside U");
    }
    outside = true;
    best = std::min(best, d);
  }
  if (!outside) return std::nullopt;
  return best - s.tolerances().eta_zero;
}

std::vector<Vector> distinct_levels(const EmbeddedSpace& s) {
  const double eps = s.tolerances().eps_fiber;
  // Levels kept sorted by first coordinate for a windowed duplicate search;
  // `order` remembers first-occurrence order.
  std::vector<std::pair<double, std::size_t>> by_first;
  std::vector<Vector> order;
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    const Vector& p = s.psi(i);
    auto lo = std::lower_bound(by_first.begin(), by_first.end(), std::pair(p[0] - eps, std::size_t{0}));
    bool dup = false;
    for (auto it = lo; it != by_first.end() && it->first <= p[0] + eps; ++it) {
      if (distance(order[it->second], p) <= eps) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    const std::pair<double, std::size_t> key(p[0], order.size());
    by_first.insert(std::upper_bound(by_first.begin(), by_first.end(), key), key);
    order.push_back(p);
  }
  return order;
}

PolyPathImage path_image(const EmbeddedSpace& s, const VertexPath& p) {
  if (p.vertex_ids.empty()) throw ArgumentError("path_image: empty path");
  PolyPathImage img;
  img.reserve(p.vertex_ids.size());
  std::size_t prev = std::numeric_limits<std::size_t>::max();
  for (VertexId id : p.vertex_ids) {
    const std::size_t i = s.index_of(id);
    if (prev != std::numeric_limits<std::size_t>::max()) {
      const auto nb = s.neighbors(prev);
      const bool adjacent = std::binary_search(nb.begin(), nb.end(), Neighbor{i, 0.0},
                                               [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
      if (!adjacent) {
        throw ArgumentError("path_image: " + std::to_string(s.id(prev)) + " and " + std::to_string(id) +
                            " are not adjacent");
      }
    }
    img.push_back(s.psi(i));
    prev = i;
  }
  return img;
}

}  // namespace lg
