#include "lg/gallery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "lg/errors.hpp"
#include "lg/tn_sets.hpp"

namespace lg {

using nlohmann::json;

namespace {

double clean(double v) { return v + 0.0; }  // folds -0.0 into 0.0

std::string fmt(double v) { return json(clean(v)).dump(); }

using EdgeSet = std::set<std::pair<VertexId, VertexId>>;

void add_edge(EdgeSet& es, VertexId a, VertexId b) {
  if (a != b) es.insert({std::min(a, b), std::max(a, b)});
}

std::vector<std::pair<VertexId, VertexId>> edge_list(const EdgeSet& es) { return {es.begin(), es.end()}; }

struct Mesh {
  std::vector<std::array<double, 3>> verts;
  std::vector<std::array<std::size_t, 3>> faces;
};

Mesh icosphere(int resolution) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Mesh m;
  const std::array<std::array<double, 3>, 12> base{{{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
                                                    {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
                                                    {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}}};
  auto normalized = [](std::array<double, 3> p) {
    const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    return std::array<double, 3>{p[0] / n, p[1] / n, p[2] / n};
  };
  for (const auto& p : base) m.verts.push_back(normalized(p));
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int r = 0; r < resolution; ++r) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> mid;
    auto midpoint = [&](std::size_t a, std::size_t b) {
      const auto key = std::pair(std::min(a, b), std::max(a, b));
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      const auto& p = m.verts[a];
      const auto& q = m.verts[b];
      m.verts.push_back(normalized({p[0] + q[0], p[1] + q[1], p[2] + q[2]}));
      mid[key] = m.verts.size() - 1;
      return m.verts.size() - 1;
    };
    std::vector<std::array<std::size_t, 3>> next;
    for (const auto& f : m.faces) {
      const std::size_t a = midpoint(f[0], f[1]);
      const std::size_t b = midpoint(f[1], f[2]);
      const std::size_t c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    m.faces = std::move(next);
  }
  return m;
}

// s-grid multi-indices with sum < resolution, lexicographic.
void s_indices(int n, int resolution, std::vector<int>& cur, std::vector<std::vector<int>>& out, int used) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int i = 0; used + i < resolution; ++i) {
    cur.push_back(i);
    s_indices(n, resolution, cur, out, used + i);
    cur.pop_back();
  }
}

// Shared builder for the torus-fibred models: base points (s-grid times an
// optional box grid in extra coordinates) times `circles` theta circles.
// Base-layer (theta = 0) vertices form a complete graph; theta steps are
// fiber edges.
EmbeddedSpace torus_fibred(const std::string& name, std::size_t dim,
                           const std::vector<Vector>& base_psi,
                           const std::vector<std::string>& base_labels, int circles, int m) {
  std::size_t torus = 1;
  for (int c = 0; c < circles; ++c) torus *= static_cast<std::size_t>(m);
  std::vector<VertexRecord> verts;
  verts.reserve(base_psi.size() * torus);
  EdgeSet es;
  for (std::size_t b = 0; b < base_psi.size(); ++b) {
    for (std::size_t t = 0; t < torus; ++t) {
      VertexRecord v;
      v.id = static_cast<VertexId>(b * torus + t);
      v.psi = base_psi[b];
      std::string th = "theta=";
      std::size_t rem = t;
      std::vector<std::size_t> digits(static_cast<std::size_t>(circles));
      for (int c = circles - 1; c >= 0; --c) {
        digits[static_cast<std::size_t>(c)] = rem % static_cast<std::size_t>(m);
        rem /= static_cast<std::size_t>(m);
      }
      for (int c = 0; c < circles; ++c) th += (c ? "," : "") + std::to_string(digits[static_cast<std::size_t>(c)]);
      v.labels = {base_labels[b], th};
      verts.push_back(std::move(v));
      // Step each circle coordinate forward (cyclic).
      std::size_t stride = 1;
      for (int c = circles - 1; c >= 0; --c) {
        const std::size_t d = digits[static_cast<std::size_t>(c)];
        const std::size_t nd = (d + 1) % static_cast<std::size_t>(m);
        const std::size_t t2 = t - d * stride + nd * stride;
        add_edge(es, static_cast<VertexId>(b * torus + t), static_cast<VertexId>(b * torus + t2));
        stride *= static_cast<std::size_t>(m);
      }
    }
  }
  for (std::size_t a = 0; a < base_psi.size(); ++a) {
    for (std::size_t b = a + 1; b < base_psi.size(); ++b) {
      add_edge(es, static_cast<VertexId>(a * torus), static_cast<VertexId>(b * torus));
    }
  }
  return EmbeddedSpace(name, dim, std::move(verts), edge_list(es));
}

void check_common(double rho, int resolution, int theta_samples) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ArgumentError("rho must be > 0");
  if (resolution < 2) throw ArgumentError("resolution must be >= 2");
  if (theta_samples < 8) throw ArgumentError("theta_samples must be >= 8");
}

std::vector<std::vector<int>> simplex_grid(int n, int resolution) {
  std::vector<std::vector<int>> idx;
  std::vector<int> cur;
  s_indices(n, resolution, cur, idx, 0);
  return idx;
}

std::string s_label(const std::vector<int>& i, double pitch) {
  std::string l = "s=";
  for (std::size_t j = 0; j < i.size(); ++j) l += (j ? "," : "") + fmt(i[j] * pitch);
  return l;
}

}  // namespace

EmbeddedSpace gen_sphere(int resolution, SphereMap map) {
  if (resolution < 0 || resolution > 6) throw ArgumentError("sphere resolution must be in [0, 6]");
  const Mesh mesh = icosphere(resolution);
  const std::size_t n = mesh.verts.size();
  EdgeSet es;
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) add_edge(es, static_cast<VertexId>(f[k]), static_cast<VertexId>(f[(k + 1) % 3]));
  }
  std::vector<VertexRecord> verts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = mesh.verts[i];
    verts[i].id = static_cast<VertexId>(i);
    verts[i].labels = {"xyz=" + fmt(p[0]) + "," + fmt(p[1]) + "," + fmt(p[2])};
  }
  if (map == SphereMap::Projection) {
    // An edge joining the open hemispheres has no arc with a straight
    // projected image; split it where its great-circle arc meets the equator.
    // Other edges lift their projected segment to their own hemisphere.
    EdgeSet split;
    std::vector<std::array<double, 3>> pts = mesh.verts;
    for (const auto& [a, b] : es) {
      const auto& p = mesh.verts[static_cast<std::size_t>(a)];
      const auto& q = mesh.verts[static_cast<std::size_t>(b)];
      if (!(p[2] * q[2] < 0.0)) {
        split.insert({a, b});
        continue;
      }
      const double t = p[2] / (p[2] - q[2]);
      const double x = p[0] + t * (q[0] - p[0]);
      const double y = p[1] + t * (q[1] - p[1]);
      const double r = std::hypot(x, y);
      pts.push_back({x / r, y / r, 0.0});
      const auto c = static_cast<VertexId>(pts.size() - 1);
      add_edge(split, a, c);
      add_edge(split, c, b);
    }
    verts.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& p = pts[i];
      verts[i].id = static_cast<VertexId>(i);
      verts[i].psi = Vector{clean(p[0]), clean(p[1])};
      verts[i].labels = {"xyz=" + fmt(p[0]) + "," + fmt(p[1]) + "," + fmt(p[2])};
    }
    return EmbeddedSpace("sphere_projection(r=" + std::to_string(resolution) + ")", 2, std::move(verts),
                         edge_list(split));
  }

  // Height levels: snap values equal up to rounding, ordered by height.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mesh.verts[a][2] < mesh.verts[b][2]; });
  std::vector<std::vector<std::size_t>> levels;
  for (std::size_t i : order) {
    if (levels.empty() || mesh.verts[i][2] - mesh.verts[levels.back().front()][2] > 1e-10) levels.emplace_back();
    levels.back().push_back(i);
  }
  std::vector<std::size_t> level_of(n);
  std::vector<std::size_t> rep(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    auto& members = levels[l];
    std::sort(members.begin(), members.end());
    rep[l] = members.front();
    const double z = clean(mesh.verts[rep[l]][2]);
    for (std::size_t i : members) {
      level_of[i] = l;
      verts[i].psi = Vector{z};
    }
    // Latitude ring, ordered by azimuth.
    std::vector<std::size_t> ring = members;
    std::sort(ring.begin(), ring.end(), [&](std::size_t a, std::size_t b) {
      return std::atan2(mesh.verts[a][1], mesh.verts[a][0]) < std::atan2(mesh.verts[b][1], mesh.verts[b][0]);
    });
    if (ring.size() == 2) add_edge(es, static_cast<VertexId>(ring[0]), static_cast<VertexId>(ring[1]));
    if (ring.size() >= 3) {
      for (std::size_t k = 0; k < ring.size(); ++k) {
        add_edge(es, static_cast<VertexId>(ring[k]), static_cast<VertexId>(ring[(k + 1) % ring.size()]));
      }
    }
  }
  // Level ladder: every vertex reaches the representative of each adjacent level.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = level_of[i];
    if (l > 0) add_edge(es, static_cast<VertexId>(i), static_cast<VertexId>(rep[l - 1]));
    if (l + 1 < levels.size()) add_edge(es, static_cast<VertexId>(i), static_cast<VertexId>(rep[l + 1]));
  }
  return EmbeddedSpace("sphere_height(r=" + std::to_string(resolution) + ")", 1, std::move(verts),
                       edge_list(es));
}

EmbeddedSpace gen_weighted_moment(const std::vector<Vector>& alphas, double rho, int resolution,
                                  int theta_samples) {
  check_common(rho, resolution, theta_samples);
  if (alphas.empty()) throw ArgumentError("alphas must be nonempty");
  const std::size_t dim = alphas.front().size();
  if (dim == 0) throw ArgumentError("alphas must have dimension >= 1");
  for (const Vector& a : alphas) {
    if (a.size() != dim) throw ArgumentError("alphas must share one dimension");
    if (!a.all_finite()) throw ArgumentError("alphas must be finite");
  }
  const int n = static_cast<int>(alphas.size());
  if (n > 4) throw ArgumentError("at most 4 weights are supported");
  const double pitch = rho * rho / resolution;
  std::vector<Vector> psi;
  std::vector<std::string> labels;
  for (const auto& i : simplex_grid(n, resolution)) {
    Vector p(dim, 0.0);
    for (int j = 0; j < n; ++j) p += (i[static_cast<std::size_t>(j)] * pitch) * alphas[static_cast<std::size_t>(j)];
    for (std::size_t c = 0; c < dim; ++c) p[c] = clean(p[c]);
    psi.push_back(std::move(p));
    labels.push_back(s_label(i, pitch));
  }
  return torus_fibred("weighted_moment(n=" + std::to_string(n) + ",res=" + std::to_string(resolution) + ")", dim,
                      psi, labels, n, theta_samples);
}

EmbeddedSpace gen_cn_moment(int n, double rho, int resolution, int theta_samples) {
  if (n < 1 || n > 4) throw ArgumentError("n must be in [1, 4]");
  std::vector<Vector> basis;
  for (int j = 0; j < n; ++j) {
    Vector e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    basis.push_back(e);
  }
  return gen_weighted_moment(basis, rho, resolution, theta_samples)
      .renamed("cn_moment(n=" + std::to_string(n) + ",res=" + std::to_string(resolution) + ")");
}

EmbeddedSpace gen_local_model(int k, const std::vector<std::vector<int>>& weights, int h0_dim, double rho,
                              int resolution, int theta_samples) {
  check_common(rho, resolution, theta_samples);
  if (h0_dim < 0) throw ArgumentError("h0_dim must be >= 0");
  const int n = static_cast<int>(weights.size());
  const int h = n == 0 ? 0 : static_cast<int>(weights.front().size());
  for (const auto& row : weights) {
    if (static_cast<int>(row.size()) != h || h == 0) throw ArgumentError("weights must be a rectangular nonempty matrix");
  }
  if (k != h + h0_dim) throw ArgumentError("k must equal dim H + h0_dim");
  if (k < 1) throw ArgumentError("k must be >= 1");
  if (n + h0_dim > 3) throw ArgumentError("at most 3 circle factors are supported");
  const double pitch = rho * rho / resolution;
  const int nu_points = resolution + 1;
  std::vector<std::vector<int>> nu_idx;
  {
    std::size_t total = 1;
    for (int d = 0; d < h0_dim; ++d) total *= static_cast<std::size_t>(nu_points);
    for (std::size_t f = 0; f < total; ++f) {
      std::vector<int> c(static_cast<std::size_t>(h0_dim));
      std::size_t rem = f;
      for (int d = h0_dim - 1; d >= 0; --d) {
        c[static_cast<std::size_t>(d)] = static_cast<int>(rem % static_cast<std::size_t>(nu_points));
        rem /= static_cast<std::size_t>(nu_points);
      }
      nu_idx.push_back(c);
    }
  }
  std::vector<Vector> psi;
  std::vector<std::string> labels;
  for (const auto& i : simplex_grid(n, resolution)) {
    for (const auto& nu : nu_idx) {
      Vector p(static_cast<std::size_t>(k), 0.0);
      for (int j = 0; j < n; ++j) {
        for (int c = 0; c < h; ++c) {
          p[static_cast<std::size_t>(c)] += i[static_cast<std::size_t>(j)] * pitch * 0.5 *
                                            weights[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
        }
      }
      std::string l = s_label(i, pitch) + ";nu=";
      for (int d = 0; d < h0_dim; ++d) {
        const double v = -1.0 + 2.0 * nu[static_cast<std::size_t>(d)] / resolution;
        p[static_cast<std::size_t>(h + d)] = v;
        l += (d ? "," : "") + fmt(v);
      }
      for (std::size_t c = 0; c < p.size(); ++c) p[c] = clean(p[c]);
      psi.push_back(std::move(p));
      labels.push_back(l);
    }
  }
  // Residual torus directions (k - dim H of them) are extra fiber circles.
  return torus_fibred("local_model(k=" + std::to_string(k) + ",n=" + std::to_string(n) + ",h0=" +
                          std::to_string(h0_dim) + ",res=" + std::to_string(resolution) + ")",
                      static_cast<std::size_t>(k), psi, labels, n + h0_dim, theta_samples);
}

double parabola_value(double x, double y) { return -y + std::sqrt(x * x + y * y); }

EmbeddedSpace gen_parabola_map(double extent, int resolution) {
  if (!(extent > 0.0) || !std::isfinite(extent)) throw ArgumentError("extent must be > 0");
  if (resolution < 8) throw ArgumentError("resolution must be >= 8");
  const double step = extent / resolution;
  // Parabolic coordinates: x = sigma tau, y = (tau^2 - sigma^2) / 2, Psi = sigma^2.
  std::vector<VertexRecord> verts;
  std::map<std::pair<int, int>, VertexId> id_of;  // (i, j) with j in [-res, res]
  auto add = [&](int i, int j) {
    const double sigma = i * step;
    const double tau = j * step;
    VertexRecord v;
    v.id = static_cast<VertexId>(verts.size());
    v.psi = Vector{clean(sigma * sigma)};
    v.labels = {"sigma=" + fmt(sigma), "tau=" + fmt(tau), "x=" + fmt(sigma * tau),
                "y=" + fmt((tau * tau - sigma * sigma) / 2.0)};
    id_of[{i, j}] = v.id;
    verts.push_back(std::move(v));
  };
  for (int j = 0; j <= resolution; ++j) add(0, j);
  for (int i = 1; i <= resolution; ++i) {
    for (int j = -resolution; j <= resolution; ++j) add(i, j);
  }
  auto vid = [&](int i, int j) { return id_of.at({i, i == 0 ? std::abs(j) : j}); };
  EdgeSet es;
  for (int i = 0; i <= resolution; ++i) {
    for (int j = (i == 0 ? 0 : -resolution); j < resolution; ++j) add_edge(es, vid(i, j), vid(i, j + 1));
  }
  for (int i = 0; i < resolution; ++i) {
    for (int j = -resolution; j <= resolution; ++j) add_edge(es, vid(i, j), vid(i + 1, j));
  }
  return EmbeddedSpace("parabola_map(res=" + std::to_string(resolution) + ")", 1, std::move(verts), edge_list(es));
}

EmbeddedSpace gen_cylinder_map(double t_extent, int resolution, int theta_samples) {
  if (!(t_extent > 0.0) || !std::isfinite(t_extent)) throw ArgumentError("t_extent must be > 0");
  if (resolution < 1) throw ArgumentError("resolution must be >= 1");
  if (theta_samples < 8) throw ArgumentError("theta_samples must be >= 8");
  const int m = theta_samples;
  std::vector<VertexRecord> verts;
  for (int i = 0; i <= 2 * resolution; ++i) {
    const double t = t_extent * (i - resolution) / resolution;
    for (int k = 0; k < m; ++k) {
      const double th = 2.0 * std::numbers::pi * k / m;
      VertexRecord v;
      v.id = static_cast<VertexId>(i * m + k);
      v.psi = Vector{clean(t * std::cos(th)), clean(t * std::sin(th))};
      v.labels = {"t=" + fmt(t), "theta=" + std::to_string(k)};
      verts.push_back(std::move(v));
    }
  }
  EdgeSet es;
  for (int i = 0; i < 2 * resolution; ++i) {
    for (int k = 0; k < m; ++k) add_edge(es, i * m + k, (i + 1) * m + k);
  }
  for (int k = 0; k < m; ++k) add_edge(es, resolution * m + k, resolution * m + (k + 1) % m);
  return EmbeddedSpace("cylinder_map(res=" + std::to_string(resolution) + ")", 2, std::move(verts), edge_list(es));
}

double cone_openness_epsilon(const std::vector<Vector>& alphas) {
  if (alphas.empty()) throw ArgumentError("alphas must be nonempty");
  const std::size_t dim = alphas.front().size();
  for (const Vector& a : alphas) {
    if (a.size() != dim || dim == 0) throw DimensionError("alphas must share one positive dimension");
  }
  if (alphas.size() > 16) throw ArgumentError("at most 16 weights are supported");
  const auto l = static_cast<Eigen::Index>(dim);
  double scale = 0.0;
  for (const Vector& a : alphas) scale = std::max(scale, norm(a));
  if (!(scale > 0.0)) throw DegenerateInputError("all alphas are zero");
  const double rank_tol = 1e-12 * scale;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = alphas.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    const auto sz = static_cast<Eigen::Index>(std::popcount(mask));
    if (sz > l) continue;
    Eigen::MatrixXd a(l, sz);
    Eigen::Index col = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!((mask >> j) & 1)) continue;
      for (Eigen::Index r = 0; r < l; ++r) a(r, col) = alphas[j][static_cast<std::size_t>(r)];
      ++col;
    }
    // ||L_J|| = 1 / sigma_min(A_J) on span(A_J).
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const double smin = svd.singularValues()(sz - 1);
    if (smin <= rank_tol) continue;  // dependent subset
    best = std::min(best, smin);
  }
  return 0.99 * best;
}

namespace {

int get_int(const json& p, const char* key, int fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_number_integer()) throw ArgumentError(std::string(key) + ": expected an integer");
  return p.at(key).get<int>();
}

double get_double(const json& p, const char* key, double fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_number()) throw ArgumentError(std::string(key) + ": expected a number");
  return p.at(key).get<double>();
}

std::vector<Vector> get_vectors(const json& p, const char* key) {
  if (!p.contains(key) || !p.at(key).is_array()) throw ArgumentError(std::string(key) + ": expected a list of vectors");
  std::vector<Vector> out;
  for (const json& row : p.at(key)) {
    if (!row.is_array()) throw ArgumentError(std::string(key) + ": expected a list of vectors");
    std::vector<double> c;
    for (const json& v : row) {
      if (!v.is_number()) throw ArgumentError(std::string(key) + ": expected numbers");
      c.push_back(v.get<double>());
    }
    out.emplace_back(std::move(c));
  }
  return out;
}

json truth(const char* verdict, const std::string& image) {
  return {{"expected_verdict", verdict}, {"expected_image_description", image}};
}

}  // namespace

std::vector<std::string> generator_kinds() {
  return {"sphere_height", "sphere_projection", "cn_moment",    "weighted_moment",
          "local_model",   "parabola_map",      "cylinder_map", "grid_random"};
}

Generated generate(const GeneratorSpec& spec) {
  const json& p = spec.params;
  if (!p.is_object()) throw ArgumentError("generator parameters must be an object");
  const std::string& k = spec.kind;
  if (k == "sphere_height" || k == "sphere_projection") {
    const bool height = k == "sphere_height";
    const auto s = gen_sphere(get_int(p, "resolution", 2), height ? SphereMap::Height : SphereMap::Projection);
    return {to_document(s), height ? truth("Convex", "interval [-1, 1]")
                                   : truth("NotConvex", "closed unit disk; interior fibers have 2 points")};
  }
  if (k == "cn_moment") {
    const int n = get_int(p, "n", 2);
    const double rho = get_double(p, "rho", 1.0);
    const auto s = gen_cn_moment(n, rho, get_int(p, "resolution", 10), get_int(p, "theta_samples", 8));
    return {to_document(s), truth("Convex", "simplex {s >= 0, sum s < " + fmt(rho * rho) + "} in R^" +
                                                std::to_string(n))};
  }
  if (k == "weighted_moment") {
    const auto alphas = get_vectors(p, "alphas");
    const auto s = gen_weighted_moment(alphas, get_double(p, "rho", 1.0), get_int(p, "resolution", 10),
                                       get_int(p, "theta_samples", 8));
    return {to_document(s), truth("Convex", "linear image of the simplex under s -> sum s_j alpha_j")};
  }
  if (k == "local_model") {
    std::vector<std::vector<int>> weights;
    if (p.contains("weights")) {
      if (!p.at("weights").is_array()) throw ArgumentError("weights: expected an integer matrix");
      for (const json& row : p.at("weights")) {
        if (!row.is_array()) throw ArgumentError("weights: expected an integer matrix");
        std::vector<int> r;
        for (const json& v : row) {
          if (!v.is_number_integer()) throw ArgumentError("weights: expected integers");
          r.push_back(v.get<int>());
        }
        weights.push_back(std::move(r));
      }
    }
    const auto s = gen_local_model(get_int(p, "k", 2), weights, get_int(p, "h0_dim", 1), get_double(p, "rho", 1.0),
                                   get_int(p, "resolution", 4), get_int(p, "theta_samples", 8));
    return {to_document(s), truth("Convex", "(cone image of the simplex) x box [-1,1]^h0")};
  }
  if (k == "parabola_map") {
    const double extent = get_double(p, "extent", 2.0);
    const auto s = gen_parabola_map(extent, get_int(p, "resolution", 8));
    return {to_document(s), truth("Convex", "interval [0, " + fmt(extent * extent) + "]")};
  }
  if (k == "cylinder_map") {
    const double t = get_double(p, "t_extent", 1.0);
    const auto s = gen_cylinder_map(t, get_int(p, "resolution", 4), get_int(p, "theta_samples", 8));
    return {to_document(s), truth("NotConvex", "disk of radius " + fmt(t) +
                                                   "; fibers over nonzero points are two points")};
  }
  if (k == "grid_random") {
    const int seed = get_int(p, "seed", 0);
    const std::string shape = p.value("shape", std::string("convex"));
    const int box = get_int(p, "box", 40);
    if (box < 20 || box > 200) throw ArgumentError("box must be in [20, 200]");
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    if (shape == "convex") {
      return {to_document(random_convex_grid(rng, box)), truth("Convex", "digitized convex polygon")};
    }
    return {to_document(random_nonconvex_grid(rng, shape, box)), truth("NotConvex", "digitized " + shape)};
  }
  throw ArgumentError("unknown generator kind '" + k + "'");
}

}  // namespace lg
