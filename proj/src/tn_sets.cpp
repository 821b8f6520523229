#include "lg/tn_sets.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_map>

#include "lg/errors.hpp"
#include "lg/psi_metric.hpp"

namespace lg {

using nlohmann::json;

GridSet::GridSet(int dimension, double spacing, std::vector<Cell> cells)
    : dim_(dimension), h_(spacing), cells_(std::move(cells)) {
  if (dim_ < 1 || dim_ > 3) throw ArgumentError("grid dimension must be 1, 2 or 3");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw ArgumentError("grid spacing must be positive");
  if (cells_.empty()) throw ArgumentError("grid set must be nonempty");
  for (Cell& c : cells_) {
    for (int k = dim_; k < 3; ++k) c[static_cast<std::size_t>(k)] = 0;
  }
  std::sort(cells_.begin(), cells_.end());
  cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
  Cell hi = cells_.front();
  lo_ = cells_.front();
  for (const Cell& c : cells_) {
    for (std::size_t k = 0; k < 3; ++k) {
      lo_[k] = std::min(lo_[k], c[k]);
      hi[k] = std::max(hi[k], c[k]);
    }
  }
  std::size_t total = 1;
  for (std::size_t k = 0; k < 3; ++k) {
    lo_[k] -= 1;
    ext_[k] = hi[k] - lo_[k] + 2;
    total *= static_cast<std::size_t>(ext_[k]);
  }
  if (total > 200'000'000) throw ArgumentError("grid set bounding box too large");
  occ_.assign(total, 0);
  for (const Cell& c : cells_) {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < 3; ++k) flat = flat * static_cast<std::size_t>(ext_[k]) + static_cast<std::size_t>(c[k] - lo_[k]);
    occ_[flat] = 1;
  }
}

bool GridSet::contains(const Cell& c) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::int32_t off = c[k] - lo_[k];
    if (off < 0 || off >= ext_[k]) return false;
    flat = flat * static_cast<std::size_t>(ext_[k]) + static_cast<std::size_t>(off);
  }
  return occ_[flat] != 0;
}

std::optional<std::size_t> GridSet::index_of(const Cell& c) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), c);
  if (it == cells_.end() || *it != c) return std::nullopt;
  return static_cast<std::size_t>(it - cells_.begin());
}

GridSet load_grid(const json& doc) {
  if (!doc.is_object()) throw ValidationError("document: expected an object");
  if (doc.contains("format") && doc.at("format") != "grid") {
    throw ValidationError("format: expected \"grid\"");
  }
  for (const char* key : {"dimension", "spacing", "cells"}) {
    if (!doc.contains(key)) throw ValidationError(std::string("document: missing field '") + key + "'");
  }
  const json& d = doc.at("dimension");
  if (!d.is_number_integer() || d.get<int>() < 1 || d.get<int>() > 3) {
    throw ValidationError("dimension: expected 1, 2 or 3");
  }
  const int n = d.get<int>();
  const json& h = doc.at("spacing");
  if (!h.is_number() || !(h.get<double>() > 0.0)) throw ValidationError("spacing: expected a positive number");
  const json& cs = doc.at("cells");
  if (!cs.is_array() || cs.empty()) throw ValidationError("cells: expected a nonempty array");
  std::vector<Cell> cells;
  std::set<Cell> seen;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string where = "cells[" + std::to_string(i) + "]";
    const json& c = cs[i];
    if (!c.is_array() || c.size() != static_cast<std::size_t>(n)) {
      throw ValidationError(where + ": expected " + std::to_string(n) + " integer coordinates");
    }
    Cell cell{0, 0, 0};
    for (int k = 0; k < n; ++k) {
      if (!c[static_cast<std::size_t>(k)].is_number_integer()) throw ValidationError(where + ": coordinates must be integers");
      cell[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)].get<std::int32_t>();
    }
    if (!seen.insert(cell).second) throw ValidationError(where + ": duplicate cell");
    cells.push_back(cell);
  }
  return GridSet(n, h.get<double>(), std::move(cells));
}

json cell_json(const GridSet& g, const Cell& c) {
  json a = json::array();
  for (int k = 0; k < g.dimension(); ++k) a.push_back(c[static_cast<std::size_t>(k)]);
  return a;
}

json to_document(const GridSet& g) {
  json doc;
  doc["format"] = "grid";
  doc["dimension"] = g.dimension();
  doc["spacing"] = g.spacing();
  json cells = json::array();
  for (const Cell& c : g.cells()) cells.push_back(cell_json(g, c));
  doc["cells"] = std::move(cells);
  return doc;
}

GridSet parse_raster(const std::string& text, double spacing) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string token;
  std::vector<std::string> tokens;
  {
    std::istringstream probe(text);
    probe >> token;
  }
  if (token == "P1") {
    std::string line;
    std::string body;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      body += line + "\n";
    }
    std::istringstream bs(body);
    std::string magic;
    long w = 0;
    long hgt = 0;
    if (!(bs >> magic >> w >> hgt) || w <= 0 || hgt <= 0) throw ValidationError("raster: bad PBM header");
    std::string bits;
    char ch = 0;
    while (bs.get(ch)) {
      if (ch == '0' || ch == '1') bits.push_back(ch);
      else if (!std::isspace(static_cast<unsigned char>(ch))) throw ValidationError("raster: unexpected character in PBM body");
    }
    if (bits.size() != static_cast<std::size_t>(w * hgt)) throw ValidationError("raster: PBM size mismatch");
    for (long r = 0; r < hgt; ++r) rows.push_back(bits.substr(static_cast<std::size_t>(r * w), static_cast<std::size_t>(w)));
  } else {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string row;
      for (char ch : line) {
        if (ch == '0' || ch == '1') row.push_back(ch);
        else if (!std::isspace(static_cast<unsigned char>(ch))) {
          throw ValidationError("raster line " + std::to_string(lineno) + ": expected 0/1 characters");
        }
      }
      if (!row.empty()) rows.push_back(row);
    }
  }
  std::vector<Cell> cells;
  const auto nrows = static_cast<std::int32_t>(rows.size());
  for (std::int32_t r = 0; r < nrows; ++r) {
    for (std::size_t c = 0; c < rows[static_cast<std::size_t>(r)].size(); ++c) {
      if (rows[static_cast<std::size_t>(r)][c] == '1') cells.push_back({static_cast<std::int32_t>(c), nrows - 1 - r, 0});
    }
  }
  if (cells.empty()) throw ValidationError("raster: no set cells");
  return GridSet(2, spacing, std::move(cells));
}

EmbeddedSpace to_embedded_space(const GridSet& g) {
  const int n = g.dimension();
  std::vector<VertexRecord> verts;
  verts.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Cell& c = g.cells()[i];
    VertexRecord v;
    v.id = static_cast<VertexId>(i);
    std::vector<double> p;
    std::string label = "cell=";
    for (int k = 0; k < n; ++k) {
      p.push_back(c[static_cast<std::size_t>(k)] * g.spacing());
      label += (k ? "," : "") + std::to_string(c[static_cast<std::size_t>(k)]);
    }
    v.psi = Vector(std::move(p));
    v.labels.push_back(std::move(label));
    verts.push_back(std::move(v));
  }
  // Forward offsets in {-1,0,1}^n (lexicographically positive). Closed cells
  // that share only a corner still contain the segment between their centres.
  std::vector<Cell> offsets;
  const int span = n;
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = (span >= 2 ? -1 : 0); dy <= (span >= 2 ? 1 : 0); ++dy) {
      for (int dz = (span >= 3 ? -1 : 0); dz <= (span >= 3 ? 1 : 0); ++dz) {
        const Cell o{dx, dy, dz};
        if (o > Cell{0, 0, 0}) offsets.push_back(o);
      }
    }
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Cell& c = g.cells()[i];
    for (const Cell& o : offsets) {
      const Cell t{c[0] + o[0], c[1] + o[1], c[2] + o[2]};
      const auto j = g.index_of(t);
      if (!j) continue;
      edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(*j));
    }
  }
  return EmbeddedSpace("grid", static_cast<std::size_t>(n), std::move(verts), edges);
}

namespace {

// Sample p (lattice units) lies within 1/2 of some present closed cell.
bool near_present_cell(const GridSet& g, const double* p) {
  const int n = g.dimension();
  Cell base{0, 0, 0};
  for (int k = 0; k < n; ++k) base[static_cast<std::size_t>(k)] = static_cast<std::int32_t>(std::lround(p[k]));
  if (g.contains(base)) return true;
  const int lo1 = -1, hi1 = 1;
  for (int dx = lo1; dx <= hi1; ++dx) {
    for (int dy = (n >= 2 ? lo1 : 0); dy <= (n >= 2 ? hi1 : 0); ++dy) {
      for (int dz = (n >= 3 ? lo1 : 0); dz <= (n >= 3 ? hi1 : 0); ++dz) {
        const Cell c{base[0] + dx, base[1] + dy, base[2] + dz};
        if (!g.contains(c)) continue;
        double d2 = 0.0;
        for (int k = 0; k < n; ++k) {
          const double e = std::max(std::abs(p[k] - c[static_cast<std::size_t>(k)]) - 0.5, 0.0);
          d2 += e * e;
        }
        if (d2 <= 0.25 + 1e-12) return true;
      }
    }
  }
  return false;
}

double cell_distance(const Cell& a, const Cell& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double d = static_cast<double>(a[k]) - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

struct PairKey {
  std::size_t operator()(const std::pair<std::size_t, std::size_t>& p) const {
    return std::hash<std::size_t>()(p.first * 1000003u ^ p.second);
  }
};

// Oracle results keyed by cell-index pair, shared across delta values.
class OracleCache {
 public:
  explicit OracleCache(const GridSet& g) : g_(g) {}
  bool inside(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    auto [it, fresh] = memo_.emplace(std::pair(i, j), false);
    if (fresh) it->second = segment_inside_oracle(g_, g_.cells()[i], g_.cells()[j]);
    return it->second;
  }

 private:
  const GridSet& g_;
  std::unordered_map<std::pair<std::size_t, std::size_t>, bool, PairKey> memo_;
};

std::vector<std::size_t> region_indices(const GridSet& g, const std::vector<Cell>& region) {
  std::vector<std::size_t> idx;
  if (region.empty()) {
    for (std::size_t i = 0; i < g.size(); ++i) idx.push_back(i);
    return idx;
  }
  for (const Cell& c : region) {
    Cell cc = c;
    for (int k = g.dimension(); k < 3; ++k) cc[static_cast<std::size_t>(k)] = 0;
    const auto i = g.index_of(cc);
    if (!i) throw ArgumentError("region cell not in the grid set");
    idx.push_back(*i);
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

LocalConvexityResult locally_convex_cached(const GridSet& g, double delta,
                                           const std::vector<std::size_t>& region,
                                           OracleCache& cache) {
  if (!(delta > 0.0)) throw ArgumentError("is_locally_convex: delta must be > 0");
  const double r = delta / g.spacing();
  const double slack = 1e-9 * std::max(1.0, r);
  const auto& cells = g.cells();
  // Pairs (a,b) that fail the oracle matter only when some centre x in the
  // region has both within the closed ball of radius r.
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      if (cell_distance(cells[a], cells[b]) > 2.0 * r + slack) continue;
      if (cache.inside(a, b)) continue;
      for (std::size_t x : region) {
        if (cell_distance(cells[x], cells[a]) <= r + slack && cell_distance(cells[x], cells[b]) <= r + slack) {
          return {false, LocalConvexityWitness{cells[x], cells[a], cells[b]}};
        }
      }
    }
  }
  return {true, std::nullopt};
}

}  // namespace

bool segment_inside_oracle(const GridSet& g, const Cell& a, const Cell& b) {
  if (!g.contains(a) || !g.contains(b)) throw ArgumentError("segment_inside_oracle: endpoint not in set");
  const double len = cell_distance(a, b);
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(4.0 * len)));
  double p[3];
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps);
    for (std::size_t c = 0; c < 3; ++c) p[c] = a[c] + t * (b[c] - a[c]);
    if (!near_present_cell(g, p)) return false;
  }
  return true;
}

LocalConvexityResult is_locally_convex(const GridSet& g, double delta, const std::vector<Cell>& region) {
  OracleCache cache(g);
  return locally_convex_cached(g, delta, region_indices(g, region), cache);
}

double grid_diameter(const GridSet& g) {
  const auto& cells = g.cells();
  double best = 0.0;
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = a + 1; b < cells.size(); ++b) best = std::max(best, cell_distance(cells[a], cells[b]));
  }
  return best * g.spacing();
}

namespace {

double uniform_radius_cached(const GridSet& g, const std::vector<std::size_t>& region,
                              OracleCache& cache, std::optional<LocalConvexityWitness>* first_fail) {
  const double h = g.spacing();
  const double cap = std::max(h, grid_diameter(g));
  double passed = 0.0;
  for (double delta = h;; delta *= 2.0) {
    const double d = std::min(delta, cap);
    const auto res = locally_convex_cached(g, d, region, cache);
    if (!res.holds) {
      if (first_fail) *first_fail = res.witness;
      if (passed == 0.0) {
        const auto& w = *res.witness;
        throw LocalConvexityViolation("not locally convex at delta = h: centre (" +
                                      std::to_string(w.x[0]) + "," + std::to_string(w.x[1]) + "," +
                                      std::to_string(w.x[2]) + ")");
      }
      return passed;
    }
    passed = d;
    if (d >= cap) return passed;
  }
}

}  // namespace

double uniform_local_convexity_radius(const GridSet& g, const std::vector<Cell>& region) {
  OracleCache cache(g);
  return uniform_radius_cached(g, region_indices(g, region), cache, nullptr);
}

TnReport tn_verdict(const GridSet& g, const TnOptions& opt) {
  TnReport r;
  const auto t0 = std::chrono::steady_clock::now();
  const EmbeddedSpace es = to_embedded_space(g);
  r.connected = is_connected(es);
  OracleCache cache(g);
  const auto region = region_indices(g, {});
  try {
    r.uniform_radius = uniform_radius_cached(g, region, cache, &r.local_witness);
  } catch (const LocalConvexityViolation&) {
    r.uniform_radius = 0.0;
  }
  const double h = g.spacing();
  r.required_radius = std::min(opt.required_radius_cells * h, std::max(h, grid_diameter(g)));
  r.locally_convex = r.uniform_radius >= r.required_radius - 1e-12;
  if (r.locally_convex) r.local_witness.reset();

  Verdict& v = r.verdict;
  const std::size_t n = g.size();
  const bool exhaustive = n <= opt.exhaustive_cell_limit;
  std::map<std::size_t, std::vector<std::size_t>> targets;
  if (exhaustive) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) targets[i].push_back(j);
    }
  } else {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::set<std::pair<std::size_t, std::size_t>> chosen;
    for (std::size_t k = 0; k < 20 * opt.samples && chosen.size() < opt.samples; ++k) {
      const std::size_t i = pick(rng);
      const std::size_t j = pick(rng);
      if (i != j) chosen.insert({std::min(i, j), std::max(i, j)});
    }
    for (const auto& [i, j] : chosen) targets[i].push_back(j);
  }

  if (!r.connected) {
    const auto comps = connected_components(es);
    json reps = json::array();
    for (const auto& c : comps) reps.push_back(cell_json(g, g.cells()[c.front()]));
    v.witnesses.push_back({WitnessKind::DisconnectedFiber,
                           {{"scope", "space"}, {"components", comps.size()}, {"representatives", reps}}});
  }
  std::size_t tested = 0;
  std::size_t oracle_failures = 0;
  std::size_t metric_slack_failures = 0;
  for (const auto& [i, ts] : targets) {
    const auto tree = shortest_path_tree(es, i);
    for (std::size_t j : ts) {
      ++tested;
      if (!cache.inside(i, j)) {
        ++oracle_failures;
        if (v.witnesses.size() < 8) {
          v.witnesses.push_back({WitnessKind::NonConvexImage,
                                 {{"source", "segment_oracle"},
                                  {"a", cell_json(g, g.cells()[i])},
                                  {"b", cell_json(g, g.cells()[j])}}});
        }
        continue;
      }
      if (!tree.reached(j)) continue;
      const double euclid = distance(es.psi(i), es.psi(j));
      const double slack = opt.slack_factor * h * std::sqrt(static_cast<double>(std::max(tree.hops[j], 1)));
      if (tree.dist[j] > euclid + slack) ++metric_slack_failures;
    }
  }
  v.stats["cells"] = n;
  v.stats["mode"] = exhaustive ? "exhaustive" : "sampled";
  v.stats["pairs_tested"] = tested;
  v.stats["oracle_failures"] = oracle_failures;
  v.stats["metric_slack_failures"] = metric_slack_failures;
  if (!v.witnesses.empty()) {
    v.status = Status::NotConvex;
  } else {
    v.status = metric_slack_failures > 0 ? Status::Inconclusive : Status::Convex;
  }
  v.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

json to_json(const TnReport& r) {
  json j;
  j["report_version"] = 1;
  j["kind"] = "grid";
  json lw = nullptr;
  if (r.local_witness) {
    lw = {{"x", r.local_witness->x}, {"a", r.local_witness->a}, {"b", r.local_witness->b}};
  }
  j["hypotheses"] = {{"connected", r.connected},
                     {"closed", {{"holds", true}, {"basis", "union of closed cells"}}},
                     {"locally_convex", r.locally_convex},
                     {"uniform_radius", r.uniform_radius},
                     {"required_radius", r.required_radius},
                     {"local_witness", lw}};
  j["conclusions"] = {{"convex", r.verdict.status == Status::Convex}};
  j["verdict"] = to_json(r.verdict);
  j["witnesses"] = j["verdict"]["witnesses"];
  j["status"] = to_string(r.verdict.status);
  const bool hyp = r.connected && r.locally_convex;
  j["implication"] = hyp ? (r.verdict.status == Status::Convex ? "observed"
                                                               : "violated: discretization artifact or bug")
                         : "not applicable: hypotheses not met";
  return j;
}

GridSet random_convex_grid(std::mt19937_64& rng, int box) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lo = 0.35 * box;
  const double cx = lo + unit(rng) * (box - 2 * lo);
  const double cy = lo + unit(rng) * (box - 2 * lo);
  const double inradius = 3.0 + 4.0 * unit(rng);
  const int k = 3 + static_cast<int>(unit(rng) * 6.0);
  const double phase = 2.0 * std::numbers::pi * unit(rng);
  std::vector<std::array<double, 3>> planes;  // nx, ny, offset
  for (int i = 0; i < k; ++i) {
    const double jitter = (unit(rng) - 0.5) * std::numbers::pi / k;
    const double th = phase + 2.0 * std::numbers::pi * i / k + jitter;
    planes.push_back({std::cos(th), std::sin(th), inradius * (1.0 + 0.6 * unit(rng))});
  }
  std::vector<Cell> cells;
  for (int x = 0; x < box; ++x) {
    for (int y = 0; y < box; ++y) {
      bool in = true;
      for (const auto& p : planes) in = in && p[0] * (x - cx) + p[1] * (y - cy) <= p[2];
      if (in) cells.push_back({x, y, 0});
    }
  }
  return GridSet(2, 1.0, std::move(cells));
}

GridSet random_nonconvex_grid(std::mt19937_64& rng, const std::string& kind, int box) {
  auto uni = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  std::vector<Cell> cells;
  auto rect = [&](int x0, int y0, int w, int h, auto&& keep) {
    for (int x = x0; x < x0 + w; ++x) {
      for (int y = y0; y < y0 + h; ++y) {
        if (keep(x - x0, y - y0)) cells.push_back({x, y, 0});
      }
    }
  };
  if (kind == "lshape") {
    const int w = uni(7, 20), h = uni(7, 20);
    const int a = uni(3, w - 3), b = uni(3, h - 3);
    rect(uni(0, box - w), uni(0, box - h), w, h, [&](int x, int y) { return !(x >= w - a && y >= h - b); });
  } else if (kind == "ushape") {
    const int w = uni(9, 20), h = uni(7, 20);
    const int sw = uni(3, w - 6), sd = uni(3, h - 3);
    const int s0 = uni(3, w - 3 - sw);
    rect(uni(0, box - w), uni(0, box - h), w, h,
         [&](int x, int y) { return !(x >= s0 && x < s0 + sw && y >= h - sd); });
  } else if (kind == "tshape") {
    const int w = uni(9, 20), bar = uni(3, 6), stem = uni(3, w - 6), sh = uni(3, 12);
    const int s0 = uni(3, w - 3 - stem);
    const int h = bar + sh;
    rect(uni(0, box - w), uni(0, box - h), w, h,
         [&](int x, int y) { return y >= sh || (x >= s0 && x < s0 + stem); });
  } else if (kind == "annulus") {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double ro = 6.0 + 6.0 * unit(rng);
    const double ri = 2.5 + (ro - 5.5) * unit(rng);
    const double c = box / 2.0;
    for (int x = 0; x < box; ++x) {
      for (int y = 0; y < box; ++y) {
        const double d = std::hypot(x - c, y - c);
        if (d > ri && d <= ro) cells.push_back({x, y, 0});
      }
    }
  } else {
    throw ArgumentError("unknown grid shape '" + kind + "'");
  }
  return GridSet(2, 1.0, std::move(cells));
}

}  // namespace lg
