#include "lg/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "lg/errors.hpp"
#include "lg/hull.hpp"
#include "parallel.hpp"

namespace lg {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void sort_witnesses(std::vector<WitnessRecord>& w) {
  std::stable_sort(w.begin(), w.end(), [](const WitnessRecord& a, const WitnessRecord& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.data.dump() < b.data.dump();
  });
}

void finalize(Verdict& v, bool inconclusive) {
  if (!v.witnesses.empty()) {
    v.status = Status::NotConvex;
  } else {
    v.status = inconclusive ? Status::Inconclusive : Status::Convex;
  }
}

// Strictly inside the hull in its affine hull; equality pairs are ignored.
bool relative_interior(const HullRepresentation& h, const Vector& w, double margin) {
  for (const HalfSpace& c : h.constraints) {
    double in_frame = 0.0;
    for (const Vector& b : h.basis) in_frame += dot(c.normal, b) * dot(c.normal, b);
    if (in_frame < 0.5) continue;
    if (dot(c.normal, w) > c.offset - margin) return false;
  }
  return !h.basis.empty();
}

std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t n, std::size_t k,
                                                              std::uint64_t seed) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  if (n < 2) return {};
  const std::size_t total = n * (n - 1) / 2;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  std::uniform_int_distribution<std::size_t> second(0, n - 2);
  std::size_t attempts = 0;
  while (out.size() < std::min(k, total) && attempts < 20 * k + 100) {
    ++attempts;
    std::size_t i = first(rng);
    std::size_t j = second(rng);
    if (j >= i) ++j;
    out.insert({std::min(i, j), std::max(i, j)});
  }
  return {out.begin(), out.end()};
}

// Certificates kept per verdict; straight pairs beyond this are only counted.
constexpr std::size_t kCertificateCap = 256;
constexpr std::size_t kWitnessCap = 1000;

struct PairOutcome {
  std::vector<PsiPathResult> certificates;
  std::vector<WitnessRecord> witnesses;
  std::size_t tested = 0;
  std::size_t straight = 0;
  std::size_t failed = 0;
};

PairOutcome evaluate_source(const EmbeddedSpace& s, std::size_t src,
                            const std::vector<std::size_t>& targets, const VerifyOptions& opt) {
  PairOutcome out;
  const auto tree = shortest_path_tree(s, src);
  const Tolerances& tol = s.tolerances();
  for (std::size_t t : targets) {
    ++out.tested;
    const double gap = distance(s.psi(src), s.psi(t));
    const double d = tree.dist[t];
    if (is_straight_length(d, gap, tol.eta_collinear)) {
      ++out.straight;
      if (opt.keep_certificates && out.certificates.size() < kCertificateCap) {
        out.certificates.push_back(make_path_result(s, tree.path_to(t)));
      }
      continue;
    }
    // Every vertex path has Psi-length >= d, so d above gap plus slack rules
    // out any straight path; small spaces are also searched exhaustively.
    json data;
    data["x0"] = s.id(src);
    data["x1"] = s.id(t);
    data["psi_distance"] = d;
    data["gap"] = gap;
    if (s.vertex_count() <= opt.exhaustive_search_limit) {
      if (exhaustive_straight_search(s, s.id(src), s.id(t))) {
        throw Error("internal: exhaustive search contradicts the distance bound");
      }
      data["proof"] = "exhaustive_search";
    } else {
      data["proof"] = "distance_lower_bound";
    }
    ++out.failed;
    if (out.witnesses.size() < kWitnessCap) out.witnesses.push_back({WitnessKind::NoStraightPath, std::move(data)});
    if (opt.stop_at_first_witness) break;
  }
  return out;
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Convex:
      return "Convex";
    case Status::NotConvex:
      return "NotConvex";
    case Status::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::DisconnectedFiber:
      return "DisconnectedFiber";
    case WitnessKind::NoStraightPath:
      return "NoStraightPath";
    case WitnessKind::NonConvexImage:
      return "NonConvexImage";
    case WitnessKind::NotOpen:
      return "NotOpen";
  }
  return "?";
}

json to_json(const Verdict& v, bool with_timing) {
  json j;
  j["status"] = to_string(v.status);
  json w = json::array();
  for (const WitnessRecord& r : v.witnesses) w.push_back({{"kind", to_string(r.kind)}, {"data", r.data}});
  j["witnesses"] = std::move(w);
  j["certificates"] = v.certificates.size();
  j["stats"] = v.stats;
  if (!v.meta.empty()) j["meta"] = v.meta;
  if (with_timing) j["runtime_ms"] = v.runtime_ms;
  return j;
}

VerifyMode parse_mode(const std::string& text, std::uint64_t seed) {
  VerifyMode m;
  m.seed = seed;
  if (text == "auto") {
    m.kind = VerifyMode::Kind::Auto;
  } else if (text == "exhaustive") {
    m.kind = VerifyMode::Kind::Exhaustive;
  } else if (text.rfind("sampled", 0) == 0) {
    m.kind = VerifyMode::Kind::Sampled;
    if (text.size() > 7) {
      if (text[7] != ':') throw ArgumentError("mode: expected sampled:K");
      try {
        std::size_t used = 0;
        const long long k = std::stoll(text.substr(8), &used);
        if (used != text.size() - 8 || k <= 0) throw ArgumentError("mode: K must be positive");
        m.samples = static_cast<std::size_t>(k);
      } catch (const std::logic_error&) {
        throw ArgumentError("mode: K must be a positive integer");
      }
    }
  } else {
    throw ArgumentError("mode: expected auto, exhaustive or sampled:K");
  }
  return m;
}

unsigned resolve_thread_count(unsigned requested) {
  unsigned n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("LG_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && v > 0) n = static_cast<unsigned>(v);
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

Verdict verify_convex_map(const EmbeddedSpace& s, const VerifyOptions& opt) {
  const auto t0 = Clock::now();
  Verdict v;
  const std::size_t n = s.vertex_count();
  const bool exhaustive = opt.mode.kind == VerifyMode::Kind::Exhaustive ||
                          (opt.mode.kind == VerifyMode::Kind::Auto && n <= opt.exhaustive_vertex_limit);
  v.stats["mode"] = exhaustive ? "exhaustive" : "sampled";
  v.stats["connected"] = true;
  v.stats["pairs_tested"] = 0;
  v.stats["fiber_levels"] = 0;
  v.stats["depth_used"] = n > 1 ? 1 : 0;
  if (n <= 1) {
    v.runtime_ms = elapsed_ms(t0);
    return v;
  }

  const auto comps = connected_components(s);
  if (comps.size() > 1) {
    json reps = json::array();
    for (const auto& c : comps) reps.push_back(s.id(c.front()));
    v.witnesses.push_back({WitnessKind::DisconnectedFiber,
                           {{"scope", "space"}, {"components", comps.size()}, {"representatives", reps}}});
    v.stats["connected"] = false;
    finalize(v, false);
    v.runtime_ms = elapsed_ms(t0);
    return v;
  }

  // Exact fibers first: a disconnected fiber is the most direct witness.
  std::map<std::size_t, std::vector<std::size_t>> targets;
  const auto levels = distinct_levels(s);
  std::size_t fiber_pairs = 0;
  HullRepresentation hull;
  bool have_hull = false;
  for (const Vector& w : levels) {
    const auto members = ball_preimage(s, w, 0.0);
    if (members.size() < 2) continue;
    const auto fcs = fiber_components(s, w, 0.0);
    if (fcs.size() >= 2) {
      if (!have_hull && s.dimension() <= kMaxHullDimension) {
        std::vector<Vector> pts;
        for (std::size_t i = 0; i < n; ++i) pts.push_back(s.psi(i));
        hull = convex_hull(pts);
        have_hull = true;
      }
      json reps = json::array();
      for (const auto& fc : fcs) reps.push_back(fc.member_vertex_ids.front());
      json data = {{"scope", "fiber"},
                   {"level", w.coords()},
                   {"radius", s.tolerances().eps_fiber},
                   {"components", fcs.size()},
                   {"representatives", reps}};
      if (have_hull) data["interior"] = relative_interior(hull, w, 1e-9);
      v.witnesses.push_back({WitnessKind::DisconnectedFiber, std::move(data)});
      if (opt.stop_at_first_witness) break;
      continue;
    }
    if (!exhaustive) {
      for (std::size_t k = 1; k < members.size(); ++k) targets[members[0]].push_back(members[k]);
      fiber_pairs += members.size() - 1;
    }
  }
  v.stats["fiber_levels"] = levels.size();
  v.stats["fiber_pairs"] = fiber_pairs;

  if (!(opt.stop_at_first_witness && !v.witnesses.empty())) {
    // Exhaustive targets are generated per source to keep memory linear.
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> groups;
    if (exhaustive) {
      for (std::size_t i = 0; i + 1 < n; ++i) groups.emplace_back(i, std::vector<std::size_t>{});
    } else {
      for (const auto& [i, j] : sample_pairs(n, opt.mode.samples, opt.mode.seed)) targets[i].push_back(j);
      for (auto& [src, ts] : targets) {
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        groups.emplace_back(src, std::move(ts));
      }
    }
    const auto run = [&](std::size_t g) {
      if (!exhaustive) return evaluate_source(s, groups[g].first, groups[g].second, opt);
      std::vector<std::size_t> ts;
      for (std::size_t j = groups[g].first + 1; j < n; ++j) ts.push_back(j);
      return evaluate_source(s, groups[g].first, ts, opt);
    };
    std::vector<PairOutcome> outcomes(groups.size());
    if (opt.stop_at_first_witness) {
      for (std::size_t g = 0; g < groups.size(); ++g) {
        outcomes[g] = run(g);
        if (!outcomes[g].witnesses.empty()) break;
      }
    } else {
      detail::parallel_for(groups.size(), resolve_thread_count(opt.threads),
                           [&](std::size_t g) { outcomes[g] = run(g); });
    }
    std::size_t tested = 0;
    std::size_t straight = 0;
    std::size_t failed = 0;
    for (PairOutcome& o : outcomes) {
      tested += o.tested;
      straight += o.straight;
      for (auto& c : o.certificates) {
        if (v.certificates.size() < kCertificateCap) v.certificates.push_back(std::move(c));
      }
      failed += o.failed;
      for (auto& w : o.witnesses) {
        if (v.witnesses.size() < kWitnessCap) v.witnesses.push_back(std::move(w));
      }
    }
    v.stats["straight_pairs"] = straight;
    v.stats["failed_pairs"] = failed;
    v.stats["pairs_tested"] = tested;
  }
  if (opt.stop_at_first_witness && v.witnesses.size() > 1) v.witnesses.resize(1);
  sort_witnesses(v.witnesses);
  v.stats["witness_count"] = v.witnesses.size();
  finalize(v, false);
  v.runtime_ms = elapsed_ms(t0);
  return v;
}

namespace {

double point_segment_distance(const Vector& p, const Vector& a, const Vector& b) {
  const Vector ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, lerp(a, b, t));
}

struct ImageModel {
  std::vector<Vector> points;
  std::vector<std::pair<std::size_t, std::size_t>> segments;
  std::vector<std::size_t> level_of;  // vertex index -> point index

  // Distance to points-or-segments, stopping early once within `enough`.
  double distance_to(const Vector& p, double enough) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& q : points) {
      best = std::min(best, distance(p, q));
      if (best <= enough) return best;
    }
    for (const auto& [a, b] : segments) {
      best = std::min(best, point_segment_distance(p, points[a], points[b]));
      if (best <= enough) return best;
    }
    return best;
  }
};

ImageModel build_image(const EmbeddedSpace& s) {
  ImageModel m;
  std::vector<std::pair<Vector, std::size_t>> tagged;
  for (std::size_t i = 0; i < s.vertex_count(); ++i) tagged.emplace_back(s.psi(i), i);
  std::sort(tagged.begin(), tagged.end());
  m.level_of.assign(s.vertex_count(), 0);
  for (std::size_t k = 0; k < tagged.size(); ++k) {
    if (k == 0 || !(tagged[k].first == tagged[k - 1].first)) m.points.push_back(tagged[k].first);
    m.level_of[tagged[k].second] = m.points.size() - 1;
  }
  std::set<std::pair<std::size_t, std::size_t>> segs;
  for (const EdgeRecord& e : s.edges()) {
    const std::size_t a = m.level_of[e.a];
    const std::size_t b = m.level_of[e.b];
    if (a != b) segs.insert({std::min(a, b), std::max(a, b)});
  }
  m.segments.assign(segs.begin(), segs.end());
  return m;
}

}  // namespace

Verdict verify_image_convexity(const EmbeddedSpace& s, const VerifyOptions& opt) {
  const auto t0 = Clock::now();
  Verdict v;
  const ImageModel img = build_image(s);
  const std::size_t m = img.points.size();
  v.stats["image_points"] = m;
  v.stats["image_segments"] = img.segments.size();
  if (m <= 1) {
    v.stats["pairs_tested"] = 0;
    v.stats["delta_cover"] = 0.0;
    v.runtime_ms = elapsed_ms(t0);
    return v;
  }
  const unsigned threads = resolve_thread_count(opt.threads);

  std::vector<double> nn(m, std::numeric_limits<double>::infinity());
  detail::parallel_for(m, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) nn[i] = std::min(nn[i], distance(img.points[i], img.points[j]));
    }
  });
  const double max_nn = *std::max_element(nn.begin(), nn.end());
  const double delta = std::min(max_nn, s.max_edge_length());
  const double slack = s.tolerances().eta_hull * std::max(1.0, delta);
  v.stats["delta_cover"] = delta;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  constexpr std::size_t kPairBudget = 200000;
  if (m * (m - 1) / 2 <= kPairBudget) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
    }
    v.stats["pair_mode"] = "exhaustive";
  } else {
    pairs = sample_pairs(m, kPairBudget, opt.mode.seed);
    v.stats["pair_mode"] = "sampled";
  }
  std::vector<double> gap(pairs.size(), 0.0);
  detail::parallel_for(pairs.size(), threads, [&](std::size_t k) {
    const Vector mid = lerp(img.points[pairs[k].first], img.points[pairs[k].second], 0.5);
    gap[k] = img.distance_to(mid, delta + slack);
  });
  v.stats["pairs_tested"] = pairs.size();

  struct Miss {
    double dist;
    std::size_t order;
    WitnessRecord w;
  };
  std::vector<Miss> misses;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (gap[k] <= delta + slack) continue;
    const Vector mid = lerp(img.points[pairs[k].first], img.points[pairs[k].second], 0.5);
    misses.push_back({gap[k], k,
                      {WitnessKind::NonConvexImage,
                       {{"source", "pair_midpoint"},
                        {"point", mid.coords()},
                        {"p", img.points[pairs[k].first].coords()},
                        {"q", img.points[pairs[k].second].coords()},
                        {"distance", gap[k]},
                        {"delta_cover", delta}}}});
  }

  std::size_t hull_samples = 0;
  if (s.dimension() <= kMaxHullDimension) {
    const HullRepresentation hull = convex_hull(img.points);
    const std::size_t d = hull.affine_dimension();
    v.stats["hull_facets"] = hull.constraints.size();
    v.stats["hull_affine_dimension"] = d;
    if (d >= 1) {
      std::vector<double> lo(d, std::numeric_limits<double>::infinity());
      std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
      for (const Vector& p : img.points) {
        const Vector rel = p - hull.origin;
        for (std::size_t a = 0; a < d; ++a) {
          const double c = dot(rel, hull.basis[a]);
          lo[a] = std::min(lo[a], c);
          hi[a] = std::max(hi[a], c);
        }
      }
      const auto per_axis = static_cast<std::size_t>(std::clamp(
          std::floor(std::pow(20000.0, 1.0 / static_cast<double>(d))), 2.0, 64.0));
      std::size_t total = 1;
      for (std::size_t a = 0; a < d; ++a) total *= per_axis;
      std::vector<Vector> grid;
      for (std::size_t flat = 0; flat < total; ++flat) {
        Vector x = hull.origin;
        std::size_t rem = flat;
        for (std::size_t a = 0; a < d; ++a) {
          const std::size_t k = rem % per_axis;
          rem /= per_axis;
          const double c = lo[a] + (hi[a] - lo[a]) * (static_cast<double>(k) + 0.5) /
                                       static_cast<double>(per_axis);
          x += c * hull.basis[a];
        }
        if (hull_contains(hull, x, s.tolerances())) grid.push_back(std::move(x));
      }
      std::vector<double> gd(grid.size(), 0.0);
      detail::parallel_for(grid.size(), threads,
                           [&](std::size_t k) { gd[k] = img.distance_to(grid[k], delta + slack); });
      hull_samples = grid.size();
      for (std::size_t k = 0; k < grid.size(); ++k) {
        if (gd[k] <= delta + slack) continue;
        misses.push_back({gd[k], pairs.size() + k,
                          {WitnessKind::NonConvexImage,
                           {{"source", "hull_sample"},
                            {"point", grid[k].coords()},
                            {"distance", gd[k]},
                            {"delta_cover", delta}}}});
      }
    }
  }
  v.stats["hull_samples"] = hull_samples;
  v.stats["misses"] = misses.size();
  std::sort(misses.begin(), misses.end(), [](const Miss& a, const Miss& b) {
    return a.dist != b.dist ? a.dist > b.dist : a.order < b.order;
  });
  constexpr std::size_t kKeep = 8;
  for (std::size_t k = 0; k < misses.size() && k < kKeep; ++k) v.witnesses.push_back(std::move(misses[k].w));
  finalize(v, false);
  v.runtime_ms = elapsed_ms(t0);
  return v;
}

Verdict verify_fiber_connectivity(const EmbeddedSpace& s, const LevelSampling& levels) {
  const auto t0 = Clock::now();
  Verdict v;
  const auto all = distinct_levels(s);
  std::vector<Vector> chosen;
  if (levels.count == 0 || levels.count >= all.size()) {
    chosen = all;
  } else if (levels.count == 1) {
    chosen.push_back(all.front());
  } else {
    for (std::size_t i = 0; i < levels.count; ++i) {
      const double pos = static_cast<double>(i) * static_cast<double>(all.size() - 1) /
                         static_cast<double>(levels.count - 1);
      chosen.push_back(all[static_cast<std::size_t>(std::llround(pos))]);
    }
  }
  std::size_t disconnected = 0;
  std::size_t max_components = 0;
  for (const Vector& w : chosen) {
    const auto fcs = fiber_components(s, w, levels.radius);
    max_components = std::max(max_components, fcs.size());
    if (fcs.size() < 2) continue;
    ++disconnected;
    if (v.witnesses.empty()) {
      json reps = json::array();
      for (const auto& fc : fcs) reps.push_back(fc.member_vertex_ids.front());
      v.witnesses.push_back({WitnessKind::DisconnectedFiber,
                             {{"scope", "fiber"},
                              {"level", w.coords()},
                              {"radius", levels.radius > 0 ? levels.radius : s.tolerances().eps_fiber},
                              {"components", fcs.size()},
                              {"representatives", reps}}});
    }
  }
  v.stats["levels_checked"] = chosen.size();
  v.stats["disconnected_levels"] = disconnected;
  v.stats["max_components"] = max_components;
  finalize(v, false);
  v.runtime_ms = elapsed_ms(t0);
  return v;
}

Verdict verify_openness(const EmbeddedSpace& s, int radius_steps) {
  if (radius_steps < 1) throw ArgumentError("verify_openness: radius_steps must be >= 1");
  const auto t0 = Clock::now();
  Verdict v;
  const std::size_t n = s.vertex_count();
  const ImageModel img = build_image(s);
  const double eta = s.tolerances().eta_hull;

  std::size_t checks = 0;
  std::size_t vacuous = 0;
  double min_radius = std::numeric_limits<double>::infinity();
  double min_margin = std::numeric_limits<double>::infinity();
  std::vector<int> hop(n, -1);
  for (std::size_t x = 0; x < n && v.witnesses.empty(); ++x) {
    // Hop layers around x up to radius_steps.
    std::vector<std::size_t> ball{x};
    hop[x] = 0;
    std::size_t layer_begin = 0;
    for (int r = 1; r <= radius_steps && v.witnesses.empty(); ++r) {
      const std::size_t layer_end = ball.size();
      for (std::size_t k = layer_begin; k < layer_end; ++k) {
        for (const Neighbor& nb : s.neighbors(ball[k])) {
          if (hop[nb.index] < 0) {
            hop[nb.index] = r;
            ball.push_back(nb.index);
          }
        }
      }
      layer_begin = layer_end;
      ++checks;
      double rho = std::numeric_limits<double>::infinity();
      for (std::size_t k = layer_end; k < ball.size(); ++k) {
        const double d = distance(s.psi(ball[k]), s.psi(x));
        if (d > s.tolerances().eta_zero) rho = std::min(rho, d);
      }
      if (!std::isfinite(rho)) {
        ++vacuous;
        continue;
      }
      min_radius = std::min(min_radius, rho);
      std::vector<char> present(img.points.size(), 0);
      for (std::size_t b : ball) present[img.level_of[b]] = 1;
      std::vector<std::pair<std::size_t, std::size_t>> local_segments;
      bool segments_built = false;
      for (std::size_t q = 0; q < img.points.size(); ++q) {
        const double dq = distance(img.points[q], s.psi(x));
        if (dq > rho + eta * std::max(1.0, rho)) continue;
        min_margin = std::min(min_margin, rho - dq);
        if (present[q]) continue;
        if (!segments_built) {
          for (std::size_t b : ball) {
            for (const Neighbor& nb : s.neighbors(b)) {
              if (hop[nb.index] >= 0 && b < nb.index) {
                local_segments.emplace_back(img.level_of[b], img.level_of[nb.index]);
              }
            }
          }
          segments_built = true;
        }
        bool covered = false;
        for (const auto& [a, b] : local_segments) {
          if (a != b && point_segment_distance(img.points[q], img.points[a], img.points[b]) <=
                            eta * std::max(1.0, rho)) {
            covered = true;
            break;
          }
        }
        if (!covered) {
          v.witnesses.push_back({WitnessKind::NotOpen,
                                 {{"vertex", s.id(x)},
                                  {"r", r},
                                  {"rho", rho},
                                  {"point", img.points[q].coords()}}});
          break;
        }
      }
    }
    for (std::size_t b : ball) hop[b] = -1;
  }
  v.stats["checks"] = checks;
  v.stats["vacuous_checks"] = vacuous;
  v.stats["min_radius"] = std::isfinite(min_radius) ? json(min_radius) : json(nullptr);
  v.stats["min_margin"] = std::isfinite(min_margin) ? json(min_margin) : json(nullptr);
  finalize(v, false);
  v.runtime_ms = elapsed_ms(t0);
  return v;
}

namespace {

std::string format_eps(double eps) {
  json j = eps;
  return j.dump();
}

Verdict local_verdict(const EmbeddedSpace& s, std::size_t x, double eps,
                      const std::vector<std::size_t>& component, const VerifyOptions& opt) {
  const auto t0 = Clock::now();
  const EmbeddedSpace sub = s.induced_by_indices(
      component, s.name() + " | U[x=" + std::to_string(s.id(x)) + ",eps=" + format_eps(eps) + "]");
  VerifyOptions local = opt;
  local.stop_at_first_witness = true;
  local.keep_certificates = false;
  local.threads = 1;
  Verdict convex = verify_convex_map(sub, local);
  Verdict open;
  if (convex.status != Status::NotConvex) open = verify_openness(sub, 2);
  Verdict v;
  for (auto& w : convex.witnesses) {
    w.data["check"] = "convex_map";
    v.witnesses.push_back(std::move(w));
  }
  for (auto& w : open.witnesses) {
    w.data["check"] = "open";
    v.witnesses.push_back(std::move(w));
  }
  const bool inconclusive =
      convex.status == Status::Inconclusive || open.status == Status::Inconclusive;
  finalize(v, inconclusive);
  v.stats["convex_map"] = convex.stats;
  v.stats["open"] = open.stats;
  v.meta["vertex"] = s.id(x);
  v.meta["eps"] = eps;
  v.meta["component_size"] = component.size();
  v.meta["component_min_id"] = s.id(component.front());
  v.runtime_ms = elapsed_ms(t0);
  return v;
}

}  // namespace

Verdict verify_local_convexity(const EmbeddedSpace& s, VertexId x, double eps,
                               const VerifyOptions& opt) {
  const std::size_t xi = s.index_of(x);
  return local_verdict(s, xi, eps, neighborhood_component_indices(s, xi, eps), opt);
}

std::optional<std::vector<std::size_t>> cover_chain(const std::vector<std::vector<VertexId>>& sets,
                                                    const FiberComponent& fiber,
                                                    std::size_t from, std::size_t to) {
  if (from >= sets.size() || to >= sets.size()) throw ArgumentError("cover_chain: index out of range");
  const std::set<VertexId> f(fiber.member_vertex_ids.begin(), fiber.member_vertex_ids.end());
  std::vector<std::set<VertexId>> on_fiber(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (VertexId id : sets[i]) {
      if (f.count(id)) on_fiber[i].insert(id);
    }
  }
  if (on_fiber[from].empty() || on_fiber[to].empty()) return std::nullopt;
  auto overlap = [&](std::size_t a, std::size_t b) {
    for (VertexId id : on_fiber[a]) {
      if (on_fiber[b].count(id)) return true;
    }
    return false;
  };
  std::vector<std::size_t> parent(sets.size(), kNoVertex);
  std::vector<char> seen(sets.size(), 0);
  std::deque<std::size_t> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    if (cur == to) break;
    for (std::size_t nxt = 0; nxt < sets.size(); ++nxt) {
      if (seen[nxt] || on_fiber[nxt].empty() || !overlap(cur, nxt)) continue;
      seen[nxt] = 1;
      parent[nxt] = cur;
      queue.push_back(nxt);
    }
  }
  if (!seen[to]) return std::nullopt;
  std::vector<std::size_t> chain;
  for (std::size_t cur = to; cur != kNoVertex; cur = parent[cur]) chain.push_back(cur);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::vector<double> default_eps_schedule(const EmbeddedSpace& s) {
  std::vector<double> shortest;
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Neighbor& nb : s.neighbors(i)) {
      if (nb.length > s.tolerances().eta_zero) best = std::min(best, nb.length);
    }
    if (std::isfinite(best)) shortest.push_back(best);
  }
  double base = 1.0;
  if (!shortest.empty()) {
    std::sort(shortest.begin(), shortest.end());
    base = shortest[(shortest.size() - 1) / 2];  // lower median
  }
  return {2.0 * base, 4.0 * base, 8.0 * base};
}

Report local_to_global_report(const EmbeddedSpace& s, const std::vector<double>& eps_schedule,
                              const ReportOptions& opt) {
  for (double e : eps_schedule) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ArgumentError("eps schedule entries must be > 0");
  }
  if (eps_schedule.empty()) throw ArgumentError("eps schedule must not be empty");
  Report r;
  r.space_name = s.name();
  r.dimension = s.dimension();
  r.vertex_count = s.vertex_count();
  r.edge_count = s.edge_count();
  r.tolerances = s.tolerances();
  r.eps_schedule = eps_schedule;
  r.connected = is_connected(s);

  // Local hypotheses. Neighbourhoods are shared by many vertices (whole
  // fibers), so each distinct member set is verified once per eps.
  const std::size_t n = s.vertex_count();
  r.local.resize(n);
  for (std::size_t x = 0; x < n; ++x) r.local[x].vertex = s.id(x);
  for (double eps : eps_schedule) {
    std::map<std::vector<std::size_t>, std::size_t> slot;
    std::vector<std::size_t> slot_of(n, kNoVertex);
    std::vector<std::pair<std::size_t, const std::vector<std::size_t>*>> todo;
    for (std::size_t x = 0; x < n; ++x) {
      if (r.local[x].eps) continue;
      auto [it, fresh] = slot.emplace(neighborhood_component_indices(s, x, eps), todo.size());
      if (fresh) todo.emplace_back(x, &it->first);
      slot_of[x] = it->second;
    }
    std::vector<Status> statuses(todo.size(), Status::Inconclusive);
    detail::parallel_for(todo.size(), resolve_thread_count(opt.verify.threads), [&](std::size_t t) {
      statuses[t] = local_verdict(s, todo[t].first, eps, *todo[t].second, opt.verify).status;
    });
    r.distinct_neighborhoods += todo.size();
    for (std::size_t x = 0; x < n; ++x) {
      if (!r.local[x].eps && statuses[slot_of[x]] == Status::Convex) r.local[x].eps = eps;
    }
  }
  r.local_all = std::all_of(r.local.begin(), r.local.end(),
                            [](const LocalCheck& c) { return c.eps.has_value(); });

  r.convex_map = verify_convex_map(s, opt.verify);
  r.image_convex = verify_image_convexity(s, opt.verify);
  r.fibers_connected = verify_fiber_connectivity(s, opt.levels);
  r.open = verify_openness(s, opt.radius_steps);

  const std::vector<const Verdict*> all{&r.convex_map, &r.image_convex, &r.fibers_connected, &r.open};
  const bool any_not = std::any_of(all.begin(), all.end(),
                                   [](const Verdict* v) { return v->status == Status::NotConvex; });
  const bool all_ok = std::all_of(all.begin(), all.end(),
                                  [](const Verdict* v) { return v->status == Status::Convex; });
  r.status = all_ok ? Status::Convex : (any_not ? Status::NotConvex : Status::Inconclusive);
  const bool hypotheses = r.connected && r.local_all;
  if (hypotheses) {
    r.implication = all_ok ? "observed" : "violated: discretization artifact or bug";
  } else {
    r.implication = "not applicable: hypotheses not met";
  }
  return r;
}

json to_json(const Report& r, bool with_timing) {
  json j;
  j["report_version"] = 1;
  j["space"] = {{"name", r.space_name},
                {"dimension", r.dimension},
                {"vertices", r.vertex_count},
                {"edges", r.edge_count}};
  j["tolerances"] = {{"eta_collinear", r.tolerances.eta_collinear},
                     {"eta_hull", r.tolerances.eta_hull},
                     {"eps_fiber", r.tolerances.eps_fiber},
                     {"eta_zero", r.tolerances.eta_zero}};
  json local = json::array();
  std::size_t failing = 0;
  for (const LocalCheck& c : r.local) {
    local.push_back({{"vertex", c.vertex}, {"eps", c.eps ? json(*c.eps) : json(nullptr)}});
    if (!c.eps) ++failing;
  }
  j["hypotheses"] = {{"connected", r.connected},
                     {"proper", {{"holds", true}, {"basis", "satisfied by finiteness"}}},
                     {"local", std::move(local)},
                     {"local_all", r.local_all},
                     {"local_failing", failing},
                     {"eps_schedule", r.eps_schedule}};
  j["conclusions"] = {{"convex_map", r.convex_map.status == Status::Convex},
                      {"image_convex", r.image_convex.status == Status::Convex},
                      {"fibers_connected", r.fibers_connected.status == Status::Convex},
                      {"open", r.open.status == Status::Convex}};
  j["verdicts"] = {{"convex_map", to_json(r.convex_map, with_timing)},
                   {"image_convex", to_json(r.image_convex, with_timing)},
                   {"fibers_connected", to_json(r.fibers_connected, with_timing)},
                   {"open", to_json(r.open, with_timing)}};
  json witnesses = json::array();
  const std::vector<std::pair<const char*, const Verdict*>> named{{"convex_map", &r.convex_map},
                                                                  {"image_convex", &r.image_convex},
                                                                  {"fibers_connected", &r.fibers_connected},
                                                                  {"open", &r.open}};
  for (const auto& [name, v] : named) {
    for (const WitnessRecord& w : v->witnesses) {
      witnesses.push_back({{"check", name}, {"kind", to_string(w.kind)}, {"data", w.data}});
    }
  }
  j["witnesses"] = std::move(witnesses);
  j["status"] = to_string(r.status);
  j["implication"] = r.implication;
  j["stats"] = {{"distinct_neighborhoods", r.distinct_neighborhoods},
                {"pairs_tested", r.convex_map.stats.value("pairs_tested", 0)}};
  return j;
}

}  // namespace lg
