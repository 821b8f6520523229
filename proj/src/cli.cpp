#include "lg/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lg/errors.hpp"
#include "lg/gallery.hpp"
#include "lg/psi_metric.hpp"
#include "lg/tn_sets.hpp"
#include "lg/verifier.hpp"

namespace lg {

using nlohmann::json;

namespace {

struct RunConfig {
  std::vector<std::string> inputs;
  std::string output;
  std::string format = "json";
  std::string mode = "auto";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string eps_schedule;
  double tol_collinear = -1.0;
  double tol_hull = -1.0;
  double eps_fiber = -1.0;
  int max_depth = -1;
  std::size_t levels = 0;
  bool timings = false;
  std::string plot_data;

  VertexId from = 0;
  VertexId to = 0;
  bool with_path = false;

  std::string kind;
  std::string truth_path;
  std::string params_json;
  std::vector<std::pair<std::string, std::string>> raw_params;

  std::size_t random_grids = 0;
  std::string shape = "convex";
  int box = 40;
  bool override_bounds = false;
  bool inject = false;
  std::size_t cell_limit = 2000;
};

// Input errors surface as exit 3.
struct InputError : Error {
  using Error::Error;
};

struct Input {
  std::optional<EmbeddedSpace> space;
  std::optional<GridSet> grid;
};

std::string read_all(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Input load_input(const std::string& path) {
  const std::string text = read_all(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  Input in;
  if (first != std::string::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError(path + ": invalid JSON: " + e.what());
    }
    const std::string fmt = doc.contains("format") && doc["format"].is_string() ? doc["format"].get<std::string>() : "";
    if (fmt == "space") {
      in.space = load_space(doc);
    } else if (fmt == "grid") {
      in.grid = load_grid(doc);
    } else {
      throw InputError(path + ": missing or unknown \"format\" (expected \"space\" or \"grid\")");
    }
    return in;
  }
  in.grid = parse_raster(text);
  return in;
}

void check_output_path(const std::string& path) {
  if (path.empty() || path == "-") return;
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent)) {
    throw InputError("output directory '" + parent.string() + "' does not exist");
  }
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
  if (!f) throw InputError("write failed for '" + path + "'");
}

std::string num(double v) {
  if (std::isinf(v)) return "infinity";
  return json(v + 0.0).dump();
}

EmbeddedSpace apply_tolerances(const EmbeddedSpace& s, const RunConfig& c) {
  if (c.tol_collinear < 0 && c.tol_hull < 0 && c.eps_fiber < 0) return s;
  Tolerances t = s.tolerances();
  if (c.tol_collinear >= 0) t.eta_collinear = c.tol_collinear;
  if (c.tol_hull >= 0) t.eta_hull = c.tol_hull;
  if (c.eps_fiber >= 0) t.eps_fiber = c.eps_fiber;
  t.validate();
  return s.with_tolerances(t, c.eps_fiber >= 0 || s.eps_fiber_overridden());
}

EmbeddedSpace space_of(const Input& in, const RunConfig& c) {
  return apply_tolerances(in.space ? *in.space : to_embedded_space(*in.grid), c);
}

VerifyOptions verify_options(const RunConfig& c) {
  if (c.mode.rfind("sampled", 0) == 0 && !c.seed_given) throw InputError("--seed is required with sampled mode");
  VerifyOptions o;
  o.mode = parse_mode(c.mode, c.seed);
  return o;
}

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw InputError(std::string(what) + ": cannot parse '" + tok + "'");
    }
    if (used != tok.size() && tok.find_first_not_of(" ", used) != std::string::npos) {
      throw InputError(std::string(what) + ": cannot parse '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

// "a,b;c,d" -> [[a,b],[c,d]]; an empty row is a zero-length vector.
json parse_matrix(const std::string& text, const char* what) {
  json rows = json::array();
  std::stringstream ss(text);
  std::string row;
  bool any = false;
  while (std::getline(ss, row, ';')) {
    any = true;
    json r = json::array();
    if (row.find_first_not_of(' ') != std::string::npos) {
      for (double v : parse_doubles(row, what)) {
        if (v == std::floor(v) && std::abs(v) < 1e9) {
          r.push_back(static_cast<long long>(v));
        } else {
          r.push_back(v);
        }
      }
    }
    rows.push_back(std::move(r));
  }
  if (!any) rows.push_back(json::array());
  return rows;
}

int exit_for(Status s) {
  switch (s) {
    case Status::Convex:
      return kExitConvex;
    case Status::NotConvex:
      return kExitNotConvex;
    case Status::Inconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

json path_json(const PsiPathResult& r) {
  return {{"vertex_ids", r.path.vertex_ids}, {"psi_length", r.psi_length}, {"is_straight", r.is_straight},
          {"depth", r.depth},                {"dyadic_points", r.dyadic_points}};
}

json hull_json(const EmbeddedSpace& s) {
  if (s.empty() || s.dimension() > kMaxHullDimension) return nullptr;
  std::vector<Vector> pts;
  pts.reserve(s.vertex_count());
  for (std::size_t i = 0; i < s.vertex_count(); ++i) pts.push_back(s.psi(i));
  const HullRepresentation h = convex_hull(pts);
  json cons = json::array();
  for (const HalfSpace& c : h.constraints) cons.push_back({{"normal", c.normal.coords()}, {"offset", c.offset}});
  return {{"affine_dimension", h.affine_dimension()}, {"constraints", std::move(cons)}};
}

json space_json(const EmbeddedSpace& s) {
  return {{"name", s.name()}, {"dimension", s.dimension()}, {"vertices", s.vertex_count()}, {"edges", s.edge_count()}};
}

std::vector<Vector> sampled_levels(const EmbeddedSpace& s, std::size_t count) {
  const std::vector<Vector> all = distinct_levels(s);
  if (count == 0 || count >= all.size()) return all;
  std::vector<Vector> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(all[i * all.size() / count]);
  return out;
}

void write_plot_data(const EmbeddedSpace& s, const std::string& dir, std::size_t levels) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!std::filesystem::is_directory(dir)) throw InputError("cannot create plot-data directory '" + dir + "'");
  const auto file = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
  std::ostringstream pts;
  pts << "id";
  for (std::size_t c = 0; c < s.dimension(); ++c) pts << ",psi" << c;
  pts << "\n";
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    pts << s.id(i);
    for (double v : s.psi(i).coords()) pts << "," << num(v);
    pts << "\n";
  }
  std::ostringstream hull;
  hull << "facet";
  for (std::size_t c = 0; c < s.dimension(); ++c) hull << ",n" << c;
  hull << ",offset\n";
  const json h = hull_json(s);
  if (!h.is_null()) {
    std::size_t k = 0;
    for (const json& c : h["constraints"]) {
      hull << k++;
      for (const json& v : c["normal"]) hull << "," << num(v.get<double>());
      hull << "," << num(c["offset"].get<double>()) << "\n";
    }
  }
  std::ostringstream fib;
  fib << "level";
  for (std::size_t c = 0; c < s.dimension(); ++c) fib << ",w" << c;
  fib << ",vertex_id,component\n";
  std::size_t li = 0;
  for (const Vector& w : sampled_levels(s, levels)) {
    const auto comps = fiber_components(s, w, 0.0);
    for (std::size_t k = 0; k < comps.size(); ++k) {
      for (VertexId v : comps[k].member_vertex_ids) {
        fib << li;
        for (double x : w.coords()) fib << "," << num(x);
        fib << "," << v << "," << k << "\n";
      }
    }
    ++li;
  }
  std::ostringstream sink;
  write_output(file("points.csv"), pts.str(), sink);
  write_output(file("hull.csv"), hull.str(), sink);
  write_output(file("fibers.csv"), fib.str(), sink);
}

std::string verdict_text(const char* name, const json& v) {
  std::ostringstream t;
  t << name << ": " << v.value("status", "") << "\n";
  for (const json& w : v.value("witnesses", json::array())) t << "  witness " << w.dump() << "\n";
  return t.str();
}

std::string report_text(const json& j) {
  std::ostringstream t;
  if (j.contains("space")) {
    const json& s = j["space"];
    t << "space: " << s.value("name", "") << " (" << s.value("vertices", 0) << " vertices, " << s.value("edges", 0)
      << " edges, dimension " << s.value("dimension", 0) << ")\n";
  }
  t << "status: " << j.value("status", "") << "\n";
  if (j.contains("conclusions")) {
    for (const auto& [k, v] : j["conclusions"].items()) t << "  " << k << ": " << (v.get<bool>() ? "yes" : "no") << "\n";
  }
  if (j.contains("hypotheses") && j["hypotheses"].contains("local_failing")) {
    t << "local hypothesis failures: " << j["hypotheses"]["local_failing"].dump() << "\n";
  }
  if (j.contains("implication")) t << "implication: " << j["implication"].get<std::string>() << "\n";
  const json ws = j.value("witnesses", json::array());
  t << "witnesses: " << ws.size() << "\n";
  for (const json& w : ws) t << "  " << w.dump() << "\n";
  return t.str();
}

std::string render(const json& j, const RunConfig& c, const std::string& text) {
  if (c.format == "text") return text;
  return j.dump(2) + "\n";
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  check_output_path(c.output);
  const VerifyOptions vo = verify_options(c);
  const Input in = load_input(c.inputs.at(0));
  if (in.grid && c.tol_collinear < 0 && c.tol_hull < 0 && c.eps_fiber < 0) {
    TnOptions to;
    to.seed = c.seed;
    if (vo.mode.kind == VerifyMode::Kind::Sampled) {
      to.exhaustive_cell_limit = 0;
      to.samples = vo.mode.samples;
    } else if (vo.mode.kind == VerifyMode::Kind::Exhaustive) {
      to.exhaustive_cell_limit = std::numeric_limits<std::size_t>::max();
    }
    const TnReport r = tn_verdict(*in.grid, to);
    json j = to_json(r);
    if (c.timings) j["runtime_ms"] = r.verdict.runtime_ms;
    if (!c.plot_data.empty()) write_plot_data(to_embedded_space(*in.grid), c.plot_data, c.levels);
    write_output(c.output, render(j, c, report_text(j)), out);
    return exit_for(r.verdict.status);
  }
  const EmbeddedSpace s = space_of(in, c);
  const std::vector<double> eps =
      c.eps_schedule.empty() ? default_eps_schedule(s) : parse_doubles(c.eps_schedule, "--eps-schedule");
  for (double e : eps) {
    if (!(e > 0.0) || !std::isfinite(e)) throw InputError("--eps-schedule entries must be positive");
  }
  ReportOptions ro;
  ro.verify = vo;
  ro.levels.count = c.levels;
  const Report r = local_to_global_report(s, eps, ro);
  const json j = to_json(r, c.timings);
  if (!c.plot_data.empty()) write_plot_data(s, c.plot_data, c.levels);
  write_output(c.output, render(j, c, report_text(j)), out);
  return exit_for(r.status);
}

int cmd_distance(const RunConfig& c, std::ostream& out, bool with_path) {
  check_output_path(c.output);
  const EmbeddedSpace s = space_of(load_input(c.inputs.at(0)), c);
  if (!s.contains(c.from)) throw InputError("unknown vertex id " + std::to_string(c.from));
  if (!s.contains(c.to)) throw InputError("unknown vertex id " + std::to_string(c.to));
  const double d = psi_distance(s, c.from, c.to);
  json j = {{"from", c.from}, {"to", c.to}};
  j["distance"] = std::isinf(d) ? json("infinity") : json(d);
  std::string text = num(d) + "\n";
  if (with_path && !std::isinf(d)) {
    const PsiPathResult sp = shortest_psi_path(s, c.from, c.to);
    const int depth = c.max_depth >= 0 ? c.max_depth : default_max_depth(s, d);
    const PsiPathResult st = dyadic_straighten(s, c.from, c.to, depth);
    j["gap"] = distance(s.psi(s.index_of(c.from)), s.psi(s.index_of(c.to)));
    j["shortest"] = path_json(sp);
    j["straightened"] = path_json(st);
    std::ostringstream t;
    t << "distance: " << num(d) << "\nshortest:";
    for (VertexId v : sp.path.vertex_ids) t << " " << v;
    t << "\nstraightened:";
    for (VertexId v : st.path.vertex_ids) t << " " << v;
    t << "\nstraight: " << (st.is_straight ? "yes" : "no") << " (depth " << st.depth << ")\n";
    text = t.str();
  }
  write_output(c.output, render(j, c, text), out);
  return std::isinf(d) ? kExitDisconnected : 0;
}

int cmd_image(const RunConfig& c, std::ostream& out) {
  check_output_path(c.output);
  const VerifyOptions vo = verify_options(c);
  const EmbeddedSpace s = space_of(load_input(c.inputs.at(0)), c);
  const Verdict v = verify_image_convexity(s, vo);
  json j = {{"report_version", 1}, {"space", space_json(s)}, {"image", to_json(v, c.timings)}, {"hull", hull_json(s)}};
  j["status"] = to_string(v.status);
  if (!c.plot_data.empty()) write_plot_data(s, c.plot_data, c.levels);
  write_output(c.output, render(j, c, verdict_text("image_convex", j["image"])), out);
  return exit_for(v.status);
}

int cmd_fibers(const RunConfig& c, std::ostream& out) {
  check_output_path(c.output);
  const EmbeddedSpace s = space_of(load_input(c.inputs.at(0)), c);
  const Verdict v = verify_fiber_connectivity(s, LevelSampling{c.levels, 0.0});
  json j = {{"report_version", 1}, {"space", space_json(s)}, {"fibers", to_json(v, c.timings)}};
  j["status"] = to_string(v.status);
  if (!c.plot_data.empty()) write_plot_data(s, c.plot_data, c.levels);
  write_output(c.output, render(j, c, verdict_text("fibers_connected", j["fibers"])), out);
  return exit_for(v.status);
}

int cmd_plotdata(const RunConfig& c, std::ostream& out) {
  const std::string dir = !c.plot_data.empty() ? c.plot_data : c.output;
  if (dir.empty()) throw InputError("plotdata needs --output DIR");
  const EmbeddedSpace s = space_of(load_input(c.inputs.at(0)), c);
  write_plot_data(s, dir, c.levels);
  out << "wrote points.csv, hull.csv, fibers.csv to " << dir << "\n";
  return 0;
}

std::string sidecar_path(const RunConfig& c) {
  if (!c.truth_path.empty()) return c.truth_path;
  if (c.output.empty() || c.output == "-") return "";
  std::filesystem::path p(c.output);
  if (p.extension() == ".json") p.replace_extension("");
  return p.string() + ".truth.json";
}

int cmd_generate(const RunConfig& c, std::ostream& out) {
  check_output_path(c.output);
  check_output_path(c.truth_path);
  GeneratorSpec spec;
  spec.kind = c.kind;
  if (!c.params_json.empty()) {
    try {
      spec.params = json::parse(c.params_json);
    } catch (const json::parse_error& e) {
      throw InputError(std::string("--params: invalid JSON: ") + e.what());
    }
    if (!spec.params.is_object()) throw InputError("--params must be a JSON object");
  }
  for (const auto& [key, value] : c.raw_params) {
    if (key == "map") {
      if (value != "height" && value != "projection") throw InputError("--map must be height or projection");
      continue;
    }
    if (key == "shape") {
      spec.params["shape"] = value;
    } else if (key == "alphas" || key == "weights") {
      spec.params[key] = parse_matrix(value, key.c_str());
    } else {
      const double v = parse_doubles(value, key.c_str()).at(0);
      if (v == std::floor(v) && std::abs(v) < 1e15 && key != "rho" && key != "extent" && key != "t_extent") {
        spec.params[key] = static_cast<long long>(v);
      } else {
        spec.params[key] = v;
      }
    }
  }
  if (spec.kind == "sphere") {
    std::string map = "height";
    for (const auto& [key, value] : c.raw_params) {
      if (key == "map") map = value;
    }
    spec.kind = "sphere_" + map;
  }
  const Generated g = generate(spec);
  write_output(c.output, g.document.dump() + "\n", out);
  const std::string truth = sidecar_path(c);
  if (!truth.empty()) write_output(truth, g.truth.dump(2) + "\n", out);
  return 0;
}

struct OracleItem {
  std::string name;
  Status main = Status::Convex;
  Status oracle = Status::Convex;
  json counterexample = nullptr;
};

OracleItem grid_oracle(const std::string& name, const GridSet& g, const RunConfig& c) {
  if (g.size() > c.cell_limit && !c.override_bounds) {
    throw InputError(name + ": " + std::to_string(g.size()) + " cells exceed the oracle bound " +
                     std::to_string(c.cell_limit) + " (use --override)");
  }
  OracleItem it;
  it.name = name;
  TnOptions to;
  to.seed = c.seed;
  to.exhaustive_cell_limit = std::numeric_limits<std::size_t>::max();
  const TnReport r = tn_verdict(g, to);
  it.main = r.verdict.status;
  const auto& cells = g.cells();
  std::optional<std::pair<std::size_t, std::size_t>> worst;
  long long worst_d2 = std::numeric_limits<long long>::max();
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      if (segment_inside_oracle(g, cells[a], cells[b])) continue;
      long long d2 = 0;
      for (int k = 0; k < 3; ++k) {
        const long long d = cells[a][static_cast<std::size_t>(k)] - cells[b][static_cast<std::size_t>(k)];
        d2 += d * d;
      }
      if (d2 < worst_d2) {
        worst_d2 = d2;
        worst = {a, b};
      }
    }
  }
  it.oracle = worst ? Status::NotConvex : Status::Convex;
  if (worst) {
    it.counterexample = {{"a", cell_json(g, cells[worst->first])}, {"b", cell_json(g, cells[worst->second])}};
  } else if (!r.verdict.witnesses.empty()) {
    it.counterexample = r.verdict.witnesses.front().data;
  }
  return it;
}

OracleItem space_oracle(const std::string& name, const EmbeddedSpace& s, const RunConfig& c) {
  if (s.vertex_count() > kExhaustiveSearchLimit && !c.override_bounds) {
    throw InputError(name + ": " + std::to_string(s.vertex_count()) + " vertices exceed the oracle bound " +
                     std::to_string(kExhaustiveSearchLimit) + " (use --override)");
  }
  OracleItem it;
  it.name = name;
  VerifyOptions vo;
  vo.mode.kind = VerifyMode::Kind::Exhaustive;
  vo.exhaustive_vertex_limit = std::numeric_limits<std::size_t>::max();
  const Verdict v = verify_convex_map(s, vo);
  it.main = v.status;
  it.oracle = Status::Convex;
  for (std::size_t a = 0; a < s.vertex_count() && it.oracle == Status::Convex; ++a) {
    for (std::size_t b = a + 1; b < s.vertex_count(); ++b) {
      if (exhaustive_straight_search(s, s.id(a), s.id(b))) continue;
      it.oracle = Status::NotConvex;
      it.counterexample = {{"x0", s.id(a)}, {"x1", s.id(b)}, {"gap", distance(s.psi(a), s.psi(b))}};
      break;
    }
  }
  if (it.counterexample.is_null() && !v.witnesses.empty()) it.counterexample = v.witnesses.front().data;
  return it;
}

int cmd_oracle(const RunConfig& c, std::ostream& out, std::ostream& err) {
  check_output_path(c.output);
  if (c.inputs.empty() && c.random_grids == 0) throw InputError("oracle needs --input or --random-grids");
  std::vector<OracleItem> items;
  for (const std::string& path : c.inputs) {
    const Input in = load_input(path);
    items.push_back(in.grid ? grid_oracle(path, *in.grid, c) : space_oracle(path, apply_tolerances(*in.space, c), c));
  }
  static const std::vector<std::string> mixed{"lshape", "ushape"};
  for (std::size_t i = 0; i < c.random_grids; ++i) {
    const std::string shape = c.shape == "mixed" ? mixed[i % mixed.size()] : c.shape;
    const std::uint64_t seed = c.seed + i;
    std::mt19937_64 rng(seed);
    const GridSet g = shape == "convex" ? random_convex_grid(rng, c.box) : random_nonconvex_grid(rng, shape, c.box);
    items.push_back(grid_oracle("grid_random(shape=" + shape + ",seed=" + std::to_string(seed) + ")", g, c));
  }
  if (c.inject && !items.empty()) {
    items.front().main = items.front().main == Status::Convex ? Status::NotConvex : Status::Convex;
  }
  json list = json::array();
  json bad = json::array();
  std::size_t agreed = 0;
  for (const OracleItem& it : items) {
    const bool agree = it.main == it.oracle;
    agreed += agree ? 1 : 0;
    json e = {{"name", it.name}, {"main", to_string(it.main)}, {"oracle", to_string(it.oracle)}, {"agree", agree}};
    list.push_back(e);
    if (!agree) {
      e["counterexample"] = it.counterexample;
      bad.push_back(std::move(e));
    }
  }
  const json j = {{"tested", items.size()},
                  {"agreed", agreed},
                  {"agreement_rate", items.empty() ? 1.0 : static_cast<double>(agreed) / items.size()},
                  {"items", std::move(list)},
                  {"disagreements", bad}};
  std::ostringstream text;
  text << "agreement: " << agreed << "/" << items.size() << "\n";
  for (const json& b : bad) text << "  disagreement " << b.dump() << "\n";
  write_output(c.output, render(j, c, text.str()), out);
  if (!bad.empty()) {
    err << "oracle disagreement: " << bad.front().dump() << "\n";
    return kExitOracleDisagreement;
  }
  return 0;
}

void add_common(CLI::App* sub, RunConfig& c, bool input_required = true) {
  auto* in = sub->add_option("--input,-i", c.inputs, "Input document (space/grid JSON or 0/1 raster), '-' for stdin");
  if (input_required) in->required()->expected(1);
  sub->add_option("--output,-o", c.output, "Output path (stdout when omitted)");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  sub->add_option("--tol-collinear", c.tol_collinear, "Straightness tolerance eta_collinear");
  sub->add_option("--tol-hull", c.tol_hull, "Hull membership tolerance eta_hull");
  sub->add_option("--eps-fiber", c.eps_fiber, "Fiber binning radius");
}

void add_verify_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--mode", c.mode, "auto | exhaustive | sampled[:K]");
  sub->add_option("--seed", c.seed, "Seed for sampled mode")->each([&c](const std::string&) { c.seed_given = true; });
  sub->add_option("--levels", c.levels, "Number of sampled fiber levels (0: all)");
  sub->add_flag("--timings", c.timings, "Include runtimes in the JSON report");
  sub->add_option("--plot-data", c.plot_data, "Also write CSV tables to this directory");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Local-to-global convexity checks for maps on discretized spaces", "lgconvex"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Run every check and report hypotheses and conclusions");
  add_common(verify, c);
  add_verify_flags(verify, c);
  verify->add_option("--eps-schedule", c.eps_schedule, "Comma-separated neighbourhood radii");

  auto* dist = app.add_subcommand("distance", "Psi-distance between two vertices");
  auto* path = app.add_subcommand("path", "Shortest and dyadically straightened paths");
  for (auto* sub : {dist, path}) {
    add_common(sub, c);
    sub->add_option("--from", c.from, "Start vertex id")->required();
    sub->add_option("--to", c.to, "End vertex id")->required();
    sub->add_option("--max-depth", c.max_depth, "Dyadic depth cap");
  }
  dist->add_flag("--path", c.with_path, "Also print the shortest and straightened paths");

  auto* image = app.add_subcommand("image", "Image convexity check with hull");
  add_common(image, c);
  add_verify_flags(image, c);
  auto* fibers = app.add_subcommand("fibers", "Fiber connectivity over distinct levels");
  add_common(fibers, c);
  add_verify_flags(fibers, c);
  auto* plot = app.add_subcommand("plotdata", "Write points.csv, hull.csv and fibers.csv");
  add_common(plot, c);
  plot->add_option("--levels", c.levels, "Number of sampled fiber levels (0: all)");
  plot->add_option("--plot-data", c.plot_data, "Output directory (defaults to --output)");

  auto* gen = app.add_subcommand("generate", "Emit a gallery space and its ground-truth sidecar");
  gen->add_option("kind", c.kind, "Generator kind")->required();
  gen->add_option("--output,-o", c.output, "Document path (stdout when omitted)");
  gen->add_option("--truth", c.truth_path, "Sidecar path (defaults to <output>.truth.json)");
  gen->add_option("--params", c.params_json, "Generator parameters as a JSON object");
  const std::vector<std::pair<std::string, std::string>> gen_flags{
      {"resolution", "resolution"}, {"map", "map"},         {"n", "n"},         {"rho", "rho"},
      {"alphas", "alphas"},         {"weights", "weights"}, {"k", "k"},         {"h0-dim", "h0_dim"},
      {"extent", "extent"},         {"t-extent", "t_extent"}, {"theta-samples", "theta_samples"},
      {"shape", "shape"},           {"box", "box"},         {"seed", "seed"}};
  for (const auto& [flag, key] : gen_flags) {
    gen->add_option_function<std::string>(
        "--" + flag, [&c, key = key](const std::string& v) { c.raw_params.emplace_back(key, v); },
        "Generator parameter '" + key + "'");
  }

  auto* oracle = app.add_subcommand("oracle", "Compare main verdicts with brute-force oracles");
  add_common(oracle, c, false);
  oracle->get_option("--input")->expected(0, 1000);
  oracle->add_option("--random-grids", c.random_grids, "Number of seeded random grid sets");
  oracle->add_option("--shape", c.shape, "convex | lshape | ushape | tshape | annulus | mixed");
  oracle->add_option("--box", c.box, "Random grid window size");
  oracle->add_option("--seed", c.seed, "First seed");
  oracle->add_option("--cell-limit", c.cell_limit, "Oracle bound on grid cells");
  oracle->add_flag("--override", c.override_bounds, "Run past the oracle size bounds");
  oracle->add_flag("--inject-disagreement", c.inject, "Corrupt the first main verdict (harness check)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "lgconvex: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (verify->parsed()) return cmd_verify(c, out);
    if (dist->parsed()) return cmd_distance(c, out, c.with_path);
    if (path->parsed()) return cmd_distance(c, out, true);
    if (image->parsed()) return cmd_image(c, out);
    if (fibers->parsed()) return cmd_fibers(c, out);
    if (plot->parsed()) return cmd_plotdata(c, out);
    if (gen->parsed()) return cmd_generate(c, out);
    if (oracle->parsed()) return cmd_oracle(c, out, err);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "lgconvex: " << msg << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace lg
