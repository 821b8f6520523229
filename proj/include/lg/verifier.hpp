#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lg/psi_metric.hpp"
#include "lg/space.hpp"

namespace lg {

enum class Status { Convex, NotConvex, Inconclusive };
enum class WitnessKind { DisconnectedFiber, NoStraightPath, NonConvexImage, NotOpen };

const char* to_string(Status s);
const char* to_string(WitnessKind k);

struct WitnessRecord {
  WitnessKind kind = WitnessKind::NoStraightPath;
  nlohmann::json data;
};

struct Verdict {
  Status status = Status::Convex;
  std::vector<WitnessRecord> witnesses;
  std::vector<PsiPathResult> certificates;
  nlohmann::json stats = nlohmann::json::object();
  nlohmann::json meta = nlohmann::json::object();
  double runtime_ms = 0.0;  // not serialized unless asked
};

nlohmann::json to_json(const Verdict& v, bool with_timing = false);

struct VerifyMode {
  enum class Kind { Auto, Exhaustive, Sampled };
  Kind kind = Kind::Auto;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
};

// Parses "auto", "exhaustive", "sampled" or "sampled:K".
VerifyMode parse_mode(const std::string& text, std::uint64_t seed);

struct VerifyOptions {
  VerifyMode mode;
  std::size_t exhaustive_vertex_limit = 300;
  std::size_t exhaustive_search_limit = kExhaustiveSearchLimit;
  bool stop_at_first_witness = false;
  bool keep_certificates = true;
  unsigned threads = 0;  // 0: LG_THREADS or hardware concurrency
};

struct LevelSampling {
  std::size_t count = 0;  // 0: every distinct level
  double radius = 0.0;    // 0: exact-tolerance fibers
};

Verdict verify_convex_map(const EmbeddedSpace& s, const VerifyOptions& opt = {});
Verdict verify_image_convexity(const EmbeddedSpace& s, const VerifyOptions& opt = {});
Verdict verify_fiber_connectivity(const EmbeddedSpace& s, const LevelSampling& levels = {});
Verdict verify_openness(const EmbeddedSpace& s, int radius_steps = 2);
Verdict verify_local_convexity(const EmbeddedSpace& s, VertexId x, double eps,
                               const VerifyOptions& opt = {});

// Breadth-first chain between sets `from` and `to` whose consecutive members
// intersect inside the fiber. Sets not meeting the fiber are ignored; none if
// no chain exists.
std::optional<std::vector<std::size_t>> cover_chain(const std::vector<std::vector<VertexId>>& sets,
                                                    const FiberComponent& fiber,
                                                    std::size_t from, std::size_t to);

// {2,4,8} x median over vertices of the shortest nonzero incident edge.
std::vector<double> default_eps_schedule(const EmbeddedSpace& s);

struct LocalCheck {
  VertexId vertex = 0;
  std::optional<double> eps;  // first schedule entry that passed
};

struct Report {
  std::string space_name;
  std::size_t dimension = 0;
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  Tolerances tolerances;
  std::vector<double> eps_schedule;
  bool connected = true;
  std::vector<LocalCheck> local;
  bool local_all = true;
  std::size_t distinct_neighborhoods = 0;
  Verdict convex_map;
  Verdict image_convex;
  Verdict fibers_connected;
  Verdict open;
  Status status = Status::Convex;
  std::string implication;
};

struct ReportOptions {
  VerifyOptions verify;
  LevelSampling levels;
  int radius_steps = 2;
};

Report local_to_global_report(const EmbeddedSpace& s, const std::vector<double>& eps_schedule,
                              const ReportOptions& opt = {});
nlohmann::json to_json(const Report& r, bool with_timing = false);

unsigned resolve_thread_count(unsigned requested);

}  // namespace lg
