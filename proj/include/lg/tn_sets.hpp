#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "lg/space.hpp"
#include "lg/verifier.hpp"

namespace lg {

using Cell = std::array<std::int32_t, 3>;  // unused coordinates are 0

// Union of closed lattice cells [c - h/2, c + h/2]^n. Cells are kept sorted;
// a dense occupancy bitmap over the padded bounding box backs lookups.
class GridSet {
 public:
  GridSet(int dimension, double spacing, std::vector<Cell> cells);

  int dimension() const { return dim_; }
  double spacing() const { return h_; }
  const std::vector<Cell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool contains(const Cell& c) const;
  std::optional<std::size_t> index_of(const Cell& c) const;

 private:
  int dim_;
  double h_;
  std::vector<Cell> cells_;
  Cell lo_{};
  Cell ext_{};
  std::vector<char> occ_;
};

GridSet load_grid(const nlohmann::json& document);
nlohmann::json to_document(const GridSet& g);
// Lines of 0/1 characters (top row first) or a plain PBM ("P1") raster.
GridSet parse_raster(const std::string& text, double spacing = 1.0);

EmbeddedSpace to_embedded_space(const GridSet& g);

bool segment_inside_oracle(const GridSet& g, const Cell& a, const Cell& b);

struct LocalConvexityWitness {
  Cell x{};
  Cell a{};
  Cell b{};
};

struct LocalConvexityResult {
  bool holds = true;
  std::optional<LocalConvexityWitness> witness;
};

// `region` restricts the centres x; empty means every cell.
LocalConvexityResult is_locally_convex(const GridSet& g, double delta,
                                       const std::vector<Cell>& region = {});

// Largest delta in {h, 2h, 4h, ...} capped at the set diameter; throws
// LocalConvexityViolation if delta = h already fails.
double uniform_local_convexity_radius(const GridSet& g, const std::vector<Cell>& region = {});

double grid_diameter(const GridSet& g);

struct TnOptions {
  std::size_t exhaustive_cell_limit = 300;
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  double required_radius_cells = 4.0;  // local-convexity threshold, in units of h
  double slack_factor = 2.0;           // d_X slack = slack_factor * h * sqrt(hops)
};

struct TnReport {
  Verdict verdict;
  bool connected = true;
  double uniform_radius = 0.0;
  double required_radius = 0.0;
  bool locally_convex = false;
  std::optional<LocalConvexityWitness> local_witness;
};

TnReport tn_verdict(const GridSet& g, const TnOptions& opt = {});
nlohmann::json to_json(const TnReport& r);

nlohmann::json cell_json(const GridSet& g, const Cell& c);

// Seeded test-set generators. Convex: digitized intersection of random
// half-planes inside a box x box window. Non-convex kinds: "lshape",
// "ushape", "tshape", "annulus".
GridSet random_convex_grid(std::mt19937_64& rng, int box = 40);
GridSet random_nonconvex_grid(std::mt19937_64& rng, const std::string& kind, int box = 40);

}  // namespace lg
