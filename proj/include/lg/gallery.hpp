#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "lg/space.hpp"

namespace lg {

enum class SphereMap { Height, Projection };

// Icosphere with `resolution` subdivisions. The height map also carries
// latitude-ring fiber edges and level-ladder edges (see README).
EmbeddedSpace gen_sphere(int resolution, SphereMap map);

// s-grid {i * rho^2 / resolution : sum i < resolution} times a theta torus
// with `theta_samples` points per circle.
EmbeddedSpace gen_cn_moment(int n, double rho, int resolution, int theta_samples = 8);
EmbeddedSpace gen_weighted_moment(const std::vector<Vector>& alphas, double rho, int resolution,
                                  int theta_samples = 8);

// Rows of `weights` are the H weights on each complex coordinate (alpha_j is
// half the row). k must equal dim H + h0_dim.
EmbeddedSpace gen_local_model(int k, const std::vector<std::vector<int>>& weights, int h0_dim,
                              double rho, int resolution, int theta_samples = 8);

double parabola_value(double x, double y);
EmbeddedSpace gen_parabola_map(double extent, int resolution);

EmbeddedSpace gen_cylinder_map(double t_extent, int resolution, int theta_samples = 8);

double cone_openness_epsilon(const std::vector<Vector>& alphas);

struct GeneratorSpec {
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
};

struct Generated {
  nlohmann::json document;  // SpaceDocument or GridSet document
  nlohmann::json truth;     // {expected_verdict, expected_image_description}
};

// Validates parameters (ArgumentError) and runs the matching generator.
Generated generate(const GeneratorSpec& spec);

std::vector<std::string> generator_kinds();

}  // namespace lg
