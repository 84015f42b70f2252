#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gasteer/carnot_models.hpp"
#include "gasteer/moduli_solver.hpp"
#include "gasteer/rotor_align.hpp"

namespace gasteer {

struct TargetPoint {
  Model model;
  Multivector q;
};

// Blade-keyed coefficient map {"e1": 2, "e12": 1, ...} -> multivector of G_dim.
Multivector parse_blade_map(const nlohmann::json& j, int dim);
nlohmann::json to_blade_map(const Multivector& a);

// {"model": "36"|"47", "point": {...}}. `model_hint` fills in a missing
// "model" and must agree with it when both are present.
TargetPoint parse_target(const nlohmann::json& j, std::optional<Model> model_hint = std::nullopt);

// Reads `spec` as inline JSON when it starts with '{', otherwise as a file.
nlohmann::json load_json(const std::string& spec);

// Invariants of a target point, validated against its model.
std::vector<double> point_invariants(const TargetPoint& target);
std::vector<std::string> invariant_names(Model model);
std::vector<std::string> coordinate_names(Model model);

struct SteerOptions {
  int samples = 200;
  double k_max = 10.0;
  double t_max = 20.0;
  double tolerance = 1e-9;
  int starts = 256;
  std::uint64_t seed = 1;
  double acceptance_bound = 5e-2;
};

struct SteerReport {
  Model model;
  Multivector target;
  std::vector<double> invariants;
  GeodesicParams params;
  Multivector representative_endpoint;  // q_o
  Rotor rotor;
  std::vector<AlignmentStep> steps;
  std::vector<double> times;
  std::vector<Multivector> trajectory;  // R q(t) R~ at each time
  double endpoint_error = 0.0;          // infinity norm at t_final
  double acceptance_bound = 0.0;
  double solver_tolerance = 0.0;
  SolveDiagnostics diagnostics;
  std::size_t solutions_found = 0;
};

// Invariants -> moduli solve (minimal arc time root) -> representative
// geodesic -> flag alignment of q_o onto the target -> rotated samples.
// Throws InfeasibleTarget, DegenerateConfiguration, AcceptanceFailure.
SteerReport steer(const TargetPoint& target, const SteerOptions& options);

// Coordinates of a model point in the order (x_i, z_i) or (x, l_i, y_i).
std::vector<double> point_coordinates(Model model, const Multivector& q);

nlohmann::json report_to_json(const SteerReport& report);
std::string trajectory_csv(const SteerReport& report);

struct PlotFile {
  std::string suffix;  // "x", "z", "l", "y"
  std::string csv;
};
// One CSV per coordinate group: x and z for (3,6); x, l and y for (4,7).
std::vector<PlotFile> plot_data(const SteerReport& report);

struct VerifyCheck {
  std::string name;
  bool pass;
  std::string detail;
};

// Re-evaluates a report produced by report_to_json. Throws ParseError on
// schema problems.
std::vector<VerifyCheck> verify_report(const nlohmann::json& report);

}  // namespace gasteer
