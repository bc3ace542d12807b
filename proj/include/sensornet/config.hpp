#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sensornet/applications.hpp"
#include "sensornet/field_model.hpp"
#include "sensornet/protocol_sim.hpp"
#include "sensornet/types.hpp"

namespace sensornet {

// One JSON document drives every subcommand. Parsing is strict: unknown keys
// are rejected with the offending path in the message.
struct RunConfig {
  FieldModel model;
  std::optional<FunctionSpec> function;
  std::optional<Vector> theta_true;
  std::optional<Vector> theta_ref;

  bool require_full_rank = false;

  // simulation block
  ShotPlan plan;
  int repetitions = 1;
  double p_exponent = 0.75;
  std::vector<double> t_list;
  StageOneOptions stage_one;
  std::optional<double> phase_prior_bound;  // declared bound on |w/|w|inf . f|

  // placement block
  std::optional<PlacementOptions> placement;
  std::vector<std::pair<double, double>> placement_bounds;
  int placement_sensors = 0;

  std::string output_dir = ".";

  // Validated document, canonical form (stable key order).
  std::string canonical_text;

  // Point at which (G, alpha) are formed: theta_ref when given, else
  // theta_true, else zeros.
  Vector reference_point() const;
};

RunConfig parse_config_text(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Canonical re-serialization of the parsed document (round-trip check).
std::string serialize_config(const RunConfig& config);

}  // namespace sensornet
