#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mset/energy.hpp"
#include "mset/env.hpp"
#include "mset/pfield.hpp"
#include "mset/plangen.hpp"
#include "mset/sched.hpp"
#include "mset/sim.hpp"

namespace mset {

inline constexpr int kConfigSchemaVersion = 1;

/// Everything needed to reproduce a batch of runs. Loaded from a single JSON
/// document; relative file paths resolve against the config's directory.
struct ScenarioConfig {
  int rows = 2;
  int cols = 3;
  double cell_width = 0.55;
  double cell_height = 0.47;
  double altitude = 0.50;
  GridOptions grid;
  DroneSpec spec;
  int n_drones = 4;
  SensingRequirement requirement;

  PlanGenOptions plangen;
  int epos_iterations = 40;

  FieldParams field;
  double dt = 0.1;
  double risk_radius = 0.5;
  bool risk_includes_walls = true;
  double time_cap = 1800.0;

  int schedule_max_iterations = 100;
  double wait_granularity = 0.5;

  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output_dir = "out";

  GridEnvironment env() const;
  Scenario scenario(Method method, std::uint64_t seed) const;
  ScheduleOptions schedule_options() const;
};

// Throws DataError on schema problems or missing referenced files.
ScenarioConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json config_to_json(const ScenarioConfig& cfg);

}  // namespace mset
