#include "mset/config.hpp"

#include <fstream>

#include "mset/errors.hpp"
#include "mset/io.hpp"

namespace mset {

namespace {

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& into) {
  if (j.contains(key) && !j.at(key).is_null()) into = j.at(key).get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

GridEnvironment ScenarioConfig::env() const {
  return build_grid(rows, cols, cell_width, cell_height, altitude, n_drones, grid);
}

Scenario ScenarioConfig::scenario(Method method, std::uint64_t seed) const {
  Scenario s;
  s.env = env();
  s.spec = spec;
  s.requirement = requirement;
  s.n_drones = n_drones;
  s.method = method;
  s.seed = seed;
  s.dt = dt;
  s.params = field;
  s.params.tie_seed = seed;
  s.risk_radius = risk_radius;
  s.risk_includes_walls = risk_includes_walls;
  s.time_cap = time_cap;
  return s;
}

ScheduleOptions ScenarioConfig::schedule_options() const {
  ScheduleOptions o;
  o.max_iterations = schedule_max_iterations;
  o.wait_granularity = wait_granularity;
  o.arena = env().bounds();
  return o;
}

ScenarioConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  ScenarioConfig cfg;
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kConfigSchemaVersion)
      throw DataError("unsupported config schema_version " + std::to_string(version));

    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      read_opt(g, "rows", cfg.rows);
      read_opt(g, "cols", cfg.cols);
      read_opt(g, "cell_width", cfg.cell_width);
      read_opt(g, "cell_height", cfg.cell_height);
      read_opt(g, "altitude", cfg.altitude);
      read_opt(g, "pad_margin", cfg.grid.pad_margin);
      if (g.contains("wall_margin") && !g.at("wall_margin").is_null())
        cfg.grid.wall_margin = g.at("wall_margin").get<double>();
      if (g.contains("pad_spacing") && !g.at("pad_spacing").is_null())
        cfg.grid.pad_spacing = g.at("pad_spacing").get<double>();
    }
    if (j.contains("drone")) {
      const auto& d = j.at("drone");
      read_opt(d, "mass_kg", cfg.spec.mass_kg);
      read_opt(d, "propeller_length_m", cfg.spec.propeller_length_m);
      read_opt(d, "battery_capacity_mah", cfg.spec.battery_capacity_mah);
      read_opt(d, "battery_voltage_v", cfg.spec.battery_voltage_v);
      read_opt(d, "cruise_speed_mps", cfg.spec.cruise_speed_mps);
      read_opt(d, "expected_flight_time_s", cfg.spec.expected_flight_time_s);
      read_opt(d, "travel_power_factor", cfg.spec.travel_power_factor);
    }
    read_opt(j, "n_drones", cfg.n_drones);

    const GridEnvironment env = cfg.env();
    const auto& r = j.at("requirement");
    if (r.contains("values")) {
      cfg.requirement.values = r.at("values").get<std::vector<double>>();
    } else if (r.contains("csv")) {
      cfg.requirement = io::read_requirement(resolve(base_dir, r.at("csv").get<std::string>()));
    } else if (r.contains("trajectories")) {
      const auto records = io::read_trajectories(resolve(base_dir, r.at("trajectories").get<std::string>()));
      const auto window = r.at("window").get<std::vector<double>>();
      if (window.size() != 2) throw DataError("requirement.window must be [t0, t1]");
      cfg.requirement = ingest_trajectories(records, env, window[0], window[1]).requirement;
    } else {
      throw DataError("requirement needs one of values, csv, trajectories");
    }
    if (static_cast<int>(cfg.requirement.size()) != env.cell_count())
      throw DataError("requirement has " + std::to_string(cfg.requirement.size()) + " cells, grid has " +
                      std::to_string(env.cell_count()));

    if (j.contains("plangen")) {
      const auto& p = j.at("plangen");
      read_opt(p, "k", cfg.plangen.k);
      read_opt(p, "max_route_length", cfg.plangen.max_route_length);
      read_opt(p, "min_budget_s", cfg.plangen.min_budget_s);
      read_opt(p, "max_budget_s", cfg.plangen.max_budget_s);
    }
    if (j.contains("epos")) read_opt(j.at("epos"), "iterations", cfg.epos_iterations);
    if (j.contains("field")) {
      const auto& f = j.at("field");
      read_opt(f, "d_min", cfg.field.d_min);
      read_opt(f, "delta", cfg.field.delta);
      read_opt(f, "arrival_tolerance", cfg.field.arrival_tolerance);
      if (f.contains("direction")) {
        const auto dir = f.at("direction").get<std::string>();
        if (dir == "persist") cfg.field.direction = RepulsionDirection::kPersist;
        else if (dir == "track") cfg.field.direction = RepulsionDirection::kTrack;
        else throw DataError("field.direction must be persist or track");
      }
    }
    if (j.contains("sim")) {
      const auto& s = j.at("sim");
      read_opt(s, "dt", cfg.dt);
      read_opt(s, "risk_radius", cfg.risk_radius);
      read_opt(s, "risk_includes_walls", cfg.risk_includes_walls);
      read_opt(s, "time_cap", cfg.time_cap);
    }
    if (j.contains("schedule")) {
      read_opt(j.at("schedule"), "max_iterations", cfg.schedule_max_iterations);
      read_opt(j.at("schedule"), "wait_granularity", cfg.wait_granularity);
    }
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& name : j.at("methods").get<std::vector<std::string>>()) {
        auto m = method_from_string(name);
        if (!m) throw DataError("unknown method '" + name + "'");
        cfg.methods.push_back(*m);
      }
    }
    read_opt(j, "seeds", cfg.seeds);
    if (j.contains("output_dir")) cfg.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  if (cfg.methods.empty()) throw DataError("config lists no methods");
  if (cfg.seeds.empty()) throw DataError("config lists no seeds");
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

nlohmann::ordered_json config_to_json(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["grid"] = {{"rows", cfg.rows},
               {"cols", cfg.cols},
               {"cell_width", cfg.cell_width},
               {"cell_height", cfg.cell_height},
               {"altitude", cfg.altitude},
               {"pad_margin", cfg.grid.pad_margin}};
  if (cfg.grid.wall_margin) j["grid"]["wall_margin"] = *cfg.grid.wall_margin;
  if (cfg.grid.pad_spacing) j["grid"]["pad_spacing"] = *cfg.grid.pad_spacing;
  j["drone"] = {{"mass_kg", cfg.spec.mass_kg},
                {"propeller_length_m", cfg.spec.propeller_length_m},
                {"battery_capacity_mah", cfg.spec.battery_capacity_mah},
                {"battery_voltage_v", cfg.spec.battery_voltage_v},
                {"cruise_speed_mps", cfg.spec.cruise_speed_mps},
                {"expected_flight_time_s", cfg.spec.expected_flight_time_s},
                {"travel_power_factor", cfg.spec.travel_power_factor}};
  j["n_drones"] = cfg.n_drones;
  j["requirement"] = {{"values", cfg.requirement.values}};
  j["plangen"] = {{"k", cfg.plangen.k},
                  {"max_route_length", cfg.plangen.max_route_length},
                  {"min_budget_s", cfg.plangen.min_budget_s},
                  {"max_budget_s", cfg.plangen.max_budget_s}};
  j["epos"] = {{"iterations", cfg.epos_iterations}};
  j["field"] = {{"d_min", cfg.field.d_min},
                {"delta", cfg.field.delta},
                {"arrival_tolerance", cfg.field.arrival_tolerance},
                {"direction", cfg.field.direction == RepulsionDirection::kPersist ? "persist" : "track"}};
  j["sim"] = {{"dt", cfg.dt},
              {"risk_radius", cfg.risk_radius},
              {"risk_includes_walls", cfg.risk_includes_walls},
              {"time_cap", cfg.time_cap}};
  j["schedule"] = {{"max_iterations", cfg.schedule_max_iterations},
                   {"wait_granularity", cfg.wait_granularity}};
  nlohmann::ordered_json methods = nlohmann::ordered_json::array();
  for (Method m : cfg.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  j["seeds"] = cfg.seeds;
  j["output_dir"] = cfg.output_dir.string();
  return j;
}

}  // namespace mset
