#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mset/energy.hpp"
#include "mset/env.hpp"
#include "mset/epos.hpp"
#include "mset/pfield.hpp"
#include "mset/plan.hpp"
#include "mset/sched.hpp"

namespace mset {

enum class Method { kEpos, kEposCa, kEposPf, kGreedyPf };

std::string to_string(Method m);
std::optional<Method> method_from_string(const std::string& s);
bool uses_potential_field(Method m);
inline constexpr Method kAllMethods[] = {Method::kEpos, Method::kEposCa, Method::kEposPf,
                                         Method::kGreedyPf};

struct Scenario {
  GridEnvironment env = default_grid();
  DroneSpec spec;
  SensingRequirement requirement;
  int n_drones = 4;
  Method method = Method::kEposPf;
  std::uint64_t seed = 1;
  double dt = 0.1;
  FieldParams params;
  double risk_radius = 0.5;
  bool risk_includes_walls = true;
  double time_cap = 1800.0;
};

void validate(const Scenario& scenario);

/// Priorities used by both the scheduler and the simulator for a scenario.
PriorityAssignment scenario_priorities(const Scenario& scenario);

enum class Phase { kGrounded, kTraveling, kHovering, kWaiting, kReturning, kDone };

std::string to_string(Phase p);
bool airborne(Phase p);

struct DroneSample {
  Vec2 pos;
  Phase phase = Phase::kGrounded;
  double energy = 0.0;
  // Distances at the end of the tick; infinity when nothing is in the air.
  double min_dist_drone = 0.0;
  double min_dist_wall = 0.0;
  double displacement = 0.0;
  bool flew = false;  // airborne during this tick
};

struct TickSample {
  double t = 0.0;  // end of the tick
  std::vector<DroneSample> drones;
};

struct ProximityEvent {
  double time = 0.0;
  int drone_a = 0;
  int drone_b = 0;
  Vec2 location;
  double distance = 0.0;
};

struct MissionReport {
  std::vector<TickSample> ticks;
  std::vector<std::vector<double>> pair_min_distance;
  // Episodes of two drones closer than d_min; coincident positions included.
  std::vector<ProximityEvent> proximity_events;
  double risk_distance = 0.0;
  double total_distance = 0.0;
  std::vector<double> drone_distance;
  std::vector<double> sensed;
  std::vector<double> drone_energy;
  double energy = 0.0;
  bool complete = false;
  double end_time = 0.0;
  double wall_clock_s = 0.0;
};

/// Path length travelled while within `radius` of another drone (and of a
/// wall when `include_walls`), summed over drones.
double risk_distance(const std::vector<TickSample>& ticks, double radius, bool include_walls);

/// Flies the selected plans. EPOS and EPOS-CA follow their timed paths (the
/// latter with its scheduled waits and detours, passed in `schedule`); the
/// potential-field methods steer every tick along the field vector.
MissionReport run(const Scenario& scenario, const std::vector<AgentPlanSet>& plan_sets,
                  const Selection& selection,
                  const std::optional<std::vector<TimedPath>>& schedule = std::nullopt);

}  // namespace mset
