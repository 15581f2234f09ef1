#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mset/energy.hpp"
#include "mset/env.hpp"
#include "mset/pfield.hpp"
#include "mset/plan.hpp"
#include "mset/rng.hpp"

namespace mset {

struct Leg {
  Vec2 from;
  Vec2 to;
  double depart = 0.0;
  double arrive = 0.0;
  int dest_cell = -1;  // cell reached at `to`, -1 for home or a detour point

  Vec2 position(double t) const;
  double length() const { return distance(from, to); }
};

struct Hover {
  int cell = 0;
  double start = 0.0;
  double end = 0.0;
};

/// Straight-line legs and hovers on a shared clock starting at t = 0 on the
/// home pad. Any gap between the end of one item and the next departure is
/// a wait in place.
struct TimedPath {
  int drone_id = 0;
  Vec2 home;
  std::vector<Leg> legs;
  std::vector<Hover> hovers;

  double end_time() const { return legs.empty() ? 0.0 : legs.back().arrive; }
  double travel_time() const;
};

TimedPath build_timed_path(int drone_id, const Plan& plan, const GridEnvironment& env,
                           const DroneSpec& spec);

/// Energy of flying `path`, waits charged at hover power.
double path_energy(const TimedPath& path, const DroneSpec& spec);

// Throws InvalidSpec if times go backwards or a leg exceeds cruise speed.
void validate(const TimedPath& path, const DroneSpec& spec);

/// A stretch of time a drone stays put (hover or wait) at one point.
struct Occupancy {
  Vec2 at;
  int cell = -1;  // -1 when not over a cell (home pad, detour point)
  double start = 0.0;
  double end = 0.0;
  int arriving_leg = -1;  // leg that brought the drone here, -1 before takeoff
};

std::vector<Occupancy> occupancies(const TimedPath& path);

enum class CollisionKind { kCross, kParallel, kDestinationOccupied };

std::string to_string(CollisionKind kind);
std::optional<CollisionKind> collision_kind_from_string(const std::string& s);

struct CollisionEvent {
  CollisionKind kind = CollisionKind::kCross;
  // For destination_occupied drone_a arrives while drone_b occupies the cell.
  int drone_a = 0;
  int drone_b = 0;
  double time = 0.0;
  Vec2 location;
  // Indices into the paths that produced the event: legs for cross and
  // parallel; for destination_occupied item_a is drone_a's arriving leg and
  // item_b is an index into occupancies(drone_b's path).
  int item_a = -1;
  int item_b = -1;
};

inline constexpr double kParallelCosine = -0.996;  // within ~5 degrees of head-on

/// Pairwise classification of conflicts between timed straight-line paths.
std::vector<CollisionEvent> detect_collisions(const std::vector<TimedPath>& paths,
                                              const FieldParams& params);

struct ScheduleOptions {
  int max_iterations = 100;
  double wait_granularity = 0.5;
  // Used to pick the detour side away from the nearer wall.
  std::optional<Rect> arena;
};

/// Repairs detected conflicts one at a time, earliest first: the lower
/// priority drone waits at the start of its conflicting leg (cross,
/// destination_occupied) or detours sideways by 2 d_min (parallel).
/// Throws UnresolvedSchedule if conflicts remain after the iteration cap.
std::vector<TimedPath> schedule_ca(std::vector<TimedPath> paths, const PriorityAssignment& priorities,
                                   const FieldParams& params, const DroneSpec& spec,
                                   const ScheduleOptions& options = {});

/// Seeded permutation of the ladder {e^0, ..., e^(n-1)}; walls get e^n.
PriorityAssignment assign_priorities(int n, Rng& rng);

// Building blocks of the repair loop, exposed for testing.
void delay_leg(TimedPath& path, std::size_t leg, double by);
void insert_detour(TimedPath& path, std::size_t leg, const Vec2& waypoint, const DroneSpec& spec);

}  // namespace mset
