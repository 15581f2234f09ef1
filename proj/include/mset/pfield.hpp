#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mset/env.hpp"
#include "mset/geometry.hpp"

namespace mset {

enum class RepulsionDirection {
  // Keep the direction the component had on the previous tick and only
  // rescale its magnitude (the recurrence taken literally).
  kPersist,
  // Re-aim along obstacle -> drone every tick.
  kTrack,
};

struct FieldParams {
  double d_min = kDefaultDMin;
  double delta = 2.5;
  double arrival_tolerance = 0.02;
  RepulsionDirection direction = RepulsionDirection::kPersist;
  // Seeds the sign of the lateral nudge that breaks exact head-on ties.
  std::uint64_t tie_seed = 0;
};

void validate(const FieldParams& params);

/// Priority P per drone (index = drone id) and for static walls.
struct PriorityAssignment {
  std::vector<double> priority;
  double wall_priority = 1.0;

  double of(int drone) const { return priority.at(static_cast<std::size_t>(drone)); }
};

// Radius inside which an obstacle of priority p repels: d_min (1 + ln p).
double repulsion_radius(double p, double d_min);

// Repulsion strength: delta * |attractive| + ln p.
double scale_factor(double delta, double attr_mag, double p);

/// Unit vector from pos toward dest, or zero once within `tolerance`.
Vec2 attractive(const Vec2& dest, const Vec2& pos, double tolerance = 0.02);

/// One tick of a repulsive component. Zero outside `radius`; inside, a
/// vector of magnitude s^2 / D along the previous component's direction, or
/// along obstacle -> pos when there is no previous component.
Vec2 repulsive_step(const Vec2& prev, const Vec2& obstacle_pos, const Vec2& pos, double s,
                    double radius);

// Obstacle keys: drones use their id, wall i uses -1 - i.
constexpr int wall_key(int wall_index) { return -1 - wall_index; }
constexpr bool is_wall_key(int key) { return key < 0; }

using RepulsiveMemory = std::map<int, Vec2>;

struct FieldAgent {
  int id = 0;
  Vec2 pos;
  std::optional<Vec2> dest;
  // |V^a| on the previous tick; 1 before the first tick.
  double prev_attr_mag = 1.0;
};

struct FieldResult {
  Vec2 total;
  Vec2 attractive;
  Vec2 repulsive;
  // Components to carry into the next tick; only in-radius obstacles appear.
  RepulsiveMemory components;

  bool repulsion_active() const { return !components.empty(); }
};

/// Sum of the attractive pull and the priority-weighted repulsion from every
/// other drone and every wall (taken at its nearest point to the drone).
/// Throws CoincidentPositions if the drone sits exactly on an obstacle.
FieldResult total_vector(const FieldAgent& drone, const std::vector<FieldAgent>& others,
                         const std::vector<Segment>& walls, const FieldParams& params,
                         const PriorityAssignment& priorities, const RepulsiveMemory& prev);

struct FieldSample {
  Vec2 at;
  Vec2 vector;
};

/// Evaluates the field of `drone` on a lattice covering `area`, treating each
/// lattice point as a fresh drone position. Only used for visualization.
std::vector<FieldSample> field_lattice(const Rect& area, double spacing, const FieldAgent& drone,
                                       const std::vector<FieldAgent>& others,
                                       const std::vector<Segment>& walls,
                                       const FieldParams& params,
                                       const PriorityAssignment& priorities);

}  // namespace mset
