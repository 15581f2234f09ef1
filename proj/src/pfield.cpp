#include "mset/pfield.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mset/errors.hpp"
#include "mset/rng.hpp"

namespace mset {

namespace {

constexpr double kAntiParallelTol = 1e-6;  // rad
constexpr double kTieNudge = 1e-3;         // rad

Vec2 entry_direction(const Vec2& obstacle_pos, const Vec2& pos, const Vec2& attr,
                     const FieldParams& params, int drone_id, int obstacle_key) {
  const Vec2 away = pos - obstacle_pos;
  Vec2 dir = away / away.norm();
  const double attr_mag = attr.norm();
  if (attr_mag > 0.0 && dir.dot(attr / attr_mag) < -std::cos(kAntiParallelTol)) {
    const std::uint64_t h =
        derive_seed(params.tie_seed, static_cast<std::uint64_t>(Stream::kField),
                    (static_cast<std::uint64_t>(static_cast<std::uint32_t>(drone_id)) << 32) |
                        static_cast<std::uint32_t>(obstacle_key));
    dir = rotate(dir, (h & 1U) ? kTieNudge : -kTieNudge);
  }
  return dir;
}

}  // namespace

void validate(const FieldParams& params) {
  if (!(params.d_min > 0.0)) throw InvalidSpec("d_min must be positive");
  if (!(params.delta > 0.0)) throw InvalidSpec("delta must be positive");
  if (!(params.arrival_tolerance >= 0.0)) throw InvalidSpec("arrival tolerance must be >= 0");
}

double repulsion_radius(double p, double d_min) {
  if (!(p >= 1.0)) throw InvalidPriority("priority must be >= 1, got " + std::to_string(p));
  return d_min * (1.0 + std::log(p));
}

double scale_factor(double delta, double attr_mag, double p) {
  if (!(p >= 1.0)) throw InvalidPriority("priority must be >= 1, got " + std::to_string(p));
  return delta * attr_mag + std::log(p);
}

Vec2 attractive(const Vec2& dest, const Vec2& pos, double tolerance) {
  const Vec2 d = dest - pos;
  const double n = d.norm();
  if (n <= tolerance || n == 0.0) return {};
  return d / n;
}

Vec2 repulsive_step(const Vec2& prev, const Vec2& obstacle_pos, const Vec2& pos, double s,
                    double radius) {
  const double dist = distance(pos, obstacle_pos);
  if (dist > radius) return {};
  if (dist == 0.0) throw CoincidentPositions("drone coincides with an obstacle");
  const double prev_mag = prev.norm();
  const Vec2 dir = prev_mag > 0.0 ? prev / prev_mag : (pos - obstacle_pos) / dist;
  return dir * (s * s / dist);
}

FieldResult total_vector(const FieldAgent& drone, const std::vector<FieldAgent>& others,
                         const std::vector<Segment>& walls, const FieldParams& params,
                         const PriorityAssignment& priorities, const RepulsiveMemory& prev) {
  FieldResult out;
  out.attractive = drone.dest ? attractive(*drone.dest, drone.pos, params.arrival_tolerance) : Vec2{};

  auto apply = [&](int key, const Vec2& obstacle_pos, double p) {
    const double radius = repulsion_radius(p, params.d_min);
    const double dist = distance(drone.pos, obstacle_pos);
    if (dist > radius) return;
    if (dist == 0.0)
      throw CoincidentPositions("drone " + std::to_string(drone.id) + " coincides with obstacle " +
                                std::to_string(key));
    const double s = scale_factor(params.delta, drone.prev_attr_mag, p);
    if (!(s > 0.0)) return;

    Vec2 carried;
    if (params.direction == RepulsionDirection::kPersist) {
      if (auto it = prev.find(key); it != prev.end()) carried = it->second;
    }
    if (carried.norm() == 0.0)
      carried = entry_direction(obstacle_pos, drone.pos, out.attractive, params, drone.id, key);
    const Vec2 v = repulsive_step(carried, obstacle_pos, drone.pos, s, radius);
    out.components[key] = v;
    out.repulsive += v;
  };

  for (const auto& other : others) {
    if (other.id == drone.id) continue;
    apply(other.id, other.pos, priorities.of(other.id));
  }
  for (std::size_t w = 0; w < walls.size(); ++w) {
    apply(wall_key(static_cast<int>(w)), nearest_point(walls[w], drone.pos),
          priorities.wall_priority);
  }
  out.total = out.repulsive + out.attractive;
  return out;
}

std::vector<FieldSample> field_lattice(const Rect& area, double spacing, const FieldAgent& drone,
                                       const std::vector<FieldAgent>& others,
                                       const std::vector<Segment>& walls,
                                       const FieldParams& params,
                                       const PriorityAssignment& priorities) {
  if (!(spacing > 0.0)) throw InvalidSpec("lattice spacing must be positive");
  std::vector<FieldSample> out;
  const auto nx = static_cast<int>(std::floor(area.width() / spacing)) + 1;
  const auto ny = static_cast<int>(std::floor(area.height() / spacing)) + 1;
  FieldParams fresh = params;
  fresh.direction = RepulsionDirection::kTrack;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      FieldAgent probe = drone;
      probe.pos = {area.min.x + i * spacing, area.min.y + j * spacing};
      try {
        out.push_back({probe.pos, total_vector(probe, others, walls, fresh, priorities, {}).total});
      } catch (const CoincidentPositions&) {
        out.push_back({probe.pos, {}});
      }
    }
  }
  return out;
}

}  // namespace mset
