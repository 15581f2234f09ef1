#include "mset/sim.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "mset/errors.hpp"
#include "mset/rng.hpp"

namespace mset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTimerEps = 1e-9;
constexpr double kNudge = 1e-3;

struct Action {
  enum class Kind { kGoto, kHover, kWait };
  Kind kind = Kind::kGoto;
  Vec2 point;
  int cell = -1;
  double duration = 0.0;
  bool home = false;
};

std::deque<Action> actions_from(const TimedPath& path) {
  std::deque<Action> out;
  double t = 0.0;
  Vec2 at = path.home;
  std::size_t next_hover = 0;
  for (std::size_t i = 0; i < path.legs.size(); ++i) {
    const Leg& leg = path.legs[i];
    while (next_hover < path.hovers.size() && path.hovers[next_hover].start <= leg.depart + kTimerEps) {
      const Hover& h = path.hovers[next_hover++];
      out.push_back({Action::Kind::kHover, at, h.cell, h.end - h.start, false});
      t = h.end;
    }
    if (leg.depart > t + kTimerEps) out.push_back({Action::Kind::kWait, at, -1, leg.depart - t, false});
    const bool last = i + 1 == path.legs.size();
    out.push_back({Action::Kind::kGoto, leg.to, leg.dest_cell, 0.0, last});
    t = leg.arrive;
    at = leg.to;
  }
  return out;
}

struct Drone {
  int id = 0;
  Vec2 pos;
  Phase phase = Phase::kGrounded;
  std::deque<Action> queue;
  double remaining = 0.0;
  double energy = 0.0;
  double distance = 0.0;
  double prev_attr_mag = 1.0;
  RepulsiveMemory memory;

  const Action* current() const { return queue.empty() ? nullptr : &queue.front(); }

  // Pops finished actions until one is running; lands when none are left.
  void begin_next() {
    if (queue.empty()) {
      phase = Phase::kDone;
      return;
    }
    const Action& a = queue.front();
    switch (a.kind) {
      case Action::Kind::kGoto:
        phase = a.home ? Phase::kReturning : Phase::kTraveling;
        break;
      case Action::Kind::kHover:
        phase = Phase::kHovering;
        remaining = a.duration;
        break;
      case Action::Kind::kWait:
        phase = Phase::kWaiting;
        remaining = a.duration;
        break;
    }
  }

  void finish_current() {
    queue.pop_front();
    begin_next();
  }
};

Vec2 step_toward(const Vec2& from, const Vec2& to, double step, bool& reached) {
  const Vec2 d = to - from;
  const double n = d.norm();
  if (n <= step) {
    reached = true;
    return to;
  }
  reached = false;
  return from + d * (step / n);
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::kEpos:
      return "EPOS";
    case Method::kEposCa:
      return "EPOS-CA";
    case Method::kEposPf:
      return "EPOS-PF";
    case Method::kGreedyPf:
      return "Greedy-PF";
  }
  return "unknown";
}

std::optional<Method> method_from_string(const std::string& s) {
  for (Method m : kAllMethods)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

bool uses_potential_field(Method m) { return m == Method::kEposPf || m == Method::kGreedyPf; }

std::string to_string(Phase p) {
  switch (p) {
    case Phase::kGrounded:
      return "grounded";
    case Phase::kTraveling:
      return "traveling";
    case Phase::kHovering:
      return "hovering";
    case Phase::kWaiting:
      return "waiting";
    case Phase::kReturning:
      return "returning";
    case Phase::kDone:
      return "done";
  }
  return "unknown";
}

bool airborne(Phase p) { return p != Phase::kGrounded && p != Phase::kDone; }

void validate(const Scenario& s) {
  validate(s.spec);
  validate(s.params);
  if (!(s.dt > 0.0)) throw InvalidSpec("dt must be positive");
  if (!(s.risk_radius >= s.params.d_min)) throw InvalidSpec("risk radius must be >= d_min");
  if (!(s.time_cap > 0.0)) throw InvalidSpec("time cap must be positive");
  if (s.n_drones < 1) throw EmptyPopulation("scenario needs at least one drone");
  if (static_cast<int>(s.env.home_pads().size()) < s.n_drones)
    throw InvalidGeometry("environment has fewer home pads than drones");
  if (static_cast<int>(s.requirement.size()) != s.env.cell_count())
    throw DimensionError("requirement length does not match the grid");
}

PriorityAssignment scenario_priorities(const Scenario& scenario) {
  Rng rng(scenario.seed, Stream::kPriorities);
  return assign_priorities(scenario.n_drones, rng);
}

double risk_distance(const std::vector<TickSample>& ticks, double radius, bool include_walls) {
  double total = 0.0;
  for (const auto& tick : ticks) {
    for (const auto& d : tick.drones) {
      if (!d.flew) continue;
      const double near = include_walls ? std::min(d.min_dist_drone, d.min_dist_wall) : d.min_dist_drone;
      if (near <= radius) total += d.displacement;
    }
  }
  return total;
}

MissionReport run(const Scenario& scenario, const std::vector<AgentPlanSet>& plan_sets,
                  const Selection& selection, const std::optional<std::vector<TimedPath>>& schedule) {
  validate(scenario);
  const auto started = std::chrono::steady_clock::now();
  const int n = scenario.n_drones;
  const auto un = static_cast<std::size_t>(n);
  if (plan_sets.size() != un || selection.chosen.size() != un)
    throw DimensionError("selection does not cover every drone");
  if (scenario.method == Method::kEposCa && !schedule)
    throw InvalidSpec("EPOS-CA needs a schedule");
  if (scenario.method != Method::kEposCa && schedule)
    throw InvalidSpec("only EPOS-CA takes a schedule");
  if (schedule && schedule->size() != un) throw DimensionError("schedule does not cover every drone");

  const auto& env = scenario.env;
  const auto m = static_cast<std::size_t>(env.cell_count());
  const PriorityAssignment priorities = scenario_priorities(scenario);
  const bool field = uses_potential_field(scenario.method);
  const double step = scenario.spec.cruise_speed_mps * scenario.dt;
  const double hover_power = nominal_power(scenario.spec);
  const double travel_power = hover_power * scenario.spec.travel_power_factor;
  const double eps = scenario.params.arrival_tolerance;

  std::vector<Drone> drones(un);
  for (std::size_t i = 0; i < un; ++i) {
    Drone& d = drones[i];
    d.id = static_cast<int>(i);
    d.pos = env.home(d.id);
    TimedPath path;
    if (schedule) {
      path = (*schedule)[i];
      if (path.drone_id != d.id) throw DimensionError("schedule paths must be ordered by drone id");
    } else {
      const auto& plan = plan_sets[i].plans.at(static_cast<std::size_t>(selection.chosen[i]));
      path = build_timed_path(d.id, plan, env, scenario.spec);
    }
    d.queue = actions_from(path);
    d.begin_next();  // takeoff at t = 0
  }

  MissionReport report;
  report.sensed.assign(m, 0.0);
  report.pair_min_distance.assign(un, std::vector<double>(un, kInf));
  report.drone_distance.assign(un, 0.0);
  std::vector<std::vector<bool>> in_episode(un, std::vector<bool>(un, false));

  double t = 0.0;
  auto all_done = [&] {
    for (const auto& d : drones)
      if (d.phase != Phase::kDone) return false;
    return true;
  };

  while (!all_done() && t < scenario.time_cap - kTimerEps) {
    // Coincident airborne drones cannot be steered apart by the field; log
    // the contact and nudge the higher id aside.
    for (std::size_t i = 0; i < un; ++i) {
      for (std::size_t j = i + 1; j < un; ++j) {
        if (!airborne(drones[i].phase) || !airborne(drones[j].phase)) continue;
        if (drones[i].pos == drones[j].pos) {
          const std::uint64_t h = derive_seed(scenario.seed, static_cast<std::uint64_t>(Stream::kField),
                                              i * un + j);
          const double angle = 2.0 * std::numbers::pi * static_cast<double>(h >> 11) * 0x1.0p-53;
          drones[j].pos += rotate({kNudge, 0.0}, angle);
        }
      }
    }

    // Frozen snapshot for this tick.
    std::vector<FieldAgent> snapshot;
    std::vector<Phase> phase_at_start(un);
    std::vector<Vec2> pos_at_start(un);
    for (std::size_t i = 0; i < un; ++i) {
      phase_at_start[i] = drones[i].phase;
      pos_at_start[i] = drones[i].pos;
      if (airborne(drones[i].phase)) snapshot.push_back({drones[i].id, drones[i].pos, {}, 1.0});
    }

    std::vector<Vec2> next_pos(un);
    for (std::size_t i = 0; i < un; ++i) {
      Drone& d = drones[i];
      next_pos[i] = d.pos;
      if (!airborne(d.phase)) continue;
      const Action& act = *d.current();

      // Steering. `arrived` only matters for goto actions.
      bool arrived = false;
      if (field && d.phase != Phase::kWaiting) {
        FieldAgent self{d.id, d.pos, act.point, d.prev_attr_mag};
        const FieldResult res =
            total_vector(self, snapshot, env.walls(), scenario.params, priorities, d.memory);
        d.memory = res.components;
        d.prev_attr_mag = res.attractive.norm();
        if (!res.repulsion_active()) {
          next_pos[i] = step_toward(d.pos, act.point, step, arrived);
        } else {
          const double mag = res.total.norm();
          if (mag > 0.0) next_pos[i] = d.pos + res.total * (step / mag);
          arrived = distance(next_pos[i], act.point) <= eps;
        }
      } else if (d.phase == Phase::kTraveling || d.phase == Phase::kReturning) {
        next_pos[i] = step_toward(d.pos, act.point, step, arrived);
      }

      const bool moving = d.phase == Phase::kTraveling || d.phase == Phase::kReturning;
      d.energy += (moving ? travel_power : hover_power) * scenario.dt;

      if (d.phase == Phase::kHovering || d.phase == Phase::kWaiting) {
        if (auto cell = env.cell_at(d.pos)) report.sensed[static_cast<std::size_t>(*cell)] += scenario.dt;
        d.remaining -= scenario.dt;
        if (d.remaining <= kTimerEps) d.finish_current();
      } else if (arrived) {
        d.finish_current();
      }
    }

    // Commit.
    t += scenario.dt;
    TickSample sample;
    sample.t = t;
    sample.drones.resize(un);
    for (std::size_t i = 0; i < un; ++i) {
      Drone& d = drones[i];
      const double moved = distance(pos_at_start[i], next_pos[i]);
      d.pos = next_pos[i];
      d.distance += moved;
      DroneSample& s = sample.drones[i];
      s.pos = d.pos;
      s.phase = d.phase;
      s.energy = d.energy;
      s.displacement = moved;
      s.flew = airborne(phase_at_start[i]);
      s.min_dist_drone = kInf;
      s.min_dist_wall = kInf;
      if (!s.flew) continue;
      for (const auto& w : env.walls())
        s.min_dist_wall = std::min(s.min_dist_wall, distance(d.pos, nearest_point(w, d.pos)));
    }
    for (std::size_t i = 0; i < un; ++i) {
      for (std::size_t j = i + 1; j < un; ++j) {
        if (!sample.drones[i].flew || !sample.drones[j].flew) {
          in_episode[i][j] = false;
          continue;
        }
        const double dist = distance(drones[i].pos, drones[j].pos);
        auto& si = sample.drones[i];
        auto& sj = sample.drones[j];
        si.min_dist_drone = std::min(si.min_dist_drone, dist);
        sj.min_dist_drone = std::min(sj.min_dist_drone, dist);
        report.pair_min_distance[i][j] = std::min(report.pair_min_distance[i][j], dist);
        report.pair_min_distance[j][i] = report.pair_min_distance[i][j];
        if (dist < scenario.params.d_min) {
          if (!in_episode[i][j]) {
            report.proximity_events.push_back({t, static_cast<int>(i), static_cast<int>(j),
                                               (drones[i].pos + drones[j].pos) * 0.5, dist});
            in_episode[i][j] = true;
          }
        } else {
          in_episode[i][j] = false;
        }
      }
    }
    report.ticks.push_back(std::move(sample));
  }

  report.complete = all_done();
  report.end_time = t;
  report.drone_energy.reserve(un);
  for (std::size_t i = 0; i < un; ++i) {
    report.drone_energy.push_back(drones[i].energy);
    report.energy += drones[i].energy;
    report.drone_distance[i] = drones[i].distance;
    report.total_distance += drones[i].distance;
  }
  report.risk_distance = risk_distance(report.ticks, scenario.risk_radius, scenario.risk_includes_walls);
  report.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace mset
