#include "mset/sched.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include "mset/errors.hpp"

namespace mset {

namespace {

constexpr double kTimeEps = 1e-9;

struct Approach {
  double time;
  double dist;
  Vec2 a;
  Vec2 b;
};

// Closest approach of two legs over their shared traversal window.
std::optional<Approach> closest_approach(const Leg& la, const Leg& lb) {
  const double lo = std::max(la.depart, lb.depart);
  const double hi = std::min(la.arrive, lb.arrive);
  if (lo > hi) return std::nullopt;
  const Vec2 r0 = la.position(lo) - lb.position(lo);
  const Vec2 r1 = la.position(hi) - lb.position(hi);
  double t = lo;
  if (hi > lo) {
    const Vec2 w = (r1 - r0) / (hi - lo);
    const double ww = w.dot(w);
    if (ww > 0.0) t = lo + std::clamp(-r0.dot(w) / ww, 0.0, hi - lo);
  }
  const Vec2 pa = la.position(t);
  const Vec2 pb = lb.position(t);
  return Approach{t, distance(pa, pb), pa, pb};
}

Vec2 velocity(const Leg& l) {
  const double dt = l.arrive - l.depart;
  return dt > 0.0 ? (l.to - l.from) / dt : Vec2{};
}

std::optional<CollisionKind> classify_legs(const Leg& la, const Leg& lb, const Approach& ap,
                                           double d_min) {
  if (!(ap.dist < d_min)) return std::nullopt;
  const double len_a = la.length();
  const double len_b = lb.length();
  if (len_a > 0.0 && len_b > 0.0) {
    const Vec2 ua = (la.to - la.from) / len_a;
    const Vec2 ub = (lb.to - lb.from) / len_b;
    if (ua.dot(ub) < kParallelCosine) {
      const double lateral = std::abs(ua.cross(lb.from - la.from));
      const double lo = std::max(la.depart, lb.depart);
      const Vec2 r0 = la.position(lo) - lb.position(lo);
      const Vec2 w = velocity(la) - velocity(lb);
      if (lateral < d_min && r0.dot(w) < 0.0) return CollisionKind::kParallel;
    }
  }
  return CollisionKind::kCross;
}

void shift_from(TimedPath& path, double t0, std::size_t first_leg, double by) {
  for (std::size_t i = first_leg; i < path.legs.size(); ++i) {
    path.legs[i].depart += by;
    path.legs[i].arrive += by;
  }
  for (auto& h : path.hovers) {
    if (h.start >= t0 - kTimeEps) {
      h.start += by;
      h.end += by;
    }
  }
}

double distance_to_boundary(const Rect& r, const Vec2& p) {
  return std::min({p.x - r.min.x, r.max.x - p.x, p.y - r.min.y, r.max.y - p.y});
}

// Smallest multiple of `step` (>= 1 step) for which `clear(k * step)` holds.
template <typename F>
double minimal_delay(double step, double upper, F clear) {
  const int max_k = static_cast<int>(std::ceil(upper / step)) + 2;
  for (int k = 1; k <= max_k; ++k) {
    if (clear(k * step)) return k * step;
  }
  return max_k * step;
}

}  // namespace

Vec2 Leg::position(double t) const {
  const double span = arrive - depart;
  if (span <= 0.0 || t >= arrive) return to;
  if (t <= depart) return from;
  return from + (to - from) * ((t - depart) / span);
}

double TimedPath::travel_time() const {
  double s = 0.0;
  for (const auto& l : legs) s += l.arrive - l.depart;
  return s;
}

TimedPath build_timed_path(int drone_id, const Plan& plan, const GridEnvironment& env,
                           const DroneSpec& spec) {
  TimedPath path;
  path.drone_id = drone_id;
  path.home = env.home(drone_id);
  double t = 0.0;
  Vec2 at = path.home;
  auto fly = [&](const Vec2& to, int cell) {
    const double dt = leg_time(at, to, spec);
    if (dt > 0.0) {
      path.legs.push_back({at, to, t, t + dt, cell});
      t += dt;
    }
    at = to;
  };
  for (int cell : plan.route) {
    fly(env.cell_center(cell), cell);
    const double h = plan.hover.at(static_cast<std::size_t>(cell));
    path.hovers.push_back({cell, t, t + h});
    t += h;
  }
  if (!plan.route.empty()) fly(path.home, -1);
  return path;
}

double path_energy(const TimedPath& path, const DroneSpec& spec) {
  const double power = nominal_power(spec);
  const double travel = path.travel_time();
  return power * (path.end_time() - travel) + power * spec.travel_power_factor * travel;
}

void validate(const TimedPath& path, const DroneSpec& spec) {
  double t = 0.0;
  for (const auto& l : path.legs) {
    if (l.depart < t - kTimeEps || l.arrive < l.depart)
      throw InvalidSpec("timed path for drone " + std::to_string(path.drone_id) +
                        " goes back in time");
    const double dt = l.arrive - l.depart;
    if (dt > 0.0 && l.length() / dt > spec.cruise_speed_mps + 1e-9)
      throw InvalidSpec("timed path for drone " + std::to_string(path.drone_id) +
                        " exceeds cruise speed");
    t = l.arrive;
  }
}

std::vector<Occupancy> occupancies(const TimedPath& path) {
  std::vector<Occupancy> out;
  // Walk legs in order; the drone sits at each leg's start from the previous
  // arrival (or t = 0) until it departs.
  double since = 0.0;
  Vec2 at = path.home;
  int cell = -1;
  int arriving = -1;
  for (std::size_t i = 0; i <= path.legs.size(); ++i) {
    const double until = i < path.legs.size() ? path.legs[i].depart : since;
    if (until > since + kTimeEps) out.push_back({at, cell, since, until, arriving});
    if (i == path.legs.size()) break;
    since = path.legs[i].arrive;
    at = path.legs[i].to;
    cell = path.legs[i].dest_cell;
    arriving = static_cast<int>(i);
  }
  return out;
}

std::string to_string(CollisionKind kind) {
  switch (kind) {
    case CollisionKind::kCross:
      return "cross";
    case CollisionKind::kParallel:
      return "parallel";
    case CollisionKind::kDestinationOccupied:
      return "destination_occupied";
  }
  return "unknown";
}

std::optional<CollisionKind> collision_kind_from_string(const std::string& s) {
  if (s == "cross") return CollisionKind::kCross;
  if (s == "parallel") return CollisionKind::kParallel;
  if (s == "destination_occupied") return CollisionKind::kDestinationOccupied;
  return std::nullopt;
}

std::vector<CollisionEvent> detect_collisions(const std::vector<TimedPath>& paths,
                                              const FieldParams& params) {
  std::vector<CollisionEvent> events;
  std::vector<std::vector<Occupancy>> occ;
  occ.reserve(paths.size());
  for (const auto& p : paths) occ.push_back(occupancies(p));

  auto arrivals_into = [&](std::size_t ia, std::size_t ib) {
    const auto& pa = paths[ia];
    for (std::size_t l = 0; l < pa.legs.size(); ++l) {
      const Leg& leg = pa.legs[l];
      if (leg.dest_cell < 0) continue;
      for (std::size_t o = 0; o < occ[ib].size(); ++o) {
        const Occupancy& oc = occ[ib][o];
        if (oc.cell != leg.dest_cell) continue;
        if (oc.start <= leg.arrive && leg.arrive <= oc.end) {
          events.push_back({CollisionKind::kDestinationOccupied, pa.drone_id, paths[ib].drone_id,
                            leg.arrive, leg.to, static_cast<int>(l), static_cast<int>(o)});
        }
      }
    }
  };

  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      // Order each pair by drone id so the output does not depend on input order.
      const bool swap = paths[j].drone_id < paths[i].drone_id;
      const std::size_t ia = swap ? j : i;
      const std::size_t ib = swap ? i : j;
      const auto& a = paths[ia];
      const auto& b = paths[ib];
      for (std::size_t la = 0; la < a.legs.size(); ++la) {
        for (std::size_t lb = 0; lb < b.legs.size(); ++lb) {
          const auto ap = closest_approach(a.legs[la], b.legs[lb]);
          if (!ap) continue;
          if (auto kind = classify_legs(a.legs[la], b.legs[lb], *ap, params.d_min)) {
            events.push_back({*kind, a.drone_id, b.drone_id, ap->time, (ap->a + ap->b) * 0.5,
                              static_cast<int>(la), static_cast<int>(lb)});
          }
        }
      }
      arrivals_into(ia, ib);
      arrivals_into(ib, ia);
    }
  }
  std::sort(events.begin(), events.end(), [](const CollisionEvent& x, const CollisionEvent& y) {
    return std::tie(x.time, x.kind, x.drone_a, x.drone_b, x.item_a, x.item_b) <
           std::tie(y.time, y.kind, y.drone_a, y.drone_b, y.item_a, y.item_b);
  });
  return events;
}

void delay_leg(TimedPath& path, std::size_t leg, double by) {
  if (leg >= path.legs.size()) throw std::out_of_range("leg index out of range");
  shift_from(path, path.legs[leg].depart, leg, by);
}

void insert_detour(TimedPath& path, std::size_t leg, const Vec2& waypoint, const DroneSpec& spec) {
  if (leg >= path.legs.size()) throw std::out_of_range("leg index out of range");
  const Leg old = path.legs[leg];
  Leg first{old.from, waypoint, old.depart, old.depart + leg_time(old.from, waypoint, spec), -1};
  Leg second{waypoint, old.to, first.arrive, first.arrive + leg_time(waypoint, old.to, spec),
             old.dest_cell};
  const double extra = second.arrive - old.arrive;
  path.legs[leg] = second;
  path.legs.insert(path.legs.begin() + static_cast<std::ptrdiff_t>(leg), first);
  // Everything after the detoured leg shifts by the added flight time.
  for (std::size_t i = leg + 2; i < path.legs.size(); ++i) {
    path.legs[i].depart += extra;
    path.legs[i].arrive += extra;
  }
  for (auto& h : path.hovers) {
    if (h.start >= old.arrive - kTimeEps) {
      h.start += extra;
      h.end += extra;
    }
  }
}

std::vector<TimedPath> schedule_ca(std::vector<TimedPath> paths, const PriorityAssignment& priorities,
                                   const FieldParams& params, const DroneSpec& spec,
                                   const ScheduleOptions& options) {
  auto index_of = [&](int drone) {
    for (std::size_t i = 0; i < paths.size(); ++i)
      if (paths[i].drone_id == drone) return i;
    throw std::out_of_range("unknown drone " + std::to_string(drone));
  };
  const double step = options.wait_granularity;

  for (int iter = 0;; ++iter) {
    const auto events = detect_collisions(paths, params);
    if (events.empty()) return paths;
    if (iter >= options.max_iterations) {
      std::ostringstream msg;
      msg << "schedule unresolved after " << options.max_iterations << " repairs; "
          << events.size() << " residual events:";
      for (const auto& e : events)
        msg << " [" << to_string(e.kind) << " " << e.drone_a << "-" << e.drone_b << " t=" << e.time
            << "]";
      throw UnresolvedSchedule(msg.str());
    }

    const CollisionEvent& e = events.front();
    const bool a_lower = priorities.of(e.drone_a) < priorities.of(e.drone_b);
    TimedPath& pa = paths[index_of(e.drone_a)];
    TimedPath& pb = paths[index_of(e.drone_b)];

    switch (e.kind) {
      case CollisionKind::kCross: {
        TimedPath& low = a_lower ? pa : pb;
        const TimedPath& high = a_lower ? pb : pa;
        const auto li = static_cast<std::size_t>(a_lower ? e.item_a : e.item_b);
        const Leg& other = high.legs[static_cast<std::size_t>(a_lower ? e.item_b : e.item_a)];
        const Leg mine = low.legs[li];
        const double by = minimal_delay(step, other.arrive - mine.depart, [&](double d) {
          Leg moved = mine;
          moved.depart += d;
          moved.arrive += d;
          const auto ap = closest_approach(moved, other);
          return !ap || ap->dist >= params.d_min;
        });
        delay_leg(low, li, by);
        break;
      }
      case CollisionKind::kDestinationOccupied: {
        const auto occ_b = occupancies(pb);
        const Occupancy& oc = occ_b[static_cast<std::size_t>(e.item_b)];
        const Leg& arriving = pa.legs[static_cast<std::size_t>(e.item_a)];
        if (a_lower || oc.arriving_leg < 0) {
          const double by = minimal_delay(step, oc.end - arriving.arrive + step,
                                          [&](double d) { return arriving.arrive + d > oc.end; });
          delay_leg(pa, static_cast<std::size_t>(e.item_a), by);
        } else {
          const double by = minimal_delay(step, arriving.arrive - oc.start + step,
                                          [&](double d) { return oc.start + d > arriving.arrive; });
          delay_leg(pb, static_cast<std::size_t>(oc.arriving_leg), by);
        }
        break;
      }
      case CollisionKind::kParallel: {
        TimedPath& low = a_lower ? pa : pb;
        const auto li = static_cast<std::size_t>(a_lower ? e.item_a : e.item_b);
        const Leg& leg = low.legs[li];
        const Vec2 dir = (leg.to - leg.from) / leg.length();
        const Vec2 mid = (leg.from + leg.to) * 0.5;
        const Vec2 left = mid + dir.perp() * (2.0 * params.d_min);
        const Vec2 right = mid - dir.perp() * (2.0 * params.d_min);
        Vec2 waypoint = left;
        if (options.arena &&
            distance_to_boundary(*options.arena, right) > distance_to_boundary(*options.arena, left))
          waypoint = right;
        insert_detour(low, li, waypoint, spec);
        break;
      }
    }
  }
}

PriorityAssignment assign_priorities(int n, Rng& rng) {
  if (n < 1) throw EmptyPopulation("cannot assign priorities to zero drones");
  std::vector<int> rank(static_cast<std::size_t>(n));
  std::iota(rank.begin(), rank.end(), 0);
  rng.shuffle(rank.begin(), rank.end());
  PriorityAssignment out;
  out.priority.reserve(rank.size());
  for (int r : rank) out.priority.push_back(std::exp(static_cast<double>(r)));
  out.wall_priority = std::exp(static_cast<double>(n));
  return out;
}

}  // namespace mset
