#include "mset/energy.hpp"

#include "mset/errors.hpp"

namespace mset {

void validate(const DroneSpec& spec) {
  if (!(spec.mass_kg > 0.0) || !(spec.propeller_length_m > 0.0) ||
      !(spec.battery_capacity_mah > 0.0) || !(spec.battery_voltage_v > 0.0) ||
      !(spec.cruise_speed_mps > 0.0) || !(spec.expected_flight_time_s > 0.0) ||
      !(spec.travel_power_factor > 0.0)) {
    throw InvalidSpec("drone spec fields must all be positive");
  }
}

double nominal_power(const DroneSpec& spec) {
  validate(spec);
  return spec.battery_energy() / spec.expected_flight_time_s;
}

double travel_power(const DroneSpec& spec) {
  return nominal_power(spec) * spec.travel_power_factor;
}

double leg_time(const Vec2& a, const Vec2& b, const DroneSpec& spec) {
  return distance(a, b) / spec.cruise_speed_mps;
}

double route_travel_time(const std::vector<int>& route, const GridEnvironment& env,
                         const DroneSpec& spec, const Vec2& home) {
  if (route.empty()) return 0.0;
  double t = 0.0;
  Vec2 at = home;
  for (int cell : route) {
    const Vec2 next = env.cell_center(cell);
    t += leg_time(at, next, spec);
    at = next;
  }
  return t + leg_time(at, home, spec);
}

double plan_cost(const Plan& plan, const GridEnvironment& env, const DroneSpec& spec,
                 const Vec2& home) {
  const double power = nominal_power(spec);
  double hover_s = 0.0;
  for (int cell : plan.route) hover_s += plan.hover.at(static_cast<std::size_t>(cell));
  return power * hover_s +
         power * spec.travel_power_factor * route_travel_time(plan.route, env, spec, home);
}

}  // namespace mset
