#pragma once

#include "mset/env.hpp"
#include "mset/geometry.hpp"
#include "mset/plan.hpp"

namespace mset {

// Defaults describe a Crazyflie 2.1: 27 g, 47 mm propellers, 250 mAh 1S LiPo
// at 3.7 V nominal, 0.1 m/s ground speed, 7 minute expected flight time.
struct DroneSpec {
  double mass_kg = 0.027;
  double propeller_length_m = 0.047;
  double battery_capacity_mah = 250.0;
  double battery_voltage_v = 3.7;
  double cruise_speed_mps = 0.1;
  double expected_flight_time_s = 420.0;
  // Travel power relative to hover power.
  double travel_power_factor = 1.0;

  double battery_energy() const { return battery_capacity_mah * battery_voltage_v * 3.6; }
};

// Throws InvalidSpec when any field is non-positive.
void validate(const DroneSpec& spec);

/// Hover power in watts: battery energy spread over the expected flight time.
double nominal_power(const DroneSpec& spec);

double travel_power(const DroneSpec& spec);

double leg_time(const Vec2& a, const Vec2& b, const DroneSpec& spec);

/// Seconds spent flying home -> route cells in order -> home.
double route_travel_time(const std::vector<int>& route, const GridEnvironment& env,
                         const DroneSpec& spec, const Vec2& home);

double plan_cost(const Plan& plan, const GridEnvironment& env, const DroneSpec& spec,
                 const Vec2& home);

}  // namespace mset
