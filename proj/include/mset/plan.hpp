#pragma once

#include <vector>

#include "mset/geometry.hpp"

namespace mset {

/// One candidate mission for one drone: seconds of hovering per cell, the
/// visiting order, and the energy cost of flying it from the drone's home.
/// Invariant: hover[c] > 0 exactly for the cells listed in route.
struct Plan {
  std::vector<double> hover;
  std::vector<int> route;
  double cost = 0.0;

  bool operator==(const Plan&) const = default;
};

struct AgentPlanSet {
  int agent_id = 0;
  std::vector<Plan> plans;
  Vec2 home;
};

}  // namespace mset
