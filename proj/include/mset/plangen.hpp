#pragma once

#include <cstdint>

#include "mset/energy.hpp"
#include "mset/env.hpp"
#include "mset/plan.hpp"
#include "mset/rng.hpp"

namespace mset {

struct PlanGenOptions {
  int k = 16;
  int max_route_length = 0;  // 0 means M
  double min_budget_s = 10.0;
  double max_budget_s = 60.0;
  int duplicate_retries = 8;
};

/// Builds `options.k` battery-feasible plans for one agent. Each plan draws a
/// route length, picks that many distinct cells weighted by the requirement,
/// orders them nearest-neighbor from home and splits a random hover budget
/// over them in proportion to their requirement.
AgentPlanSet generate_plans(int agent_id, const GridEnvironment& env, const DroneSpec& spec,
                            const SensingRequirement& requirement, const PlanGenOptions& options,
                            Rng& rng);

/// Per-agent streams derived from (master_seed, agent_id).
std::vector<AgentPlanSet> generate_all_plans(const GridEnvironment& env, const DroneSpec& spec,
                                             const SensingRequirement& requirement,
                                             const PlanGenOptions& options, int n_agents,
                                             std::uint64_t master_seed);

// Nearest-neighbor tour order starting at `from`; ties go to the lower cell.
std::vector<int> nearest_neighbor_order(std::vector<int> cells, const GridEnvironment& env,
                                        const Vec2& from);

}  // namespace mset
