#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mset/env.hpp"
#include "mset/plan.hpp"
#include "mset/rng.hpp"

namespace mset {

/// Balanced binary tree over agents, laid out heap-style: tree slot i has
/// children 2i+1 and 2i+2, and slot i is occupied by agent order[i].
struct TreeTopology {
  std::vector<int> order;                  // slot -> agent
  std::vector<int> parent;                 // agent -> parent agent, -1 for root
  std::vector<std::vector<int>> children;  // agent -> up to two children
  std::vector<std::vector<int>> levels;    // depth -> agents at that depth

  int root() const { return order.front(); }
  std::size_t size() const { return order.size(); }
  int depth() const { return static_cast<int>(levels.size()) - 1; }
  // Children before parents.
  std::vector<int> post_order() const;
};

TreeTopology build_tree(int n, Rng& rng);

std::vector<double> unit_scale(std::span<const double> v);

/// Residual sum of squares between the unit-length scaled signals.
double rss(std::span<const double> a, std::span<const double> b);

struct Selection {
  std::vector<int> chosen;
  std::vector<double> aggregate;
  double rss = 0.0;
  std::vector<double> trace;
};

std::vector<double> aggregate_of(const std::vector<AgentPlanSet>& plan_sets,
                                 const std::vector<int>& chosen);

struct OptimizeOptions {
  int iterations = 40;
};

/// Collective plan selection over `tree`. Each iteration runs a bottom-up
/// pass where every agent, given the global aggregate broadcast at the end
/// of the previous iteration, jointly picks its own plan and which of its
/// children's subtree changes to approve; the root's pick then becomes the
/// new global aggregate in the top-down pass. Because "approve nothing, keep
/// my plan" is always an option, the root never accepts a worse aggregate.
Selection optimize(const std::vector<AgentPlanSet>& plan_sets, const SensingRequirement& requirement,
                   const TreeTopology& tree, const OptimizeOptions& options = {});

Selection optimize(const std::vector<AgentPlanSet>& plan_sets, const SensingRequirement& requirement,
                   int iterations, Rng& rng);

inline constexpr double kBruteForceLimit = 1e6;

/// Exhaustive minimum-rss selection, lexicographically smallest on ties.
Selection brute_force(const std::vector<AgentPlanSet>& plan_sets,
                      const SensingRequirement& requirement);

/// Every agent takes its cheapest plan, lowest index on ties.
Selection greedy_select(const std::vector<AgentPlanSet>& plan_sets,
                        const SensingRequirement& requirement);

}  // namespace mset
