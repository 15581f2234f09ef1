#include "mset/plangen.hpp"

#include <algorithm>
#include <numeric>

#include "mset/errors.hpp"

namespace mset {

namespace {

// Weighted draw without replacement; falls back to uniform over the
// remaining cells once their weights are all zero.
std::vector<int> draw_cells(const std::vector<double>& weights, int count, Rng& rng) {
  std::vector<int> pool(weights.size());
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> picked;
  picked.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(picked.size()) < count && !pool.empty()) {
    double total = 0.0;
    for (int c : pool) total += weights[static_cast<std::size_t>(c)];
    std::size_t chosen = 0;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      chosen = pool.size();
      for (std::size_t i = 0; i < pool.size(); ++i) {
        const double w = weights[static_cast<std::size_t>(pool[i])];
        if (w <= 0.0) continue;
        acc += w;
        chosen = i;
        if (r < acc) break;
      }
    } else {
      chosen = static_cast<std::size_t>(rng.uniform_int(0, pool.size() - 1));
    }
    picked.push_back(pool[chosen]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(chosen));
  }
  return picked;
}

}  // namespace

std::vector<int> nearest_neighbor_order(std::vector<int> cells, const GridEnvironment& env,
                                        const Vec2& from) {
  std::sort(cells.begin(), cells.end());
  std::vector<int> order;
  order.reserve(cells.size());
  Vec2 at = from;
  while (!cells.empty()) {
    std::size_t best = 0;
    double best_d = distance(at, env.cell_center(cells[0]));
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const double d = distance(at, env.cell_center(cells[i]));
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    order.push_back(cells[best]);
    at = env.cell_center(cells[best]);
    cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return order;
}

AgentPlanSet generate_plans(int agent_id, const GridEnvironment& env, const DroneSpec& spec,
                            const SensingRequirement& requirement, const PlanGenOptions& options,
                            Rng& rng) {
  validate(spec);
  const int m = env.cell_count();
  if (options.k < 1) throw InvalidSpec("plan count k must be at least 1");
  if (static_cast<int>(requirement.size()) != m)
    throw DimensionError("requirement length does not match the grid");
  if (!(options.min_budget_s > 0.0) || options.max_budget_s < options.min_budget_s)
    throw InvalidSpec("hover budget window must satisfy 0 < min <= max");

  const int max_len = options.max_route_length > 0 ? std::min(options.max_route_length, m) : m;
  const Vec2 home = env.home(agent_id);
  const double power = nominal_power(spec);
  const double battery = spec.battery_energy();

  AgentPlanSet set;
  set.agent_id = agent_id;
  set.home = home;
  set.plans.reserve(static_cast<std::size_t>(options.k));

  auto make_plan = [&]() {
    const int length = static_cast<int>(rng.uniform_int(1, static_cast<std::uint64_t>(max_len)));
    std::vector<int> cells = draw_cells(requirement.values, length, rng);

    double share_total = 0.0;
    for (int c : cells) share_total += requirement.values[static_cast<std::size_t>(c)];
    // Zero-requirement cells would get no hover time; drop them unless the
    // whole route is zero-weighted, in which case time is split evenly.
    if (share_total > 0.0) {
      std::erase_if(cells, [&](int c) { return requirement.values[static_cast<std::size_t>(c)] <= 0.0; });
    }

    Plan plan;
    plan.hover.assign(static_cast<std::size_t>(m), 0.0);
    plan.route = nearest_neighbor_order(cells, env, home);

    const double budget = rng.uniform(options.min_budget_s, options.max_budget_s);
    for (int c : plan.route) {
      const double share = share_total > 0.0
                               ? requirement.values[static_cast<std::size_t>(c)] / share_total
                               : 1.0 / static_cast<double>(plan.route.size());
      plan.hover[static_cast<std::size_t>(c)] = budget * share;
    }

    plan.cost = plan_cost(plan, env, spec, home);
    if (plan.cost > battery) {
      const double travel_s = route_travel_time(plan.route, env, spec, home);
      const double hover_allow = battery / power - travel_s * spec.travel_power_factor;
      if (!(hover_allow > 0.0))
        throw BatteryInfeasible(agent_id, "travel alone exceeds the battery energy");
      double scale = hover_allow / budget;
      for (int attempt = 0; attempt < 64; ++attempt) {
        for (int c : plan.route) plan.hover[static_cast<std::size_t>(c)] *= scale;
        plan.cost = plan_cost(plan, env, spec, home);
        if (plan.cost <= battery) break;
        scale = 1.0 - 1e-12;
      }
      if (plan.cost > battery)
        throw BatteryInfeasible(agent_id, "could not rescale hover below the battery energy");
    }
    return plan;
  };

  for (int i = 0; i < options.k; ++i) {
    Plan plan = make_plan();
    for (int retry = 0; retry < options.duplicate_retries; ++retry) {
      const bool dup = std::any_of(set.plans.begin(), set.plans.end(),
                                   [&](const Plan& p) { return p.hover == plan.hover; });
      if (!dup) break;
      plan = make_plan();
    }
    set.plans.push_back(std::move(plan));
  }
  return set;
}

std::vector<AgentPlanSet> generate_all_plans(const GridEnvironment& env, const DroneSpec& spec,
                                             const SensingRequirement& requirement,
                                             const PlanGenOptions& options, int n_agents,
                                             std::uint64_t master_seed) {
  if (n_agents < 1) throw EmptyPopulation("need at least one agent");
  std::vector<AgentPlanSet> out;
  out.reserve(static_cast<std::size_t>(n_agents));
  for (int a = 0; a < n_agents; ++a) {
    Rng rng(master_seed, Stream::kPlans, static_cast<std::uint64_t>(a));
    out.push_back(generate_plans(a, env, spec, requirement, options, rng));
  }
  return out;
}

}  // namespace mset
