#include "mset/epos.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mset/errors.hpp"

namespace mset {

namespace {

void check_plan_sets(const std::vector<AgentPlanSet>& plan_sets, std::size_t m) {
  if (plan_sets.empty()) throw EmptyPopulation("no agents to select plans for");
  for (std::size_t a = 0; a < plan_sets.size(); ++a) {
    if (plan_sets[a].plans.empty())
      throw EmptyPopulation("agent " + std::to_string(a) + " has an empty plan set");
    for (const auto& p : plan_sets[a].plans) {
      if (p.hover.size() != m)
        throw DimensionError("agent " + std::to_string(a) + " has a plan of the wrong length");
    }
  }
}

void add_into(std::vector<double>& acc, const std::vector<double>& v, double sign = 1.0) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += sign * v[i];
}

}  // namespace

std::vector<int> TreeTopology::post_order() const {
  std::vector<int> out;
  out.reserve(order.size());
  for (auto it = levels.rbegin(); it != levels.rend(); ++it)
    out.insert(out.end(), it->begin(), it->end());
  return out;
}

TreeTopology build_tree(int n, Rng& rng) {
  if (n < 1) throw EmptyPopulation("cannot build a tree over zero agents");
  const auto un = static_cast<std::size_t>(n);
  TreeTopology tree;
  tree.order.resize(un);
  std::iota(tree.order.begin(), tree.order.end(), 0);
  rng.shuffle(tree.order.begin(), tree.order.end());

  tree.parent.assign(un, -1);
  tree.children.assign(un, {});
  for (std::size_t slot = 0; slot < un; ++slot) {
    const int agent = tree.order[slot];
    for (std::size_t child_slot : {2 * slot + 1, 2 * slot + 2}) {
      if (child_slot >= un) continue;
      const int child = tree.order[child_slot];
      tree.children[static_cast<std::size_t>(agent)].push_back(child);
      tree.parent[static_cast<std::size_t>(child)] = agent;
    }
    // Depth of heap slot i is floor(log2(i + 1)).
    std::size_t depth = 0;
    for (std::size_t s = slot + 1; s > 1; s >>= 1) ++depth;
    if (tree.levels.size() <= depth) tree.levels.resize(depth + 1);
    tree.levels[depth].push_back(agent);
  }
  return tree;
}

std::vector<double> unit_scale(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  std::vector<double> out(v.size(), 0.0);
  if (norm > 0.0) {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / norm;
  }
  return out;
}

double rss(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DimensionError("rss needs equal lengths, got " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  const auto ua = unit_scale(a);
  const auto ub = unit_scale(b);
  double s = 0.0;
  for (std::size_t i = 0; i < ua.size(); ++i) {
    const double d = ua[i] - ub[i];
    s += d * d;
  }
  return s;
}

std::vector<double> aggregate_of(const std::vector<AgentPlanSet>& plan_sets,
                                 const std::vector<int>& chosen) {
  std::vector<double> agg(plan_sets.at(0).plans.at(0).hover.size(), 0.0);
  for (std::size_t a = 0; a < plan_sets.size(); ++a)
    add_into(agg, plan_sets[a].plans.at(static_cast<std::size_t>(chosen[a])).hover);
  return agg;
}

Selection optimize(const std::vector<AgentPlanSet>& plan_sets, const SensingRequirement& requirement,
                   const TreeTopology& tree, const OptimizeOptions& options) {
  const std::size_t m = requirement.size();
  check_plan_sets(plan_sets, m);
  if (options.iterations < 1) throw InvalidSpec("optimize needs at least one iteration");
  if (tree.size() != plan_sets.size())
    throw DimensionError("tree size does not match the number of agents");

  const std::size_t n = plan_sets.size();
  const auto& target = requirement.values;
  const auto post = tree.post_order();

  auto hover_of = [&](std::size_t agent, int plan) -> const std::vector<double>& {
    return plan_sets[agent].plans[static_cast<std::size_t>(plan)].hover;
  };

  // Committed state after the last top-down pass.
  std::vector<int> committed(n, -1);
  std::vector<std::vector<double>> committed_subtree(n, std::vector<double>(m, 0.0));
  std::vector<double> global(m, 0.0);
  bool have_global = false;

  Selection sel;
  sel.trace.reserve(static_cast<std::size_t>(options.iterations));

  std::vector<int> tentative(n, -1);
  std::vector<std::vector<double>> fresh_subtree(n, std::vector<double>(m, 0.0));
  std::vector<double> view(m);

  // Reverts every agent under `agent` (inclusive) to its committed plan.
  auto revert_subtree = [&](int agent) {
    std::vector<int> stack{agent};
    while (!stack.empty()) {
      const auto a = static_cast<std::size_t>(stack.back());
      stack.pop_back();
      tentative[a] = committed[a];
      fresh_subtree[a] = committed_subtree[a];
      for (int c : tree.children[a]) stack.push_back(c);
    }
  };

  for (int iter = 0; iter < options.iterations; ++iter) {
    // Bottom-up.
    for (int agent_i : post) {
      const auto agent = static_cast<std::size_t>(agent_i);
      const auto& kids = tree.children[agent];
      const std::size_t n_subsets = have_global ? (std::size_t{1} << kids.size()) : 1;
      const std::size_t k = plan_sets[agent].plans.size();

      // Everything outside this subtree as last broadcast.
      std::vector<double> outside(m, 0.0);
      if (have_global) {
        outside = global;
        add_into(outside, committed_subtree[agent], -1.0);
      }

      double best = 0.0;
      std::size_t best_subset = 0;
      std::size_t best_plan = 0;
      bool found = false;
      for (std::size_t subset = 0; subset < n_subsets; ++subset) {
        // On the first pass there is nothing to revert to: approve all.
        std::vector<double> base = outside;
        for (std::size_t ci = 0; ci < kids.size(); ++ci) {
          const auto child = static_cast<std::size_t>(kids[ci]);
          const bool approve = !have_global || ((subset >> ci) & 1U);
          add_into(base, approve ? fresh_subtree[child] : committed_subtree[child]);
        }
        for (std::size_t p = 0; p < k; ++p) {
          const auto& h = hover_of(agent, static_cast<int>(p));
          for (std::size_t c = 0; c < m; ++c) view[c] = base[c] + h[c];
          const double cost = rss(view, target);
          if (!found || cost < best) {
            best = cost;
            best_subset = subset;
            best_plan = p;
            found = true;
          }
        }
      }

      for (std::size_t ci = 0; ci < kids.size(); ++ci) {
        const bool approve = !have_global || ((best_subset >> ci) & 1U);
        if (!approve) revert_subtree(kids[ci]);
      }
      tentative[agent] = static_cast<int>(best_plan);
      auto& sub = fresh_subtree[agent];
      sub = hover_of(agent, tentative[agent]);
      for (int c : kids) add_into(sub, fresh_subtree[static_cast<std::size_t>(c)]);
    }

    // Top-down: the root's subtree aggregate is the new global response.
    // The "keep everything" option is already in the root's search, but the
    // sums are taken in a different order, so compare the exact values too.
    const auto proposed = aggregate_of(plan_sets, tentative);
    const double proposed_rss = rss(proposed, target);
    if (!have_global || proposed_rss <= sel.trace.back()) {
      committed = tentative;
      committed_subtree = fresh_subtree;
      global = proposed;
      have_global = true;
      sel.trace.push_back(proposed_rss);
    } else {
      tentative = committed;
      fresh_subtree = committed_subtree;
      sel.trace.push_back(sel.trace.back());
    }
  }

  sel.chosen = committed;
  sel.aggregate = aggregate_of(plan_sets, sel.chosen);
  sel.rss = rss(sel.aggregate, target);
  return sel;
}

Selection optimize(const std::vector<AgentPlanSet>& plan_sets, const SensingRequirement& requirement,
                   int iterations, Rng& rng) {
  if (plan_sets.empty()) throw EmptyPopulation("no agents to select plans for");
  const TreeTopology tree = build_tree(static_cast<int>(plan_sets.size()), rng);
  return optimize(plan_sets, requirement, tree, OptimizeOptions{iterations});
}

Selection brute_force(const std::vector<AgentPlanSet>& plan_sets,
                      const SensingRequirement& requirement) {
  const std::size_t m = requirement.size();
  check_plan_sets(plan_sets, m);
  double combos = 1.0;
  for (const auto& s : plan_sets) combos *= static_cast<double>(s.plans.size());
  if (combos > kBruteForceLimit)
    throw InvalidSpec("brute force refused: " + std::to_string(combos) + " combinations");

  const std::size_t n = plan_sets.size();
  std::vector<int> idx(n, 0);
  std::vector<double> agg(m);
  Selection best;
  bool found = false;
  // Odometer with the last agent varying fastest gives lexicographic order.
  while (true) {
    std::fill(agg.begin(), agg.end(), 0.0);
    for (std::size_t a = 0; a < n; ++a)
      add_into(agg, plan_sets[a].plans[static_cast<std::size_t>(idx[a])].hover);
    const double cost = rss(agg, requirement.values);
    if (!found || cost < best.rss) {
      best.rss = cost;
      best.chosen = idx;
      best.aggregate = agg;
      found = true;
    }
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < static_cast<int>(plan_sets[pos].plans.size())) break;
      idx[pos] = 0;
      if (pos == 0) {
        best.trace = {best.rss};
        return best;
      }
    }
  }
}

Selection greedy_select(const std::vector<AgentPlanSet>& plan_sets,
                        const SensingRequirement& requirement) {
  check_plan_sets(plan_sets, requirement.size());
  Selection sel;
  sel.chosen.reserve(plan_sets.size());
  for (const auto& set : plan_sets) {
    std::size_t best = 0;
    for (std::size_t p = 1; p < set.plans.size(); ++p)
      if (set.plans[p].cost < set.plans[best].cost) best = p;
    sel.chosen.push_back(static_cast<int>(best));
  }
  sel.aggregate = aggregate_of(plan_sets, sel.chosen);
  sel.rss = rss(sel.aggregate, requirement.values);
  sel.trace = {sel.rss};
  return sel;
}

}  // namespace mset
