#include <doctest.h>

#include <cmath>
#include <set>

#include "mset/epos.hpp"
#include "mset/errors.hpp"

using namespace mset;
using doctest::Approx;

namespace {

AgentPlanSet make_set(int id, const std::vector<std::vector<double>>& hovers) {
  AgentPlanSet s;
  s.agent_id = id;
  for (const auto& h : hovers) {
    Plan p;
    p.hover = h;
    for (std::size_t c = 0; c < h.size(); ++c)
      if (h[c] > 0.0) p.route.push_back(static_cast<int>(c));
    for (double x : h) p.cost += x;
    s.plans.push_back(p);
  }
  return s;
}

std::vector<AgentPlanSet> random_instance(Rng& rng, int n, int k, int m) {
  std::vector<AgentPlanSet> sets;
  for (int a = 0; a < n; ++a) {
    std::vector<std::vector<double>> hovers;
    for (int p = 0; p < k; ++p) {
      std::vector<double> h(static_cast<std::size_t>(m));
      for (auto& x : h) x = rng.uniform() < 0.5 ? 0.0 : rng.uniform(1.0, 30.0);
      hovers.push_back(h);
    }
    sets.push_back(make_set(a, hovers));
  }
  return sets;
}

}  // namespace

TEST_CASE("rss of unit scaled vectors") {
  const std::vector<double> a{1, 0}, b{1, 1};
  CHECK(rss(a, b) == Approx(0.585786437626905).epsilon(1e-12));
  const std::vector<double> c{2, 4}, d{1, 2};
  CHECK(rss(c, d) == Approx(0.0).epsilon(1e-15));
  const std::vector<double> z{0, 0};
  CHECK(rss(z, b) == Approx(1.0));
  const std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(rss(a, three), DimensionError);
}

TEST_CASE("tree topology") {
  Rng rng(4);
  const auto t = build_tree(7, rng);
  CHECK(t.size() == 7);
  CHECK(t.depth() == 2);
  CHECK(t.parent[static_cast<std::size_t>(t.root())] == -1);
  std::set<int> seen(t.order.begin(), t.order.end());
  CHECK(seen.size() == 7);
  const auto post = t.post_order();
  CHECK(post.back() == t.root());
  std::vector<int> pos(7);
  for (std::size_t i = 0; i < post.size(); ++i) pos[static_cast<std::size_t>(post[i])] = static_cast<int>(i);
  for (int a = 0; a < 7; ++a)
    for (int c : t.children[static_cast<std::size_t>(a)]) CHECK(pos[static_cast<std::size_t>(c)] < pos[static_cast<std::size_t>(a)]);
  CHECK(build_tree(1, rng).depth() == 0);
  CHECK_THROWS_AS(build_tree(0, rng), EmptyPopulation);
}

TEST_CASE("optimize finds the obvious match") {
  std::vector<AgentPlanSet> sets{make_set(0, {{1, 0}, {0, 1}}), make_set(1, {{1, 0}, {0, 1}})};
  Rng rng(1);
  const auto sel = optimize(sets, {{1, 1}}, 5, rng);
  CHECK(sel.rss == Approx(0.0).epsilon(1e-12));
  CHECK(sel.chosen[0] != sel.chosen[1]);
  CHECK(sel.aggregate == std::vector<double>{1, 1});
}

TEST_CASE("single agent picks its best plan") {
  std::vector<AgentPlanSet> sets{make_set(0, {{5, 0, 0}, {1, 1, 0}, {1, 2, 3}})};
  Rng rng(1);
  const auto sel = optimize(sets, {{1, 2, 3}}, 1, rng);
  CHECK(sel.chosen == std::vector<int>{2});
}

TEST_CASE("trace never increases and matches brute force bound") {
  Rng gen(99);
  for (int inst = 0; inst < 40; ++inst) {
    const int n = 2 + static_cast<int>(gen.uniform_int(0, 3));
    auto sets = random_instance(gen, n, 4, 5);
    SensingRequirement req;
    for (int c = 0; c < 5; ++c) req.values.push_back(gen.uniform(0.0, 10.0));
    Rng rng(static_cast<std::uint64_t>(inst));
    const auto sel = optimize(sets, req, 20, rng);
    for (std::size_t i = 1; i < sel.trace.size(); ++i) CHECK(sel.trace[i] <= sel.trace[i - 1]);
    CHECK(sel.trace.back() == sel.rss);
    const auto best = brute_force(sets, req);
    CHECK(best.rss <= sel.rss + 1e-12);
    CHECK(rss(aggregate_of(sets, sel.chosen), req.values) == sel.rss);
  }
}

TEST_CASE("optimize is deterministic") {
  Rng gen(5);
  auto sets = random_instance(gen, 6, 8, 6);
  SensingRequirement req{{1, 2, 3, 4, 5, 6}};
  Rng r1(3), r2(3);
  const auto a = optimize(sets, req, 30, r1);
  const auto b = optimize(sets, req, 30, r2);
  CHECK(a.chosen == b.chosen);
  CHECK(a.trace == b.trace);
}

TEST_CASE("brute force prefers the lexicographically smallest tie") {
  std::vector<AgentPlanSet> sets{make_set(0, {{1, 0}, {1, 0}}), make_set(1, {{0, 1}, {0, 1}})};
  const auto best = brute_force(sets, {{1, 1}});
  CHECK(best.chosen == std::vector<int>{0, 0});
}

TEST_CASE("greedy takes the cheapest plan") {
  std::vector<AgentPlanSet> sets{make_set(0, {{3, 0}, {1, 0}, {1, 0}}), make_set(1, {{0, 2}, {0, 5}})};
  const auto sel = greedy_select(sets, {{1, 1}});
  CHECK(sel.chosen == std::vector<int>{1, 0});
  CHECK(sel.aggregate == std::vector<double>{1, 2});
}

TEST_CASE("input validation") {
  Rng rng(1);
  CHECK_THROWS_AS(optimize({}, {{1}}, 5, rng), EmptyPopulation);
  std::vector<AgentPlanSet> empty_plans{AgentPlanSet{}};
  CHECK_THROWS_AS(greedy_select(empty_plans, {{1}}), EmptyPopulation);
  std::vector<AgentPlanSet> sets{make_set(0, {{1, 0}})};
  CHECK_THROWS_AS(optimize(sets, {{1, 1, 1}}, 5, rng), DimensionError);
  CHECK_THROWS_AS(optimize(sets, {{1, 1}}, 0, rng), InvalidSpec);
}
