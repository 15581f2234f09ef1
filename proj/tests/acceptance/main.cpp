// Acceptance checks. One line per criterion: "[N] PASS|FAIL name: detail".

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mset/config.hpp"
#include "mset/energy.hpp"
#include "mset/epos.hpp"
#include "mset/pfield.hpp"
#include "mset/pipeline.hpp"
#include "mset/plangen.hpp"
#include "mset/sim.hpp"

using namespace mset;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int jobs() { return static_cast<int>(std::max(1U, std::thread::hardware_concurrency())); }

// Criterion 1: repulsive term is zero outside the radius and s^2 / D inside.
Outcome field_kernel() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  FieldParams params;
  params.d_min = 0.25;
  params.delta = 2.5;
  int bad = 0, inside = 0;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double p = std::exp(rng.uniform(0.0, 3.0));
    const double d = 1.0 - rng.uniform();  // (0, 1]
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double prev_attr = rng.uniform();
    const Vec2 dest{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const Vec2 obstacle = rotate({d, 0.0}, angle);
    PriorityAssignment pr{{1.0, p}, std::exp(2.0)};
    FieldAgent me{0, {0, 0}, dest, prev_attr};
    FieldAgent other{1, obstacle, std::nullopt, 1.0};
    const auto res = total_vector(me, {me, other}, {}, params, pr, {});
    const double radius = params.d_min * (1.0 + std::log(p));
    const double s = params.delta * prev_attr + std::log(p);
    const double got = res.repulsive.norm();
    if (d > radius || !(s > 0.0)) {
      if (got != 0.0) ++bad;
      continue;
    }
    ++inside;
    const double want = s * s / d;
    const double rel = std::abs(got - want) / want;
    worst = std::max(worst, rel);
    if (rel > 1e-12) ++bad;
  }
  const double secs = since(t0);
  return {bad == 0 && secs < 1.0, std::to_string(inside) + " in-radius cases, max rel err " + fmt("%.2e", worst) +
                                      ", " + std::to_string(bad) + " violations, " + fmt("%.3f s", secs)};
}

// Criterion 2: pairs flying head-on or crossing under EPOS-PF.
Outcome deadlock_freedom() {
  const auto t0 = std::chrono::steady_clock::now();
  int ok = 0;
  double closest = 1e9;
  std::string first_failure;
  for (int k = 0; k < 50; ++k) {
    const bool head_on = k % 2 == 0;
    Rng rng(static_cast<std::uint64_t>(1000 + k));
    Scenario sc;
    sc.env = default_grid(2);
    sc.n_drones = 2;
    sc.method = Method::kEposPf;
    sc.seed = static_cast<std::uint64_t>(k + 1);
    sc.requirement.values.assign(6, 1.0);
    // Head-on: opposite ends of the bottom row swapped. Crossing: the two diagonals.
    const std::vector<std::vector<int>> routes =
        head_on ? std::vector<std::vector<int>>{{0, 2}, {2, 0}} : std::vector<std::vector<int>>{{0, 5}, {2, 3}};
    const double base = rng.uniform(2.0, 10.0);
    const double jitter = k % 4 < 2 ? 0.0 : rng.uniform(0.0, 3.0);
    std::vector<AgentPlanSet> sets;
    Selection sel;
    for (int i = 0; i < 2; ++i) {
      Plan plan;
      plan.hover.assign(6, 0.0);
      plan.route = routes[static_cast<std::size_t>(i)];
      for (int c : plan.route) plan.hover[static_cast<std::size_t>(c)] = base + (i == 1 ? jitter : 0.0);
      plan.cost = plan_cost(plan, sc.env, sc.spec, sc.env.home(i));
      sets.push_back({i, {plan}, sc.env.home(i)});
      sel.chosen.push_back(0);
    }
    const auto rep = run(sc, sets, sel);
    bool reached = true;
    for (int i = 0; i < 2; ++i) {
      for (int c : routes[static_cast<std::size_t>(i)]) {
        const Vec2 target = sc.env.cell_center(c);
        double best = 1e9;
        for (const auto& tick : rep.ticks)
          best = std::min(best, distance(tick.drones[static_cast<std::size_t>(i)].pos, target));
        if (best > sc.params.arrival_tolerance + 1e-9) reached = false;
      }
    }
    const double dmin = rep.pair_min_distance[0][1];
    closest = std::min(closest, dmin);
    const bool good = rep.complete && reached && dmin >= sc.params.d_min;
    if (good) ++ok;
    else if (first_failure.empty())
      first_failure = std::string(head_on ? " first failure head-on #" : " first failure crossing #") +
                      std::to_string(k);
  }
  const double secs = since(t0);
  return {ok == 50 && secs < 30.0, std::to_string(ok) + "/50 scenarios clean, closest pair " +
                                       fmt("%.3f m", closest) + "," + first_failure + " " + fmt("%.2f s", secs)};
}

struct GridRuns {
  std::map<Method, std::vector<io::ResultRow>> rows;  // by method, in seed order
  std::map<Method, std::vector<CellResult>> cells;
  double seconds = 0.0;
  int failed = 0;
};

GridRuns run_grid(const fs::path& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioConfig cfg = load_config(config);
  std::vector<std::pair<Method, std::uint64_t>> keys;
  for (Method m : cfg.methods)
    for (auto s : cfg.seeds) keys.push_back({m, s});
  std::vector<CellResult> out(keys.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < keys.size(); i = next++) {
      out[i] = run_cell(cfg, keys[i].first, keys[i].second);
      out[i].report.ticks.clear();
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs(); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  GridRuns g;
  for (auto& c : out) {
    if (c.status != "ok") ++g.failed;
    g.rows[c.method].push_back(c.row());
    g.cells[c.method].push_back(std::move(c));
  }
  g.seconds = since(t0);
  return g;
}

double mean_of(const std::vector<io::ResultRow>& rows, double io::ResultRow::*field) {
  double s = 0.0;
  for (const auto& r : rows) s += r.*field;
  return rows.empty() ? 0.0 : s / static_cast<double>(rows.size());
}

Outcome risk_ordering(const GridRuns& g) {
  const auto& pf = g.rows.at(Method::kEposPf);
  const auto& ep = g.rows.at(Method::kEpos);
  int clean = 0;
  for (const auto& c : g.cells.at(Method::kEposPf))
    if (c.status == "ok" && c.metrics.sub_dmin_events == 0) ++clean;
  const double r_pf = mean_of(pf, &io::ResultRow::risk_ratio);
  const double r_ep = mean_of(ep, &io::ResultRow::risk_ratio);
  const bool pass = g.failed == 0 && r_pf < r_ep && clean >= 18 && g.seconds < 300.0;
  return {pass, "mean risk EPOS-PF " + fmt("%.4f", r_pf) + " vs EPOS " + fmt("%.4f", r_ep) +
                    ", zero sub-d_min seeds " + std::to_string(clean) + "/" + std::to_string(pf.size()) +
                    ", failed cells " + std::to_string(g.failed) + ", " + fmt("%.2f s", g.seconds)};
}

Outcome mismatch_ordering(const GridRuns& g) {
  const double m_pf = mean_of(g.rows.at(Method::kEposPf), &io::ResultRow::mismatch_rss);
  const double m_ca = mean_of(g.rows.at(Method::kEposCa), &io::ResultRow::mismatch_rss);
  const double improvement = m_ca > 0.0 ? 100.0 * (m_ca - m_pf) / m_ca : 0.0;
  return {g.failed == 0 && m_pf < m_ca, "mean mismatch EPOS-PF " + fmt("%.4f", m_pf) + " vs EPOS-CA " +
                                            fmt("%.4f", m_ca) + ", improvement " + fmt("%.2f%%", improvement)};
}

Outcome energy_orderings(const GridRuns& g) {
  const auto& greedy = g.rows.at(Method::kGreedyPf);
  const std::size_t n = greedy.size();
  int greedy_min = 0, pf_above = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool lowest = true;
    for (Method m : {Method::kEpos, Method::kEposCa, Method::kEposPf})
      if (greedy[i].energy_j > g.rows.at(m)[i].energy_j) lowest = false;
    if (lowest) ++greedy_min;
    if (g.rows.at(Method::kEposPf)[i].energy_j >= g.rows.at(Method::kEpos)[i].energy_j) ++pf_above;
  }
  std::string means;
  for (const auto& [m, rows] : g.rows) means += " " + to_string(m) + "=" + fmt("%.0f", mean_of(rows, &io::ResultRow::energy_j));
  const bool pass = g.failed == 0 && greedy_min >= 16 && pf_above >= 16;
  return {pass, "Greedy-PF lowest in " + std::to_string(greedy_min) + "/" + std::to_string(n) +
                    " seeds, EPOS-PF >= EPOS in " + std::to_string(pf_above) + "/" + std::to_string(n) +
                    " seeds; mean J" + means};
}

Outcome collision_profile(const GridRuns& g) {
  const auto& rows = g.rows.at(Method::kEpos);
  int modal = 0, cross = 0, par = 0, dest = 0;
  for (const auto& r : rows) {
    cross += r.cross;
    par += r.parallel;
    dest += r.dest_occupied;
    if (r.dest_occupied > r.cross && r.dest_occupied > r.parallel) ++modal;
  }
  return {modal >= 12, "destination_occupied modal in " + std::to_string(modal) + "/" +
                           std::to_string(rows.size()) + " seeds; totals cross " + std::to_string(cross) +
                           ", parallel " + std::to_string(par) + ", destination_occupied " + std::to_string(dest)};
}

// Criterion 7: optimizer against brute force on small random instances.
Outcome optimizer_soundness() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng gen(77);
  int violations = 0, small = 0, exact = 0;
  double gap_sum = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    const int n = 1 + static_cast<int>(gen.uniform_int(0, 2));
    const int k = gen.uniform() < 0.5 ? 2 : 4;
    const int m = 6;
    std::vector<AgentPlanSet> sets;
    for (int a = 0; a < n; ++a) {
      AgentPlanSet s;
      s.agent_id = a;
      for (int p = 0; p < k; ++p) {
        Plan plan;
        plan.hover.assign(m, 0.0);
        for (int c = 0; c < m; ++c)
          if (gen.uniform() < 0.5) {
            plan.hover[static_cast<std::size_t>(c)] = gen.uniform(1.0, 60.0);
            plan.route.push_back(c);
          }
        s.plans.push_back(plan);
      }
      sets.push_back(s);
    }
    SensingRequirement req;
    for (int c = 0; c < m; ++c) req.values.push_back(gen.uniform(0.0, 50.0));
    Rng tree_rng(static_cast<std::uint64_t>(inst), Stream::kTree);
    const auto sel = optimize(sets, req, 40, tree_rng);
    const auto best = brute_force(sets, req);
    for (std::size_t i = 1; i < sel.trace.size(); ++i)
      if (sel.trace[i] > sel.trace[i - 1]) ++violations;
    if (sel.rss < best.rss) ++violations;
    if (n <= 2) {
      ++small;
      if (sel.chosen == best.chosen) ++exact;
      gap_sum += best.rss > 0.0 ? (sel.rss - best.rss) / best.rss : (sel.rss > 0.0 ? 1.0 : 0.0);
    }
  }
  const double mean_gap = small ? gap_sum / small : 0.0;
  const double secs = since(t0);
  return {violations == 0 && mean_gap <= 0.05 && secs < 30.0,
          std::to_string(violations) + " violations, N<=2 mean relative gap " + fmt("%.4f%%", 100.0 * mean_gap) +
              " (" + std::to_string(exact) + "/" + std::to_string(small) + " exact), " + fmt("%.2f s", secs)};
}

// Criterion 8: a lone drone spends what plan_cost predicts.
Outcome energy_consistency() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng gen(8);
  double worst = 0.0;
  int within = 0;
  for (int i = 0; i < 50; ++i) {
    Scenario sc;
    sc.env = default_grid(1);
    sc.n_drones = 1;
    sc.method = i % 2 ? Method::kEposPf : Method::kEpos;
    sc.seed = static_cast<std::uint64_t>(i + 1);
    for (int c = 0; c < 6; ++c) sc.requirement.values.push_back(gen.uniform() < 0.3 ? 0.0 : gen.uniform(1.0, 50.0));
    if (!sc.requirement.runnable()) sc.requirement.values[0] = 1.0;
    Rng plan_rng(static_cast<std::uint64_t>(i), Stream::kPlans);
    const auto set = generate_plans(0, sc.env, sc.spec, sc.requirement, {}, plan_rng);
    const int pick = static_cast<int>(gen.uniform_int(0, set.plans.size() - 1));
    const auto rep = run(sc, {set}, Selection{{pick}, {}, 0.0, {}});
    const double cost = set.plans[static_cast<std::size_t>(pick)].cost;
    const double rel = std::abs(rep.energy - cost) / cost;
    worst = std::max(worst, rel);
    if (rep.complete && rel <= 0.02) ++within;
  }
  const double secs = since(t0);
  return {within == 50 && secs < 10.0, std::to_string(within) + "/50 within 2%, worst " +
                                           fmt("%.3f%%", 100.0 * worst) + ", " + fmt("%.2f s", secs)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Criterion 9: two full batch runs give byte-identical results.csv.
Outcome determinism(const fs::path& config, const fs::path& scratch) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioConfig cfg = load_config(config);
  fs::remove_all(scratch);
  BatchOptions serial;
  BatchOptions parallel;
  parallel.jobs = std::max(4, jobs());
  run_batch(cfg, scratch / "first", serial);
  run_batch(cfg, scratch / "second", parallel);
  const std::string a = slurp(scratch / "first" / "results.csv");
  const std::string b = slurp(scratch / "second" / "results.csv");
  const bool same = !a.empty() && a == b;
  return {same, std::string(same ? "identical" : "different") + " results.csv (" + std::to_string(a.size()) +
                    " bytes, jobs 1 vs " + std::to_string(parallel.jobs) + "), " + fmt("%.2f s", since(t0))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  std::string config = MSET_DEFAULT_CONFIG;
  std::string scratch = (fs::temp_directory_path() / "mset_acceptance").string();
  app.add_option("--criterion,-c", only, "criteria to run (default all)")->check(CLI::Range(1, 9));
  app.add_option("--config", config, "scenario config for criteria 3-6 and 9");
  app.add_option("--scratch", scratch, "directory for batch outputs");
  CLI11_PARSE(app, argc, argv);
  if (only.empty()) only = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  auto wanted = [&](int c) { return std::find(only.begin(), only.end(), c) != only.end(); };

  const char* names[] = {"", "field kernel", "deadlock freedom", "risk ordering", "mismatch ordering",
                         "energy orderings", "collision profile", "optimizer soundness",
                         "energy estimation", "determinism"};
  std::optional<GridRuns> grid;
  auto need_grid = [&]() -> const GridRuns& {
    if (!grid) grid = run_grid(config);
    return *grid;
  };

  int failures = 0;
  for (int c = 1; c <= 9; ++c) {
    if (!wanted(c)) continue;
    Outcome o;
    try {
      switch (c) {
        case 1: o = field_kernel(); break;
        case 2: o = deadlock_freedom(); break;
        case 3: o = risk_ordering(need_grid()); break;
        case 4: o = mismatch_ordering(need_grid()); break;
        case 5: o = energy_orderings(need_grid()); break;
        case 6: o = collision_profile(need_grid()); break;
        case 7: o = optimizer_soundness(); break;
        case 8: o = energy_consistency(); break;
        case 9: o = determinism(config, fs::path(scratch) / "determinism"); break;
      }
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%d] %s %s: %s\n", c, o.pass ? "PASS" : "FAIL", names[c], o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
