#include "mset/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "mset/errors.hpp"
#include "mset/plangen.hpp"

namespace mset {

std::vector<AgentPlanSet> plans_for(const ScenarioConfig& cfg, std::uint64_t seed) {
  return generate_all_plans(cfg.env(), cfg.spec, cfg.requirement, cfg.plangen, cfg.n_drones, seed);
}

Selection select_plans(const ScenarioConfig& cfg, Method method,
                       const std::vector<AgentPlanSet>& plans, std::uint64_t seed) {
  if (method == Method::kGreedyPf) return greedy_select(plans, cfg.requirement);
  Rng rng(seed, Stream::kTree);
  return optimize(plans, cfg.requirement, cfg.epos_iterations, rng);
}

std::vector<TimedPath> nominal_paths(const ScenarioConfig& cfg, const std::vector<AgentPlanSet>& plans,
                                     const Selection& selection) {
  const GridEnvironment env = cfg.env();
  std::vector<TimedPath> out;
  out.reserve(plans.size());
  for (std::size_t a = 0; a < plans.size(); ++a)
    out.push_back(build_timed_path(static_cast<int>(a),
                                   plans[a].plans.at(static_cast<std::size_t>(selection.chosen[a])),
                                   env, cfg.spec));
  return out;
}

io::ResultRow CellResult::row() const {
  io::ResultRow r;
  r.method = to_string(method);
  r.seed = seed;
  r.status = status;
  if (status == "ok" || status == "timeout") {
    r.energy_j = metrics.energy_j;
    r.risk_ratio = metrics.risk_ratio;
    r.mismatch_rss = metrics.mismatch_rss;
    r.cross = metrics.count(CollisionKind::kCross);
    r.parallel = metrics.count(CollisionKind::kParallel);
    r.dest_occupied = metrics.count(CollisionKind::kDestinationOccupied);
  }
  return r;
}

CellResult run_cell(const ScenarioConfig& cfg, Method method, std::uint64_t seed) {
  CellResult out;
  out.method = method;
  out.seed = seed;
  std::string stage = "plan generation";
  try {
    const Scenario scenario = cfg.scenario(method, seed);
    out.plans = plans_for(cfg, seed);
    stage = "plan selection";
    out.selection = select_plans(cfg, method, out.plans, seed);
    stage = "collision detection";
    const auto paths = nominal_paths(cfg, out.plans, out.selection);
    out.events = detect_collisions(paths, scenario.params);
    if (method == Method::kEposCa) {
      stage = "scheduling";
      out.schedule = schedule_ca(paths, scenario_priorities(scenario), scenario.params, cfg.spec,
                                 cfg.schedule_options());
    }
    stage = "simulation";
    out.report = run(scenario, out.plans, out.selection, out.schedule);
    out.metrics = compute_metrics(out.report, cfg.requirement, out.events);
    if (!out.report.complete) out.status = "timeout";
  } catch (const std::exception& e) {
    std::string what = e.what();
    std::replace(what.begin(), what.end(), ',', ';');
    std::replace(what.begin(), what.end(), '\n', ' ');
    out.status = "error: " + stage + ": " + what;
  }
  return out;
}

std::optional<CellKey> parse_cell_key(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos) return std::nullopt;
  const auto method = method_from_string(s.substr(0, colon));
  if (!method) return std::nullopt;
  try {
    std::size_t used = 0;
    const std::string seed_text = s.substr(colon + 1);
    const auto seed = std::stoull(seed_text, &used);
    if (used != seed_text.size()) return std::nullopt;
    return CellKey{*method, seed};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string summary_json(const std::vector<MethodSummary>& summary, const std::vector<io::ResultRow>& rows) {
  auto stat = [](const SummaryStat& s) {
    return nlohmann::ordered_json{{"mean", s.mean}, {"stderr", s.stderr_}, {"n", s.n}};
  };
  nlohmann::ordered_json j;
  j["runs"] = rows.size();
  j["failed"] = std::count_if(rows.begin(), rows.end(), [](const io::ResultRow& r) {
    return r.status != "ok";
  });
  nlohmann::ordered_json methods = nlohmann::ordered_json::array();
  for (const auto& m : summary) {
    methods.push_back({{"method", m.method},
                       {"energy_J", stat(m.energy_j)},
                       {"risk_ratio", stat(m.risk_ratio)},
                       {"mismatch_rss", stat(m.mismatch_rss)},
                       {"cross", stat(m.cross)},
                       {"parallel", stat(m.parallel)},
                       {"dest_occupied", stat(m.dest_occupied)},
                       {"sub_dmin_events", stat(m.sub_dmin_events)}});
  }
  j["methods"] = methods;
  return j.dump(2) + "\n";
}

BatchOutcome run_batch(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                       const BatchOptions& options) {
  std::vector<CellKey> cells;
  for (Method m : cfg.methods) {
    for (std::uint64_t s : cfg.seeds) {
      if (options.seed && *options.seed != s) continue;
      if (options.only && (options.only->method != m || options.only->seed != s)) continue;
      cells.push_back({m, s});
    }
  }
  // --only may name a cell outside the config's lists; run it anyway.
  if (options.only && cells.empty()) cells.push_back(*options.only);
  std::sort(cells.begin(), cells.end(), [](const CellKey& a, const CellKey& b) {
    return std::pair(static_cast<int>(a.method), a.seed) < std::pair(static_cast<int>(b.method), b.seed);
  });

  std::vector<io::ResultRow> rows(cells.size());
  std::vector<Metrics> metrics(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex fs_mutex;

  auto worker = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const CellResult r = run_cell(cfg, cells[i].method, cells[i].seed);
      rows[i] = r.row();
      metrics[i] = r.metrics;
      if (!options.write_run_logs || r.status.rfind("error", 0) == 0) continue;
      const auto dir = out_dir / "runs" / (to_string(r.method) + "_seed" + std::to_string(r.seed));
      std::ostringstream traj, events, sel;
      io::write_trajectory_log(traj, r.report);
      io::write_events(events, r.events);
      io::write_selection(sel, r.selection);
      std::lock_guard lock(fs_mutex);
      io::write_text(dir / "trajectory.csv", traj.str());
      io::write_text(dir / "events.csv", events.str());
      io::write_text(dir / "selection.csv", sel.str());
      io::write_text(dir / "selection.json", io::selection_summary_json(r.selection));
      io::write_text(dir / "summary.json", io::report_summary_json(r.report, r.metrics));
      if (r.schedule) io::write_text(dir / "schedule.json", io::timed_paths_json(*r.schedule));
    }
  };

  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BatchOutcome outcome;
  outcome.rows = rows;
  std::vector<LabeledMetrics> ok;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].status == "ok") ok.push_back({rows[i].method, metrics[i]});
    else ++outcome.failed;
  }
  outcome.summary = aggregate(ok);

  std::ostringstream results;
  io::write_results(results, rows);
  io::write_text(out_dir / "results.csv", results.str());
  io::write_text(out_dir / "summary.json", summary_json(outcome.summary, rows));
  return outcome;
}

}  // namespace mset
