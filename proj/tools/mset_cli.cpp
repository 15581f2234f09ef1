// mset: command line front end for the sensing swarm pipeline.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mset/config.hpp"
#include "mset/errors.hpp"
#include "mset/io.hpp"
#include "mset/pipeline.hpp"
#include "mset/svg.hpp"

namespace fs = std::filesystem;
using namespace mset;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

// --out wins, then $MSET_OUT_ROOT joined with the last component of the
// config's output_dir, then the config's output_dir on its own.
fs::path output_root(const std::string& out_flag, const fs::path& configured) {
  if (!out_flag.empty()) return out_flag;
  if (const char* root = std::getenv("MSET_OUT_ROOT"); root && *root) {
    return fs::path(root) / configured.filename();
  }
  return configured;
}

ScenarioConfig config_or_default(const std::string& path) {
  return path.empty() ? ScenarioConfig{} : load_config(path);
}

Method parse_method(const std::string& name) {
  auto m = method_from_string(name);
  if (!m) throw DataError("unknown method '" + name + "'");
  return *m;
}

std::string to_text(auto&& writer) {
  std::ostringstream s;
  writer(s);
  return s.str();
}

std::vector<AgentPlanSet> load_plans(const ScenarioConfig& cfg, const std::string& dir, std::uint64_t seed) {
  if (dir.empty()) return plans_for(cfg, seed);
  const auto env = cfg.env();
  std::vector<AgentPlanSet> sets;
  for (int a = 0; a < cfg.n_drones; ++a)
    sets.push_back(io::read_plan_set(fs::path(dir) / ("plans_agent" + std::to_string(a) + ".csv"), a,
                                     static_cast<std::size_t>(env.cell_count()), env.home(a)));
  return sets;
}

Selection load_selection(const ScenarioConfig& cfg, Method method, const std::vector<AgentPlanSet>& plans,
                         const std::string& path, std::uint64_t seed) {
  if (path.empty()) return select_plans(cfg, method, plans, seed);
  Selection sel;
  sel.chosen = io::read_selection(path);
  if (sel.chosen.size() != plans.size())
    throw DataError(path + ": selection has " + std::to_string(sel.chosen.size()) + " agents, expected " +
                    std::to_string(plans.size()));
  for (std::size_t a = 0; a < plans.size(); ++a)
    if (sel.chosen[a] < 0 || static_cast<std::size_t>(sel.chosen[a]) >= plans[a].plans.size())
      throw DataError(path + ": plan index out of range for agent " + std::to_string(a));
  sel.aggregate = aggregate_of(plans, sel.chosen);
  sel.rss = rss(sel.aggregate, cfg.requirement.values);
  sel.trace = {sel.rss};
  return sel;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-drone sensing: plan generation, collective plan selection, "
               "collision avoidance and simulation"};
  app.require_subcommand(1);

  std::string config_path, out_flag, only, method_name = "EPOS-PF", plans_dir, selection_path;
  std::uint64_t seed = 1;
  int jobs = 1;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Scenario config (JSON)")->check(CLI::ExistingFile);
  };

  auto* ingest = app.add_subcommand("ingest", "Bin vehicle trajectories into a sensing requirement");
  std::string trajectories;
  double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
  ingest->add_option("trajectories", trajectories, "CSV vehicle_id,t,x,y")->required()->check(CLI::ExistingFile);
  ingest->add_option("--t0", t0, "Window start (s)");
  ingest->add_option("--t1", t1, "Window end (s)");
  add_config(ingest);
  ingest->add_option("--out", out_flag, "Output requirement CSV (default: stdout)");

  auto* gen = app.add_subcommand("generate-plans", "Generate candidate plans for every drone");
  add_config(gen);
  gen->add_option("--seed", seed, "Master seed");
  gen->add_option("--out", out_flag, "Output directory")->required();

  auto* opt = app.add_subcommand("optimize", "Select one plan per drone");
  add_config(opt);
  opt->add_option("--seed", seed, "Master seed");
  opt->add_option("--method", method_name, "EPOS, EPOS-CA, EPOS-PF or Greedy-PF");
  opt->add_option("--plans", plans_dir, "Directory written by generate-plans");
  opt->add_option("--out", out_flag, "Output directory")->required();

  auto* sched = app.add_subcommand("schedule", "Detect conflicts and repair them with waits and detours");
  add_config(sched);
  sched->add_option("--seed", seed, "Master seed");
  sched->add_option("--plans", plans_dir, "Directory written by generate-plans");
  sched->add_option("--selection", selection_path, "selection.csv written by optimize");
  sched->add_option("--out", out_flag, "Output directory")->required();

  auto* sim = app.add_subcommand("simulate", "Run one (method, seed) mission and write its logs");
  add_config(sim);
  sim->add_option("--seed", seed, "Master seed");
  sim->add_option("--method", method_name, "EPOS, EPOS-CA, EPOS-PF or Greedy-PF");
  sim->add_option("--only", only, "METHOD:SEED, overrides --method and --seed");
  sim->add_option("--out", out_flag, "Output directory");

  auto* runc = app.add_subcommand("run", "Run every (method, seed) cell of a config");
  add_config(runc);
  runc->add_option("--seed", seed, "Run only this seed");
  runc->add_option("--only", only, "Run a single METHOD:SEED cell");
  runc->add_option("--jobs", jobs, "Concurrent cells")->check(CLI::PositiveNumber);
  runc->add_option("--out", out_flag, "Output directory");

  auto* plot = app.add_subcommand("plot", "Render summary charts from results.csv");
  std::string results_path;
  plot->add_option("results", results_path, "results.csv")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", out_flag, "Output directory (default: next to results.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*ingest) {
      const auto cfg = config_or_default(config_path);
      const auto result = ingest_trajectories(io::read_trajectories(trajectories), cfg.env(), t0, t1);
      std::cerr << "ingest: " << result.used << " records used, " << result.rejected << " rejected\n";
      if (result.empty_warning) std::cerr << "warning: no usable records, requirement is all zero\n";
      const auto text = to_text([&](std::ostream& o) { io::write_requirement(o, result.requirement); });
      if (out_flag.empty()) std::cout << text;
      else io::write_text(out_flag, text);
      return 0;
    }

    if (*gen) {
      const auto cfg = config_or_default(config_path);
      const auto plans = plans_for(cfg, seed);
      for (const auto& set : plans)
        io::write_text(fs::path(out_flag) / ("plans_agent" + std::to_string(set.agent_id) + ".csv"),
                       to_text([&](std::ostream& o) { io::write_plan_set(o, set); }));
      std::cerr << "wrote " << plans.size() << " plan sets to " << out_flag << "\n";
      return 0;
    }

    if (*opt) {
      const auto cfg = config_or_default(config_path);
      const auto plans = load_plans(cfg, plans_dir, seed);
      const auto sel = select_plans(cfg, parse_method(method_name), plans, seed);
      io::write_text(fs::path(out_flag) / "selection.csv",
                     to_text([&](std::ostream& o) { io::write_selection(o, sel); }));
      io::write_text(fs::path(out_flag) / "selection.json", io::selection_summary_json(sel));
      std::cout << "rss " << io::format_double(sel.rss) << "\n";
      return 0;
    }

    if (*sched) {
      const auto cfg = config_or_default(config_path);
      const auto plans = load_plans(cfg, plans_dir, seed);
      const auto sel = load_selection(cfg, Method::kEposCa, plans, selection_path, seed);
      const auto scenario = cfg.scenario(Method::kEposCa, seed);
      const auto paths = nominal_paths(cfg, plans, sel);
      const auto events = detect_collisions(paths, scenario.params);
      const auto repaired =
          schedule_ca(paths, scenario_priorities(scenario), scenario.params, cfg.spec, cfg.schedule_options());
      io::write_text(fs::path(out_flag) / "events.csv",
                     to_text([&](std::ostream& o) { io::write_events(o, events); }));
      io::write_text(fs::path(out_flag) / "schedule.json", io::timed_paths_json(repaired));
      std::cout << events.size() << " conflicts repaired\n";
      return 0;
    }

    if (*sim) {
      const auto cfg = config_or_default(config_path);
      Method method = parse_method(method_name);
      if (!only.empty()) {
        auto key = parse_cell_key(only);
        if (!key) throw DataError("--only expects METHOD:SEED, got '" + only + "'");
        method = key->method;
        seed = key->seed;
      }
      const auto r = run_cell(cfg, method, seed);
      if (r.status.rfind("error", 0) == 0) {
        std::cerr << r.status << "\n";
        return kExitRuntime;
      }
      const fs::path out = output_root(out_flag, cfg.output_dir) / "runs" /
                           (to_string(method) + "_seed" + std::to_string(seed));
      io::write_text(out / "trajectory.csv", to_text([&](std::ostream& o) { io::write_trajectory_log(o, r.report); }));
      io::write_text(out / "events.csv", to_text([&](std::ostream& o) { io::write_events(o, r.events); }));
      io::write_text(out / "summary.json", io::report_summary_json(r.report, r.metrics));
      io::write_text(out / "results.csv", to_text([&](std::ostream& o) { io::write_results(o, {r.row()}); }));
      std::cout << to_text([&](std::ostream& o) { io::write_results(o, {r.row()}); });
      return 0;
    }

    if (*runc) {
      const auto cfg = config_or_default(config_path);
      BatchOptions options;
      options.jobs = jobs;
      if (runc->count("--seed")) options.seed = seed;
      if (!only.empty()) {
        options.only = parse_cell_key(only);
        if (!options.only) throw DataError("--only expects METHOD:SEED, got '" + only + "'");
      }
      const fs::path out = output_root(out_flag, cfg.output_dir);
      const auto outcome = run_batch(cfg, out, options);
      for (const auto& row : outcome.rows)
        if (row.status != "ok") std::cerr << row.method << " seed " << row.seed << ": " << row.status << "\n";
      std::cerr << outcome.rows.size() << " runs, " << outcome.failed << " not ok; results in "
                << (out / "results.csv").string() << "\n";
      if (!outcome.rows.empty() && outcome.failed == static_cast<int>(outcome.rows.size())) return kExitRuntime;
      return 0;
    }

    if (*plot) {
      const auto rows = io::read_results(results_path);
      std::vector<LabeledMetrics> runs;
      for (const auto& r : rows) {
        if (r.status != "ok") continue;
        Metrics m;
        m.energy_j = r.energy_j;
        m.risk_ratio = r.risk_ratio;
        m.mismatch_rss = r.mismatch_rss;
        m.collision_counts = {{CollisionKind::kCross, r.cross},
                              {CollisionKind::kParallel, r.parallel},
                              {CollisionKind::kDestinationOccupied, r.dest_occupied}};
        runs.push_back({r.method, m});
      }
      if (runs.empty()) throw DataError(results_path + ": no successful runs to plot");
      const fs::path out = out_flag.empty() ? fs::path(results_path).parent_path() : fs::path(out_flag);
      for (const auto& panel : svg::figure_panels(aggregate(runs))) {
        io::write_text(out / panel.file, panel.svg);
        std::cerr << "wrote " << (out / panel.file).string() << "\n";
      }
      return 0;
    }
  } catch (const mset::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
