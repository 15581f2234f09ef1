#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mset/config.hpp"
#include "mset/epos.hpp"
#include "mset/io.hpp"
#include "mset/metrics.hpp"
#include "mset/sched.hpp"
#include "mset/sim.hpp"

namespace mset {

// Plans for one seed; shared by every method so runs are paired.
std::vector<AgentPlanSet> plans_for(const ScenarioConfig& cfg, std::uint64_t seed);

// optimize() for the EPOS family, greedy_select() for Greedy-PF.
Selection select_plans(const ScenarioConfig& cfg, Method method,
                       const std::vector<AgentPlanSet>& plans, std::uint64_t seed);

// Straight-line timed paths of the selected plans, no avoidance.
std::vector<TimedPath> nominal_paths(const ScenarioConfig& cfg, const std::vector<AgentPlanSet>& plans,
                                     const Selection& selection);

struct CellResult {
  Method method = Method::kEpos;
  std::uint64_t seed = 0;
  std::string status = "ok";
  std::vector<AgentPlanSet> plans;
  Selection selection;
  // Conflicts detected on the nominal paths of the selection.
  std::vector<CollisionEvent> events;
  std::optional<std::vector<TimedPath>> schedule;
  MissionReport report;
  Metrics metrics;

  io::ResultRow row() const;
};

/// generate plans -> select -> (EPOS-CA) schedule -> simulate -> metrics.
/// Stage errors are caught and reported through `status`.
CellResult run_cell(const ScenarioConfig& cfg, Method method, std::uint64_t seed);

struct CellKey {
  Method method;
  std::uint64_t seed;
};

// Parses "METHOD:SEED".
std::optional<CellKey> parse_cell_key(const std::string& s);

struct BatchOptions {
  std::optional<CellKey> only;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool write_run_logs = true;
};

struct BatchOutcome {
  std::vector<io::ResultRow> rows;
  std::vector<MethodSummary> summary;
  int failed = 0;
};

/// Runs every (method, seed) cell of the config, writes per-run logs under
/// out/runs/, then results.csv and summary.json sorted by (method, seed).
BatchOutcome run_batch(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                       const BatchOptions& options);

std::string summary_json(const std::vector<MethodSummary>& summary, const std::vector<io::ResultRow>& rows);

}  // namespace mset
