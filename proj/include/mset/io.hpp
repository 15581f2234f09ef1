#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mset/env.hpp"
#include "mset/epos.hpp"
#include "mset/metrics.hpp"
#include "mset/plan.hpp"
#include "mset/sched.hpp"
#include "mset/sim.hpp"

namespace mset::io {

// Shortest round-trip decimal form.
std::string format_double(double v);

/// Minimal CSV reader: comma separated, no quoting, first line is a header
/// that must match `expected` exactly. Throws DataError with line numbers.
class CsvTable {
 public:
  static CsvTable parse(std::istream& in, const std::vector<std::string>& expected,
                        const std::string& source);
  static CsvTable read(const std::filesystem::path& path, const std::vector<std::string>& expected);

  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t line_of(std::size_t row) const { return lines_.at(row); }
  double number(std::size_t row, std::size_t col) const;
  long long integer(std::size_t row, std::size_t col) const;
  const std::string& text(std::size_t row, std::size_t col) const { return rows_.at(row).at(col); }

 private:
  std::string source_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
};

// vehicle_id,t,x,y
std::vector<TrajectoryRecord> read_trajectories(const std::filesystem::path& path);
void write_trajectories(std::ostream& out, const std::vector<TrajectoryRecord>& records);

// cell,value with M rows in row-major order
SensingRequirement read_requirement(const std::filesystem::path& path);
void write_requirement(std::ostream& out, const SensingRequirement& req);

// plan,cell,hover_s,cost_J with one row per visited cell, in route order
void write_plan_set(std::ostream& out, const AgentPlanSet& set);
AgentPlanSet read_plan_set(const std::filesystem::path& path, int agent_id, std::size_t cells,
                           const Vec2& home);

// agent,plan_index
void write_selection(std::ostream& out, const Selection& sel);
std::vector<int> read_selection(const std::filesystem::path& path);
// {rss, iterations, trace}
std::string selection_summary_json(const Selection& sel);

// time,kind,drone_a,drone_b,x,y
void write_events(std::ostream& out, const std::vector<CollisionEvent>& events);

// t,drone,x,y,phase,energy_J,min_dist_m
void write_trajectory_log(std::ostream& out, const MissionReport& report);

std::string report_summary_json(const MissionReport& report, const Metrics& metrics);

std::string timed_paths_json(const std::vector<TimedPath>& paths);
std::vector<TimedPath> timed_paths_from_json(const std::string& text);

struct ResultRow {
  std::string method;
  std::uint64_t seed = 0;
  double energy_j = 0.0;
  double risk_ratio = 0.0;
  double mismatch_rss = 0.0;
  int cross = 0;
  int parallel = 0;
  int dest_occupied = 0;
  std::string status = "ok";
};

// method,seed,energy_J,risk_ratio,mismatch_rss,cross,parallel,dest_occupied,status
void write_results(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mset::io
