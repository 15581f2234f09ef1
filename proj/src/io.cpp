#include "mset/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mset/errors.hpp"

namespace mset::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable CsvTable::parse(std::istream& in, const std::vector<std::string>& expected,
                         const std::string& source) {
  CsvTable t;
  t.source_ = source;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto cells = split(line);
    if (!header) {
      if (cells != expected)
        throw DataError(source + ":" + std::to_string(lineno) + ": expected header '" +
                        join(expected) + "', got '" + line + "'");
      header = true;
      continue;
    }
    if (cells.size() != expected.size())
      throw DataError(source + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(expected.size()) + " fields, got " + std::to_string(cells.size()));
    t.rows_.push_back(std::move(cells));
    t.lines_.push_back(lineno);
  }
  if (!header) throw DataError(source + ": missing header '" + join(expected) + "'");
  return t;
}

CsvTable CsvTable::read(const std::filesystem::path& path, const std::vector<std::string>& expected) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse(in, expected, path.string());
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const std::string& s = text(row, col);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw DataError(source_ + ":" + std::to_string(line_of(row)) + ": not a number: '" + s + "'");
  return v;
}

long long CsvTable::integer(std::size_t row, std::size_t col) const {
  const std::string& s = text(row, col);
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw DataError(source_ + ":" + std::to_string(line_of(row)) + ": not an integer: '" + s + "'");
  return v;
}

std::vector<TrajectoryRecord> read_trajectories(const std::filesystem::path& path) {
  const auto t = CsvTable::read(path, {"vehicle_id", "t", "x", "y"});
  std::vector<TrajectoryRecord> out;
  out.reserve(t.rows().size());
  for (std::size_t r = 0; r < t.rows().size(); ++r)
    out.push_back({t.text(r, 0), t.number(r, 1), t.number(r, 2), t.number(r, 3)});
  return out;
}

void write_trajectories(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
  out << "vehicle_id,t,x,y\n";
  for (const auto& r : records)
    out << r.vehicle_id << ',' << format_double(r.t) << ',' << format_double(r.x) << ','
        << format_double(r.y) << '\n';
}

SensingRequirement read_requirement(const std::filesystem::path& path) {
  const auto t = CsvTable::read(path, {"cell", "value"});
  SensingRequirement req;
  req.values.resize(t.rows().size());
  std::vector<bool> seen(t.rows().size(), false);
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    const long long cell = t.integer(r, 0);
    if (cell < 0 || cell >= static_cast<long long>(req.values.size()) ||
        seen[static_cast<std::size_t>(cell)])
      throw DataError(path.string() + ":" + std::to_string(t.line_of(r)) + ": bad or repeated cell " +
                      std::to_string(cell));
    const double v = t.number(r, 1);
    if (!(v >= 0.0))
      throw DataError(path.string() + ":" + std::to_string(t.line_of(r)) + ": negative requirement");
    seen[static_cast<std::size_t>(cell)] = true;
    req.values[static_cast<std::size_t>(cell)] = v;
  }
  return req;
}

void write_requirement(std::ostream& out, const SensingRequirement& req) {
  out << "cell,value\n";
  for (std::size_t c = 0; c < req.values.size(); ++c) out << c << ',' << format_double(req.values[c]) << '\n';
}

void write_plan_set(std::ostream& out, const AgentPlanSet& set) {
  out << "plan,cell,hover_s,cost_J\n";
  for (std::size_t p = 0; p < set.plans.size(); ++p) {
    const Plan& plan = set.plans[p];
    for (int c : plan.route)
      out << p << ',' << c << ',' << format_double(plan.hover[static_cast<std::size_t>(c)]) << ','
          << format_double(plan.cost) << '\n';
  }
}

AgentPlanSet read_plan_set(const std::filesystem::path& path, int agent_id, std::size_t cells,
                           const Vec2& home) {
  const auto t = CsvTable::read(path, {"plan", "cell", "hover_s", "cost_J"});
  AgentPlanSet set;
  set.agent_id = agent_id;
  set.home = home;
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    const long long p = t.integer(r, 0);
    const long long c = t.integer(r, 1);
    const std::string where = path.string() + ":" + std::to_string(t.line_of(r));
    if (p < 0 || p > static_cast<long long>(set.plans.size()))
      throw DataError(where + ": plans must be listed in order");
    if (c < 0 || c >= static_cast<long long>(cells)) throw DataError(where + ": cell out of range");
    if (p == static_cast<long long>(set.plans.size())) {
      Plan fresh;
      fresh.hover.assign(cells, 0.0);
      set.plans.push_back(std::move(fresh));
    }
    Plan& plan = set.plans[static_cast<std::size_t>(p)];
    const double h = t.number(r, 2);
    if (!(h > 0.0)) throw DataError(where + ": hover must be positive");
    plan.hover[static_cast<std::size_t>(c)] = h;
    plan.route.push_back(static_cast<int>(c));
    plan.cost = t.number(r, 3);
  }
  return set;
}

void write_selection(std::ostream& out, const Selection& sel) {
  out << "agent,plan_index\n";
  for (std::size_t a = 0; a < sel.chosen.size(); ++a) out << a << ',' << sel.chosen[a] << '\n';
}

std::vector<int> read_selection(const std::filesystem::path& path) {
  const auto t = CsvTable::read(path, {"agent", "plan_index"});
  std::vector<int> chosen(t.rows().size(), -1);
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    const long long a = t.integer(r, 0);
    if (a < 0 || a >= static_cast<long long>(chosen.size()))
      throw DataError(path.string() + ": agent index out of range");
    chosen[static_cast<std::size_t>(a)] = static_cast<int>(t.integer(r, 1));
  }
  return chosen;
}

std::string selection_summary_json(const Selection& sel) {
  nlohmann::ordered_json j;
  j["rss"] = sel.rss;
  j["iterations"] = sel.trace.size();
  j["trace"] = sel.trace;
  return j.dump(2) + "\n";
}

void write_events(std::ostream& out, const std::vector<CollisionEvent>& events) {
  out << "time,kind,drone_a,drone_b,x,y\n";
  for (const auto& e : events)
    out << format_double(e.time) << ',' << to_string(e.kind) << ',' << e.drone_a << ',' << e.drone_b
        << ',' << format_double(e.location.x) << ',' << format_double(e.location.y) << '\n';
}

void write_trajectory_log(std::ostream& out, const MissionReport& report) {
  out << "t,drone,x,y,phase,energy_J,min_dist_m\n";
  for (const auto& tick : report.ticks) {
    for (std::size_t i = 0; i < tick.drones.size(); ++i) {
      const auto& d = tick.drones[i];
      out << format_double(tick.t) << ',' << i << ',' << format_double(d.pos.x) << ','
          << format_double(d.pos.y) << ',' << to_string(d.phase) << ',' << format_double(d.energy)
          << ',';
      const double md = std::min(d.min_dist_drone, d.min_dist_wall);
      if (std::isfinite(md)) out << format_double(md);
      out << '\n';
    }
  }
}

std::string report_summary_json(const MissionReport& report, const Metrics& metrics) {
  nlohmann::ordered_json j;
  j["complete"] = report.complete;
  j["end_time_s"] = report.end_time;
  j["energy_J"] = report.energy;
  j["drone_energy_J"] = report.drone_energy;
  j["total_distance_m"] = report.total_distance;
  j["risk_distance_m"] = report.risk_distance;
  j["risk_ratio"] = metrics.risk_ratio;
  j["mismatch_rss"] = metrics.mismatch_rss;
  j["sensed_s"] = report.sensed;
  j["sub_dmin_events"] = metrics.sub_dmin_events;
  nlohmann::ordered_json counts;
  for (const auto& [k, v] : metrics.collision_counts) counts[to_string(k)] = v;
  j["collision_counts"] = counts;
  nlohmann::ordered_json pmd = nlohmann::ordered_json::array();
  for (const auto& row : report.pair_min_distance) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (double d : row) r.push_back(std::isfinite(d) ? nlohmann::ordered_json(d) : nlohmann::ordered_json());
    pmd.push_back(r);
  }
  j["pair_min_distance_m"] = pmd;
  return j.dump(2) + "\n";
}

std::string timed_paths_json(const std::vector<TimedPath>& paths) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& p : paths) {
    nlohmann::ordered_json jp;
    jp["drone"] = p.drone_id;
    jp["home"] = {p.home.x, p.home.y};
    jp["legs"] = nlohmann::ordered_json::array();
    for (const auto& l : p.legs)
      jp["legs"].push_back({{"from", {l.from.x, l.from.y}},
                            {"to", {l.to.x, l.to.y}},
                            {"depart", l.depart},
                            {"arrive", l.arrive},
                            {"dest_cell", l.dest_cell}});
    jp["hovers"] = nlohmann::ordered_json::array();
    for (const auto& h : p.hovers)
      jp["hovers"].push_back({{"cell", h.cell}, {"start", h.start}, {"end", h.end}});
    arr.push_back(jp);
  }
  return arr.dump(2) + "\n";
}

std::vector<TimedPath> timed_paths_from_json(const std::string& text) {
  std::vector<TimedPath> out;
  try {
    const auto arr = nlohmann::json::parse(text);
    for (const auto& jp : arr) {
      TimedPath p;
      p.drone_id = jp.at("drone").get<int>();
      p.home = {jp.at("home").at(0).get<double>(), jp.at("home").at(1).get<double>()};
      for (const auto& jl : jp.at("legs"))
        p.legs.push_back({{jl.at("from").at(0).get<double>(), jl.at("from").at(1).get<double>()},
                          {jl.at("to").at(0).get<double>(), jl.at("to").at(1).get<double>()},
                          jl.at("depart").get<double>(),
                          jl.at("arrive").get<double>(),
                          jl.at("dest_cell").get<int>()});
      for (const auto& jh : jp.at("hovers"))
        p.hovers.push_back({jh.at("cell").get<int>(), jh.at("start").get<double>(), jh.at("end").get<double>()});
      out.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad timed path document: ") + e.what());
  }
  return out;
}

void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "method,seed,energy_J,risk_ratio,mismatch_rss,cross,parallel,dest_occupied,status\n";
  for (const auto& r : rows)
    out << r.method << ',' << r.seed << ',' << format_double(r.energy_j) << ','
        << format_double(r.risk_ratio) << ',' << format_double(r.mismatch_rss) << ',' << r.cross
        << ',' << r.parallel << ',' << r.dest_occupied << ',' << r.status << '\n';
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  const auto t = CsvTable::read(path, {"method", "seed", "energy_J", "risk_ratio", "mismatch_rss",
                                       "cross", "parallel", "dest_occupied", "status"});
  std::vector<ResultRow> out;
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    ResultRow row;
    row.method = t.text(r, 0);
    row.seed = static_cast<std::uint64_t>(t.integer(r, 1));
    row.energy_j = t.number(r, 2);
    row.risk_ratio = t.number(r, 3);
    row.mismatch_rss = t.number(r, 4);
    row.cross = static_cast<int>(t.integer(r, 5));
    row.parallel = static_cast<int>(t.integer(r, 6));
    row.dest_occupied = static_cast<int>(t.integer(r, 7));
    row.status = t.text(r, 8);
    out.push_back(std::move(row));
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

}  // namespace mset::io
