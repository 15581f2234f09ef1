#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mset/config.hpp"
#include "mset/errors.hpp"
#include "mset/io.hpp"

using namespace mset;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mset_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("format_double round trips") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(3.0) == "3");
  const double v = 7.928571428571429;
  CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("csv header and field count errors carry line numbers") {
  std::istringstream bad_header("a,c\n1,2\n");
  CHECK_THROWS_WITH_AS(io::CsvTable::parse(bad_header, {"a", "b"}, "x.csv"),
                       doctest::Contains("x.csv:1"), DataError);
  std::istringstream short_row("a,b\n1,2\n\n3\n");
  CHECK_THROWS_WITH_AS(io::CsvTable::parse(short_row, {"a", "b"}, "y.csv"),
                       doctest::Contains("y.csv:4"), DataError);
  std::istringstream ok("a, b\r\n1 ,2\r\n");
  const auto t = io::CsvTable::parse(ok, {"a", "b"}, "z");
  CHECK(t.number(0, 0) == 1.0);
  std::istringstream nan("a,b\n1,x\n");
  const auto tn = io::CsvTable::parse(nan, {"a", "b"}, "w");
  CHECK_THROWS_AS(tn.number(0, 1), DataError);
  std::istringstream empty("");
  CHECK_THROWS_AS(io::CsvTable::parse(empty, {"a"}, "e"), DataError);
}

TEST_CASE("trajectory and requirement round trip") {
  std::vector<TrajectoryRecord> recs{{"car1", 0.5, 0.25, 0.75}, {"car2", 1.0, 0.1, 0.2}};
  const auto tp = scratch("traj.csv");
  {
    std::ofstream out(tp);
    io::write_trajectories(out, recs);
  }
  const auto back = io::read_trajectories(tp);
  REQUIRE(back.size() == 2);
  CHECK(back[0].vehicle_id == "car1");
  CHECK(back[1].y == 0.2);

  SensingRequirement req{{0, 1.5, 3}};
  const auto rp = scratch("req.csv");
  {
    std::ofstream out(rp);
    io::write_requirement(out, req);
  }
  CHECK(io::read_requirement(rp).values == req.values);
  write_file(rp, "cell,value\n0,1\n0,2\n");
  CHECK_THROWS_AS(io::read_requirement(rp), DataError);
  write_file(rp, "cell,value\n0,-1\n");
  CHECK_THROWS_AS(io::read_requirement(rp), DataError);
}

TEST_CASE("plan set and selection round trip") {
  AgentPlanSet set;
  set.agent_id = 2;
  set.home = {1, -0.3};
  Plan p;
  p.hover = {0, 12.5, 0, 3};
  p.route = {3, 1};
  p.cost = 321.5;
  set.plans = {p, p};
  set.plans[1].route = {1, 3};
  const auto path = scratch("plans.csv");
  {
    std::ofstream out(path);
    io::write_plan_set(out, set);
  }
  const auto back = io::read_plan_set(path, 2, 4, set.home);
  CHECK(back.plans == set.plans);

  write_file(path, "plan,cell,hover_s,cost_J\n1,0,1,1\n");
  CHECK_THROWS_AS(io::read_plan_set(path, 0, 4, {}), DataError);
  write_file(path, "plan,cell,hover_s,cost_J\n0,7,1,1\n");
  CHECK_THROWS_AS(io::read_plan_set(path, 0, 4, {}), DataError);

  Selection sel;
  sel.chosen = {3, 0, 15};
  const auto sp = scratch("sel.csv");
  {
    std::ofstream out(sp);
    io::write_selection(out, sel);
  }
  CHECK(io::read_selection(sp) == sel.chosen);
}

TEST_CASE("timed paths survive json") {
  TimedPath p;
  p.drone_id = 1;
  p.home = {0.5, -0.3};
  p.legs.push_back({{0.5, -0.3}, {0.275, 0.235}, 0.0, 5.8, 0});
  p.legs.push_back({{0.275, 0.235}, {0.5, -0.3}, 15.8, 21.6, -1});
  p.hovers.push_back({0, 5.8, 15.8});
  const auto back = io::timed_paths_from_json(io::timed_paths_json({p}));
  REQUIRE(back.size() == 1);
  CHECK(back[0].legs.size() == 2);
  CHECK(back[0].legs[0].to == p.legs[0].to);
  CHECK(back[0].legs[1].depart == 15.8);
  CHECK(back[0].hovers[0].end == 15.8);
  CHECK_THROWS_AS(io::timed_paths_from_json("[{\"drone\": 1}]"), DataError);
}

TEST_CASE("results round trip") {
  io::ResultRow r{"EPOS-PF", 7, 1234.5, 0.125, 0.01, 1, 0, 3, "ok"};
  const auto path = scratch("results.csv");
  {
    std::ofstream out(path);
    io::write_results(out, {r});
  }
  const auto back = io::read_results(path);
  REQUIRE(back.size() == 1);
  CHECK(back[0].method == "EPOS-PF");
  CHECK(back[0].seed == 7);
  CHECK(back[0].energy_j == 1234.5);
  CHECK(back[0].dest_occupied == 3);
  CHECK(back[0].status == "ok");
}

TEST_CASE("config loading") {
  const auto dir = scratch("cfg");
  fs::create_directories(dir);
  write_file(dir / "req.csv", "cell,value\n0,1\n1,2\n");
  write_file(dir / "c.json", R"({"schema_version": 1,
    "grid": {"rows": 1, "cols": 2, "cell_width": 0.5, "cell_height": 0.5},
    "n_drones": 2, "requirement": {"csv": "req.csv"},
    "methods": ["EPOS", "Greedy-PF"], "seeds": [3, 4], "output_dir": "o",
    "field": {"direction": "track"}})");
  const auto cfg = load_config(dir / "c.json");
  CHECK(cfg.requirement.values == std::vector<double>{1, 2});
  CHECK(cfg.methods == std::vector<Method>{Method::kEpos, Method::kGreedyPf});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(cfg.output_dir == dir / "o");
  CHECK(cfg.field.direction == RepulsionDirection::kTrack);

  const auto again = config_from_json(nlohmann::json::parse(config_to_json(cfg).dump()), dir);
  CHECK(again.requirement.values == cfg.requirement.values);
  CHECK(again.methods == cfg.methods);
  CHECK(again.env().home(1) == cfg.env().home(1));

  write_file(dir / "bad.json", R"({"schema_version": 2, "requirement": {"values": [1]}})");
  CHECK_THROWS_AS(load_config(dir / "bad.json"), DataError);
  write_file(dir / "bad.json", R"({"schema_version": 1, "requirement": {"values": [1, 2, 3]}})");
  CHECK_THROWS_AS(load_config(dir / "bad.json"), DataError);
  write_file(dir / "bad.json", R"({"schema_version": 1, "requirement": {"values": [1,1,1,1,1,1]}, "methods": ["X"]})");
  CHECK_THROWS_AS(load_config(dir / "bad.json"), DataError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), DataError);
}
