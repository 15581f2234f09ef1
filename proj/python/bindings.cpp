#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mset/config.hpp"
#include "mset/energy.hpp"
#include "mset/env.hpp"
#include "mset/epos.hpp"
#include "mset/errors.hpp"
#include "mset/io.hpp"
#include "mset/pfield.hpp"
#include "mset/pipeline.hpp"
#include "mset/plangen.hpp"
#include "mset/sched.hpp"
#include "mset/sim.hpp"

namespace py = pybind11;
using namespace mset;

namespace {

py::tuple xy(const Vec2& v) { return py::make_tuple(v.x, v.y); }
Vec2 vec(const std::pair<double, double>& p) { return {p.first, p.second}; }

py::dict metrics_dict(const Metrics& m) {
  py::dict d;
  d["energy_J"] = m.energy_j;
  d["risk_ratio"] = m.risk_ratio;
  d["mismatch_rss"] = m.mismatch_rss;
  d["cross"] = m.count(CollisionKind::kCross);
  d["parallel"] = m.count(CollisionKind::kParallel);
  d["dest_occupied"] = m.count(CollisionKind::kDestinationOccupied);
  d["sub_dmin_events"] = m.sub_dmin_events;
  d["complete"] = m.complete;
  return d;
}

py::dict row_dict(const io::ResultRow& r) {
  py::dict d;
  d["method"] = r.method;
  d["seed"] = r.seed;
  d["energy_J"] = r.energy_j;
  d["risk_ratio"] = r.risk_ratio;
  d["mismatch_rss"] = r.mismatch_rss;
  d["cross"] = r.cross;
  d["parallel"] = r.parallel;
  d["dest_occupied"] = r.dest_occupied;
  d["status"] = r.status;
  return d;
}

Method parse_method(const std::string& name) {
  auto m = method_from_string(name);
  if (!m) throw InvalidSpec("unknown method '" + name + "'");
  return *m;
}

}  // namespace

PYBIND11_MODULE(_mset_core, m) {
  m.doc() = "Multi-drone sensing simulator core";

  auto base = py::register_exception<Error>(m, "MsetError", PyExc_RuntimeError);
  py::register_exception<InvalidGeometry>(m, "InvalidGeometry", base.ptr());
  py::register_exception<InvalidSpec>(m, "InvalidSpec", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<InvalidPriority>(m, "InvalidPriority", base.ptr());
  py::register_exception<EmptyPopulation>(m, "EmptyPopulation", base.ptr());
  py::register_exception<BatteryInfeasible>(m, "BatteryInfeasible", base.ptr());
  py::register_exception<CoincidentPositions>(m, "CoincidentPositions", base.ptr());
  py::register_exception<UnresolvedSchedule>(m, "UnresolvedSchedule", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());

  py::class_<GridEnvironment>(m, "Grid")
      .def(py::init([](int rows, int cols, double cw, double ch, double altitude, int n_drones) {
             return build_grid(rows, cols, cw, ch, altitude, n_drones);
           }),
           py::arg("rows"), py::arg("cols"), py::arg("cell_width"), py::arg("cell_height"),
           py::arg("altitude") = 0.5, py::arg("n_drones") = 4)
      .def_property_readonly("rows", &GridEnvironment::rows)
      .def_property_readonly("cols", &GridEnvironment::cols)
      .def_property_readonly("cell_count", &GridEnvironment::cell_count)
      .def_property_readonly("wall_margin", &GridEnvironment::wall_margin)
      .def("cell_center", [](const GridEnvironment& e, int c) { return xy(e.cell_center(c)); })
      .def("home", [](const GridEnvironment& e, int d) { return xy(e.home(d)); })
      .def("cell_at", [](const GridEnvironment& e, double x, double y) { return e.cell_at({x, y}); });
  m.def("default_grid", &default_grid, py::arg("n_drones") = 4);

  py::class_<DroneSpec>(m, "DroneSpec")
      .def(py::init<>())
      .def_readwrite("mass_kg", &DroneSpec::mass_kg)
      .def_readwrite("battery_capacity_mah", &DroneSpec::battery_capacity_mah)
      .def_readwrite("battery_voltage_v", &DroneSpec::battery_voltage_v)
      .def_readwrite("cruise_speed_mps", &DroneSpec::cruise_speed_mps)
      .def_readwrite("expected_flight_time_s", &DroneSpec::expected_flight_time_s)
      .def_readwrite("travel_power_factor", &DroneSpec::travel_power_factor)
      .def_property_readonly("battery_energy", &DroneSpec::battery_energy);
  m.def("nominal_power", &nominal_power, py::arg("spec") = DroneSpec{});

  py::class_<Plan>(m, "Plan")
      .def(py::init<>())
      .def_readwrite("hover", &Plan::hover)
      .def_readwrite("route", &Plan::route)
      .def_readwrite("cost", &Plan::cost);
  py::class_<AgentPlanSet>(m, "AgentPlanSet")
      .def_readonly("agent_id", &AgentPlanSet::agent_id)
      .def_readonly("plans", &AgentPlanSet::plans)
      .def_property_readonly("home", [](const AgentPlanSet& s) { return xy(s.home); });

  m.def(
      "plan_cost",
      [](const Plan& p, const GridEnvironment& env, int drone, const DroneSpec& spec) {
        return plan_cost(p, env, spec, env.home(drone));
      },
      py::arg("plan"), py::arg("env"), py::arg("drone") = 0, py::arg("spec") = DroneSpec{});

  m.def(
      "ingest",
      [](const std::vector<std::tuple<std::string, double, double, double>>& records,
         const GridEnvironment& env, double t0, double t1) {
        std::vector<TrajectoryRecord> recs;
        for (const auto& [id, t, x, y] : records) recs.push_back({id, t, x, y});
        const auto r = ingest_trajectories(recs, env, t0, t1);
        return py::make_tuple(r.requirement.values, r.used, r.rejected);
      },
      py::arg("records"), py::arg("env"), py::arg("t0"), py::arg("t1"),
      "Bins (vehicle_id, t, x, y) records; returns (requirement, used, rejected).");

  m.def(
      "generate_plans",
      [](const GridEnvironment& env, const std::vector<double>& requirement, int n_agents,
         std::uint64_t seed, int k, const DroneSpec& spec) {
        PlanGenOptions opt;
        opt.k = k;
        return generate_all_plans(env, spec, {requirement}, opt, n_agents, seed);
      },
      py::arg("env"), py::arg("requirement"), py::arg("n_agents"), py::arg("seed"), py::arg("k") = 16,
      py::arg("spec") = DroneSpec{});

  m.def(
      "rss", [](const std::vector<double>& a, const std::vector<double>& b) { return rss(a, b); });

  py::class_<Selection>(m, "Selection")
      .def_readonly("chosen", &Selection::chosen)
      .def_readonly("aggregate", &Selection::aggregate)
      .def_readonly("rss", &Selection::rss)
      .def_readonly("trace", &Selection::trace);
  m.def(
      "optimize",
      [](const std::vector<AgentPlanSet>& sets, const std::vector<double>& requirement, int iterations,
         std::uint64_t seed) {
        Rng rng(seed, Stream::kTree);
        return optimize(sets, {requirement}, iterations, rng);
      },
      py::arg("plan_sets"), py::arg("requirement"), py::arg("iterations") = 40, py::arg("seed") = 1);
  m.def(
      "brute_force",
      [](const std::vector<AgentPlanSet>& sets, const std::vector<double>& requirement) {
        return brute_force(sets, {requirement});
      });
  m.def(
      "greedy_select",
      [](const std::vector<AgentPlanSet>& sets, const std::vector<double>& requirement) {
        return greedy_select(sets, {requirement});
      });

  m.def("repulsion_radius", &repulsion_radius, py::arg("priority"), py::arg("d_min") = kDefaultDMin);
  m.def("scale_factor", &scale_factor, py::arg("delta"), py::arg("attr_mag"), py::arg("priority"));
  m.def(
      "field_vector",
      [](std::pair<double, double> pos, std::optional<std::pair<double, double>> dest,
         const std::vector<std::pair<double, double>>& others, const std::vector<double>& priorities,
         double wall_priority, double prev_attr_mag) {
        FieldAgent me{0, vec(pos), dest ? std::optional<Vec2>(vec(*dest)) : std::nullopt, prev_attr_mag};
        std::vector<FieldAgent> agents;
        PriorityAssignment pr{{1.0}, wall_priority};
        for (std::size_t i = 0; i < others.size(); ++i) {
          agents.push_back({static_cast<int>(i + 1), vec(others[i]), std::nullopt, 1.0});
          pr.priority.push_back(priorities.at(i));
        }
        const auto r = total_vector(me, agents, {}, FieldParams{}, pr, {});
        return xy(r.total);
      },
      py::arg("pos"), py::arg("dest"), py::arg("others"), py::arg("priorities"),
      py::arg("wall_priority") = 10.0, py::arg("prev_attr_mag") = 1.0,
      "Field vector at `pos` for drone 0 with default parameters and no walls.");

  m.def(
      "detect_collisions",
      [](const GridEnvironment& env, const std::vector<AgentPlanSet>& sets, const std::vector<int>& chosen) {
        std::vector<TimedPath> paths;
        for (std::size_t a = 0; a < sets.size(); ++a)
          paths.push_back(build_timed_path(static_cast<int>(a), sets[a].plans.at(static_cast<std::size_t>(chosen[a])),
                                           env, DroneSpec{}));
        py::list out;
        for (const auto& e : detect_collisions(paths, FieldParams{})) {
          py::dict d;
          d["kind"] = to_string(e.kind);
          d["drone_a"] = e.drone_a;
          d["drone_b"] = e.drone_b;
          d["time"] = e.time;
          d["location"] = xy(e.location);
          out.append(d);
        }
        return out;
      },
      py::arg("env"), py::arg("plan_sets"), py::arg("chosen"));

  py::class_<ScenarioConfig>(m, "Config")
      .def_readonly("n_drones", &ScenarioConfig::n_drones)
      .def_property_readonly("requirement", [](const ScenarioConfig& c) { return c.requirement.values; })
      .def_property_readonly("seeds", [](const ScenarioConfig& c) { return c.seeds; })
      .def_property_readonly("methods", [](const ScenarioConfig& c) {
        std::vector<std::string> out;
        for (Method x : c.methods) out.push_back(to_string(x));
        return out;
      });
  m.def("load_config", &load_config, py::arg("path"));

  m.def(
      "run_cell",
      [](const ScenarioConfig& cfg, const std::string& method, std::uint64_t seed) {
        CellResult r;
        {
          py::gil_scoped_release release;
          r = run_cell(cfg, parse_method(method), seed);
        }
        py::dict d = metrics_dict(r.metrics);
        d["status"] = r.status;
        d["chosen"] = r.selection.chosen;
        d["end_time_s"] = r.report.end_time;
        return d;
      },
      py::arg("config"), py::arg("method"), py::arg("seed"));

  m.def(
      "run_batch",
      [](const ScenarioConfig& cfg, const std::filesystem::path& out, int jobs, bool write_run_logs) {
        BatchOutcome o;
        {
          py::gil_scoped_release release;
          BatchOptions opt;
          opt.jobs = jobs;
          opt.write_run_logs = write_run_logs;
          o = run_batch(cfg, out, opt);
        }
        py::list rows;
        for (const auto& r : o.rows) rows.append(row_dict(r));
        return rows;
      },
      py::arg("config"), py::arg("out"), py::arg("jobs") = 1, py::arg("write_run_logs") = false);
}
