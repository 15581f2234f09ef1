#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "mset/env.hpp"
#include "mset/errors.hpp"
#include "mset/rng.hpp"

using namespace mset;
using doctest::Approx;

TEST_CASE("2x3 grid dimensions") {
  const auto env = build_grid(2, 3, 0.55, 0.47, 0.50, 4);
  CHECK(env.cell_count() == 6);
  CHECK(env.width() == Approx(1.65));
  CHECK(env.height() == Approx(0.94));
  CHECK(env.walls().size() == 4);
  CHECK(env.home_pads().size() == 4);
}

TEST_CASE("cell centers") {
  const auto env = default_grid();
  CHECK(cell_center(env, 0).x == Approx(0.275));
  CHECK(cell_center(env, 0).y == Approx(0.235));
  CHECK(cell_center(env, 5).x == Approx(1.375));
  CHECK(cell_center(env, 5).y == Approx(0.705));
  CHECK_THROWS_AS(env.cell_center(6), std::out_of_range);
  CHECK_THROWS_AS(env.cell_center(-1), std::out_of_range);

  const auto single = build_grid(1, 1, 1.0, 1.0, 0.5, 1);
  CHECK(single.cell_count() == 1);
  CHECK(single.home_pads().size() == 1);
  CHECK(single.cell_center(0).x == Approx(0.5));
  CHECK(single.cell_center(0).y == Approx(0.5));
}

TEST_CASE("cell centers lie inside their cells") {
  const auto env = build_grid(3, 4, 0.3, 0.7, 0.5, 2);
  for (int c = 0; c < env.cell_count(); ++c) {
    CHECK(env.cell_rect(c).contains(env.cell_center(c)));
    CHECK(env.cell_at(env.cell_center(c)) == c);
  }
  CHECK_FALSE(env.cell_at({-0.1, 0.1}).has_value());
  CHECK(env.cell_at({env.width(), env.height()}) == env.cell_count() - 1);
}

TEST_CASE("home pads sit outside the lattice and inside the walls") {
  for (int n : {1, 2, 4, 7}) {
    const auto env = default_grid(n);
    const Rect b = env.bounds();
    for (const auto& pad : env.home_pads()) {
      CHECK_FALSE(env.cell_at(pad).has_value());
      CHECK(pad.y == Approx(-0.30));
      CHECK(b.contains(pad));
    }
  }
}

TEST_CASE("invalid geometry") {
  CHECK_THROWS_AS(build_grid(0, 3, 0.5, 0.5, 0.5, 1), InvalidGeometry);
  CHECK_THROWS_AS(build_grid(2, 3, 0.0, 0.5, 0.5, 1), InvalidGeometry);
  CHECK_THROWS_AS(build_grid(2, 3, 0.5, -1.0, 0.5, 1), InvalidGeometry);
  CHECK_THROWS_AS(build_grid(2, 3, 0.5, 0.5, 0.5, 0), InvalidGeometry);
}

TEST_CASE("ingest: one stationary vehicle") {
  const auto env = default_grid();
  // Cell 2 is row 0, col 2.
  std::vector<TrajectoryRecord> recs{{"a", 1.0, 0.85, 0.2}, {"a", 2.0, 0.86, 0.21}};
  const auto r = ingest_trajectories(recs, env, 0.0, 10.0);
  CHECK(r.requirement.values == std::vector<double>{0, 0, 1, 0, 0, 0});
  CHECK_FALSE(r.empty_warning);
}

TEST_CASE("ingest: crossing vehicle counts in every cell it visits") {
  const auto env = default_grid();
  std::vector<TrajectoryRecord> recs{
      {"a", 0.0, 0.10, 0.2}, {"a", 1.0, 0.50, 0.2},  // cells 0 then 1
      {"b", 0.5, 0.45, 0.3},                         // cell 1
  };
  const auto r = ingest_trajectories(recs, env, 0.0, 5.0);
  CHECK(r.requirement.values == std::vector<double>{1, 2, 0, 0, 0, 0});
}

TEST_CASE("ingest: empty input and rejected records") {
  const auto env = default_grid();
  const auto r = ingest_trajectories({}, env, 0.0, 1.0);
  CHECK(r.empty_warning);
  CHECK(r.requirement.values == std::vector<double>(6, 0.0));
  CHECK_FALSE(r.requirement.runnable());

  std::vector<TrajectoryRecord> recs{{"a", 0.0, 1.5, 0.2}, {"b", -1.0, 0.5, 0.5}, {"c", 0.0, 0.5, 0.5}};
  const auto r2 = ingest_trajectories(recs, env, 0.0, 1.0);
  CHECK(r2.rejected == 2);
  CHECK(r2.used == 1);

  CHECK_THROWS_AS(ingest_trajectories(recs, env, 1.0, 1.0), InvalidGeometry);
}

TEST_CASE("ingest: window excludes out-of-window records") {
  const auto env = default_grid();
  std::vector<TrajectoryRecord> recs{{"a", 5.0, 0.1, 0.1}, {"b", 50.0, 0.1, 0.1}};
  CHECK(ingest_trajectories(recs, env, 0.0, 10.0).requirement.values[0] == 1.0);
}

TEST_CASE("ingest is permutation invariant and bounded below by distinct vehicles") {
  const auto env = default_grid();
  Rng rng(42);
  std::vector<TrajectoryRecord> recs;
  for (int i = 0; i < 300; ++i)
    recs.push_back({std::to_string(rng.uniform_int(0, 39)), rng.uniform(0, 10), rng.uniform(), rng.uniform()});
  const auto a = ingest_trajectories(recs, env, 0.0, 10.0).requirement.values;
  rng.shuffle(recs.begin(), recs.end());
  const auto b = ingest_trajectories(recs, env, 0.0, 10.0).requirement.values;
  CHECK(a == b);
  std::vector<std::string> ids;
  for (const auto& r : recs) ids.push_back(r.vehicle_id);
  std::sort(ids.begin(), ids.end());
  const auto distinct = std::unique(ids.begin(), ids.end()) - ids.begin();
  double total = 0;
  for (double v : a) total += v;
  CHECK(total >= static_cast<double>(distinct));
}
