#include "mset/env.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "mset/errors.hpp"

namespace mset {

GridEnvironment::GridEnvironment(int rows, int cols, double cell_width, double cell_height,
                                 double altitude, int n_drones, GridOptions options)
    : rows_(rows),
      cols_(cols),
      cell_width_(cell_width),
      cell_height_(cell_height),
      altitude_(altitude),
      pad_margin_(options.pad_margin) {
  if (rows < 1 || cols < 1) throw InvalidGeometry("grid needs at least one row and column");
  if (!(cell_width > 0.0) || !(cell_height > 0.0))
    throw InvalidGeometry("cell dimensions must be positive");
  if (!(altitude > 0.0)) throw InvalidGeometry("altitude must be positive");
  if (n_drones < 1) throw InvalidGeometry("need at least one drone");
  if (!(pad_margin_ > 0.0)) throw InvalidGeometry("pad margin must be positive");

  const double spacing =
      options.pad_spacing.value_or(kDefaultDMin * static_cast<double>(n_drones) + 0.05);
  if (!(spacing > 0.0)) throw InvalidGeometry("pad spacing must be positive");
  home_pads_.reserve(static_cast<std::size_t>(n_drones));
  for (int i = 0; i < n_drones; ++i) {
    const double offset = (static_cast<double>(i) - 0.5 * static_cast<double>(n_drones - 1)) * spacing;
    home_pads_.push_back({0.5 * width() + offset, -pad_margin_});
  }
  const double overhang = std::max(pad_margin_, home_pads_.front().x <= 0.0 ? -home_pads_.front().x : 0.0);

  // A drone shoved off its pad by the strongest drone (radius n d_min) must
  // still clear the wall radius ((1 + n) d_min).
  wall_margin_ = options.wall_margin.value_or(
      overhang + kDefaultDMin * (2.0 * static_cast<double>(n_drones) + 1.0) + 0.05);
  if (!(wall_margin_ > overhang))
    throw InvalidGeometry("walls must lie outside the home pads");

  const Rect b = bounds();
  walls_ = {
      {{b.min.x, b.min.y}, {b.max.x, b.min.y}},
      {{b.max.x, b.min.y}, {b.max.x, b.max.y}},
      {{b.max.x, b.max.y}, {b.min.x, b.max.y}},
      {{b.min.x, b.max.y}, {b.min.x, b.min.y}},
  };
}

Rect GridEnvironment::bounds() const {
  return {{-wall_margin_, -wall_margin_}, {width() + wall_margin_, height() + wall_margin_}};
}

Vec2 GridEnvironment::home(int drone) const {
  if (drone < 0 || drone >= static_cast<int>(home_pads_.size()))
    throw std::out_of_range("drone index " + std::to_string(drone) + " has no home pad");
  return home_pads_[static_cast<std::size_t>(drone)];
}

Vec2 GridEnvironment::cell_center(int cell) const {
  if (cell < 0 || cell >= cell_count())
    throw std::out_of_range("cell index " + std::to_string(cell) + " out of range");
  const int row = cell / cols_;
  const int col = cell % cols_;
  return {(col + 0.5) * cell_width_, (row + 0.5) * cell_height_};
}

Rect GridEnvironment::cell_rect(int cell) const {
  if (cell < 0 || cell >= cell_count())
    throw std::out_of_range("cell index " + std::to_string(cell) + " out of range");
  const int row = cell / cols_;
  const int col = cell % cols_;
  return {{col * cell_width_, row * cell_height_},
          {(col + 1) * cell_width_, (row + 1) * cell_height_}};
}

std::optional<int> GridEnvironment::cell_at(const Vec2& p) const {
  if (!lattice().contains(p)) return std::nullopt;
  const int col = std::min(static_cast<int>(std::floor(p.x / cell_width_)), cols_ - 1);
  const int row = std::min(static_cast<int>(std::floor(p.y / cell_height_)), rows_ - 1);
  return row * cols_ + col;
}

GridEnvironment build_grid(int rows, int cols, double cell_w, double cell_h, double altitude,
                           int n_drones, GridOptions options) {
  return GridEnvironment(rows, cols, cell_w, cell_h, altitude, n_drones, options);
}

GridEnvironment default_grid(int n_drones) {
  return build_grid(2, 3, 0.55, 0.47, 0.50, n_drones);
}

Vec2 cell_center(const GridEnvironment& env, int cell) { return env.cell_center(cell); }

bool SensingRequirement::runnable() const {
  return std::any_of(values.begin(), values.end(), [](double v) { return v > 0.0; });
}

IngestResult ingest_trajectories(const std::vector<TrajectoryRecord>& records,
                                 const GridEnvironment& env, double t0, double t1) {
  if (!(t0 < t1)) throw InvalidGeometry("ingest window needs t0 < t1");

  const auto m = static_cast<std::size_t>(env.cell_count());
  IngestResult out;
  out.requirement.values.assign(m, 0.0);

  std::vector<std::set<std::string>> seen(m);
  for (const auto& r : records) {
    if (!(r.x >= 0.0 && r.x <= 1.0 && r.y >= 0.0 && r.y <= 1.0 && r.t >= 0.0)) {
      ++out.rejected;
      continue;
    }
    if (r.t < t0 || r.t > t1) continue;
    ++out.used;
    const Vec2 p{r.x * env.width(), r.y * env.height()};
    if (auto cell = env.cell_at(p)) seen[static_cast<std::size_t>(*cell)].insert(r.vehicle_id);
  }
  for (std::size_t c = 0; c < m; ++c) out.requirement.values[c] = static_cast<double>(seen[c].size());
  out.empty_warning = out.used == 0;
  return out;
}

}  // namespace mset
