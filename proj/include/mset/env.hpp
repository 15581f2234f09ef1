#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mset/geometry.hpp"

namespace mset {

// Default minimum drone separation in meters; shared by the field and the
// arena layout so home pads clear the default wall repulsion radius.
inline constexpr double kDefaultDMin = 0.25;

struct GridOptions {
  // Width of the strip beside the lattice holding the home pads.
  double pad_margin = 0.30;
  // Distance from the lattice to the boundary walls. When unset it is sized
  // so a drone pushed off its pad stays clear of the repulsion radius of
  // walls whose priority is e^n_drones under the default minimum separation.
  std::optional<double> wall_margin;
  // Distance between neighbouring pads, centred under the lattice. When unset
  // it is just over the largest drone repulsion radius, n_drones * d_min.
  std::optional<double> pad_spacing;
};

/// Sensing arena: a rows x cols lattice of rectangular cells at a fixed
/// altitude, enclosed by four walls, with one home pad per drone on the
/// strip below row 0. Cells are indexed row-major: cell = row * cols + col,
/// with the origin at the lower-left corner of cell 0.
class GridEnvironment {
 public:
  GridEnvironment(int rows, int cols, double cell_width, double cell_height,
                  double altitude, int n_drones, GridOptions options = {});

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int cell_count() const { return rows_ * cols_; }
  double cell_width() const { return cell_width_; }
  double cell_height() const { return cell_height_; }
  double altitude() const { return altitude_; }
  double pad_margin() const { return pad_margin_; }
  double wall_margin() const { return wall_margin_; }

  // Extent of the cell lattice only.
  double width() const { return cols_ * cell_width_; }
  double height() const { return rows_ * cell_height_; }

  Rect lattice() const { return {{0.0, 0.0}, {width(), height()}}; }
  // Rectangle enclosed by the walls.
  Rect bounds() const;

  const std::vector<Segment>& walls() const { return walls_; }
  const std::vector<Vec2>& home_pads() const { return home_pads_; }
  Vec2 home(int drone) const;

  Vec2 cell_center(int cell) const;
  Rect cell_rect(int cell) const;
  /// Cell containing `p`, if any. Points on a shared edge go to the cell
  /// with the larger index along that axis, except on the outer boundary.
  std::optional<int> cell_at(const Vec2& p) const;

 private:
  int rows_;
  int cols_;
  double cell_width_;
  double cell_height_;
  double altitude_;
  double pad_margin_;
  double wall_margin_;
  std::vector<Segment> walls_;
  std::vector<Vec2> home_pads_;
};

GridEnvironment build_grid(int rows, int cols, double cell_w, double cell_h,
                           double altitude, int n_drones, GridOptions options = {});

// The 2x3 screen layout with 55 x 47 cm cells sensed from 50 cm.
GridEnvironment default_grid(int n_drones = 4);

Vec2 cell_center(const GridEnvironment& env, int cell);

struct SensingRequirement {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool runnable() const;
};

struct TrajectoryRecord {
  std::string vehicle_id;
  double t = 0.0;
  double x = 0.0;  // normalized [0, 1] across the lattice width
  double y = 0.0;  // normalized [0, 1] across the lattice height
};

struct IngestResult {
  SensingRequirement requirement;
  std::size_t rejected = 0;       // records with coordinates outside [0, 1] or t < 0
  std::size_t used = 0;           // records inside the time window
  bool empty_warning = false;     // no usable records at all
};

/// Counts, per cell, the distinct vehicles observed inside it at any record
/// time in [t0, t1]. A vehicle crossing several cells counts in each.
IngestResult ingest_trajectories(const std::vector<TrajectoryRecord>& records,
                                 const GridEnvironment& env, double t0, double t1);

}  // namespace mset
