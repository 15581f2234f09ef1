#pragma once

#include <string>
#include <vector>

#include "mset/env.hpp"
#include "mset/metrics.hpp"
#include "mset/pfield.hpp"

namespace mset::svg {

struct Bar {
  std::string label;
  double mean = 0.0;
  double err = 0.0;
};

struct Series {
  std::string name;
  std::vector<Bar> bars;
};

/// Grouped bar chart with error whiskers. One group per bar label; one
/// colour per series.
std::string bar_chart(const std::string& title, const std::string& y_label,
                      const std::vector<Series>& series);

struct Panel {
  std::string file;
  std::string svg;
};

// energy.svg, risk.svg, collisions.svg, mismatch.svg
std::vector<Panel> figure_panels(const std::vector<MethodSummary>& summary);

/// Quiver plot of the combined field felt by `drone` on a regular lattice.
std::string field_quiver(const GridEnvironment& env, const FieldAgent& drone,
                         const std::vector<FieldAgent>& others, const FieldParams& params,
                         const PriorityAssignment& priorities, double spacing = 0.05);

std::string escape(const std::string& text);

}  // namespace mset::svg
