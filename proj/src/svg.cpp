#include "mset/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mset::svg {

namespace {

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  if (v != 0.0 && (std::abs(v) < 0.01 || std::abs(v) >= 1e5))
    std::snprintf(buf, sizeof buf, "%.2g", v);
  else
    std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Rounds a raw step up to 1, 2 or 5 times a power of ten.
double nice_step(double raw) {
  if (raw <= 0.0) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0, 10.0})
    if (raw <= f * mag) return f * mag;
  return 10.0 * mag;
}

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string bar_chart(const std::string& title, const std::string& y_label,
                      const std::vector<Series>& series) {
  const double width = 640, height = 400;
  const double left = 70, right = 20, top = 40, bottom = 70;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  std::vector<std::string> groups;
  double hi = 0.0;
  for (const auto& s : series) {
    for (const auto& b : s.bars) {
      if (std::find(groups.begin(), groups.end(), b.label) == groups.end()) groups.push_back(b.label);
      hi = std::max(hi, b.mean + std::max(0.0, b.err));
    }
  }
  const double step = nice_step(hi > 0.0 ? hi / 5.0 : 0.2);
  const double y_max = std::max(step, std::ceil(hi / step) * step);
  auto y_of = [&](double v) { return top + plot_h * (1.0 - v / y_max); };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
    << "</text>\n";

  for (double v = 0.0; v <= y_max + step * 1e-9; v += step) {
    const double y = y_of(v);
    o << "<line x1=\"" << left << "\" y1=\"" << num(y) << "\" x2=\"" << left + plot_w << "\" y2=\""
      << num(y) << "\" stroke=\"#ddd\"/>\n"
      << "<text x=\"" << left - 6 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << tick_label(v)
      << "</text>\n";
  }
  o << "<text transform=\"translate(16," << num(top + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(y_label) << "</text>\n";

  const double group_w = groups.empty() ? plot_w : plot_w / static_cast<double>(groups.size());
  const double n_series = static_cast<double>(std::max<std::size_t>(1, series.size()));
  const double bar_w = group_w * 0.7 / n_series;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double gx = left + group_w * static_cast<double>(g);
    o << "<text x=\"" << num(gx + group_w / 2) << "\" y=\"" << num(top + plot_h + 18)
      << "\" text-anchor=\"middle\">" << escape(groups[g]) << "</text>\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
      const auto& bars = series[si].bars;
      auto it = std::find_if(bars.begin(), bars.end(), [&](const Bar& b) { return b.label == groups[g]; });
      if (it == bars.end()) continue;
      const double x = gx + group_w * 0.15 + bar_w * static_cast<double>(si);
      const double y = y_of(std::max(0.0, it->mean));
      const char* colour = kPalette[si % std::size(kPalette)];
      o << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(bar_w) << "\" height=\""
        << num(top + plot_h - y) << "\" fill=\"" << colour << "\"><title>" << escape(series[si].name) << ' '
        << escape(it->label) << ": " << tick_label(it->mean) << " &#177; " << tick_label(it->err)
        << "</title></rect>\n";
      if (it->err > 0.0) {
        const double cx = x + bar_w / 2;
        const double y0 = y_of(std::max(0.0, it->mean - it->err));
        const double y1 = y_of(it->mean + it->err);
        o << "<path d=\"M" << num(cx) << ' ' << num(y0) << "V" << num(y1) << "M" << num(cx - 4) << ' '
          << num(y0) << "h8M" << num(cx - 4) << ' ' << num(y1) << "h8\" stroke=\"black\" fill=\"none\"/>\n";
      }
    }
  }
  o << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
    << top + plot_h << "\" stroke=\"black\"/>\n";

  if (series.size() > 1) {
    double lx = left;
    for (std::size_t si = 0; si < series.size(); ++si) {
      o << "<rect x=\"" << num(lx) << "\" y=\"" << height - 26 << "\" width=\"12\" height=\"12\" fill=\""
        << kPalette[si % std::size(kPalette)] << "\"/>\n"
        << "<text x=\"" << num(lx + 16) << "\" y=\"" << height - 16 << "\">" << escape(series[si].name)
        << "</text>\n";
      lx += 24 + 8.0 * static_cast<double>(series[si].name.size());
    }
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<Panel> figure_panels(const std::vector<MethodSummary>& summary) {
  auto single = [&](const std::string& name, auto field) {
    Series s{name, {}};
    for (const auto& m : summary) s.bars.push_back({m.method, (m.*field).mean, (m.*field).stderr_});
    return std::vector<Series>{s};
  };
  std::vector<Series> kinds{{"cross", {}}, {"parallel", {}}, {"destination occupied", {}}};
  for (const auto& m : summary) {
    kinds[0].bars.push_back({m.method, m.cross.mean, m.cross.stderr_});
    kinds[1].bars.push_back({m.method, m.parallel.mean, m.parallel.stderr_});
    kinds[2].bars.push_back({m.method, m.dest_occupied.mean, m.dest_occupied.stderr_});
  }
  return {
      {"energy.svg", bar_chart("Energy consumption", "energy (J)", single("energy", &MethodSummary::energy_j))},
      {"risk.svg", bar_chart("Risk of collisions", "d_r / d", single("risk", &MethodSummary::risk_ratio))},
      {"collisions.svg", bar_chart("Detected conflicts by type", "count per run", kinds)},
      {"mismatch.svg",
       bar_chart("Sensing mismatch", "RSS", single("mismatch", &MethodSummary::mismatch_rss))},
  };
}

std::string field_quiver(const GridEnvironment& env, const FieldAgent& drone,
                         const std::vector<FieldAgent>& others, const FieldParams& params,
                         const PriorityAssignment& priorities, double spacing) {
  const Rect area = env.bounds();
  const auto samples = field_lattice(area, spacing, drone, others, env.walls(), params, priorities);
  const double scale = 400.0 / std::max(area.width(), area.height());
  const double w = area.width() * scale, h = area.height() * scale;
  auto sx = [&](double x) { return (x - area.min.x) * scale; };
  auto sy = [&](double y) { return h - (y - area.min.y) * scale; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
    << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\" stroke=\"black\"/>\n";
  const Rect lat = env.lattice();
  o << "<rect x=\"" << num(sx(lat.min.x)) << "\" y=\"" << num(sy(lat.max.y)) << "\" width=\""
    << num(lat.width() * scale) << "\" height=\"" << num(lat.height() * scale)
    << "\" fill=\"#f4f4f4\" stroke=\"#999\"/>\n";

  const double arrow = spacing * scale * 0.8;
  for (const auto& s : samples) {
    const double n = s.vector.norm();
    if (n == 0.0) continue;
    const Vec2 u = s.vector / n;
    const double x0 = sx(s.at.x), y0 = sy(s.at.y);
    o << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0 + u.x * arrow)
      << "\" y2=\"" << num(y0 - u.y * arrow) << "\" stroke=\"#4e79a7\" stroke-width=\"0.8\"/>\n";
  }
  for (const auto& other : others)
    o << "<circle cx=\"" << num(sx(other.pos.x)) << "\" cy=\"" << num(sy(other.pos.y))
      << "\" r=\"4\" fill=\"#e15759\"/>\n";
  if (drone.dest)
    o << "<circle cx=\"" << num(sx(drone.dest->x)) << "\" cy=\"" << num(sy(drone.dest->y))
      << "\" r=\"4\" fill=\"#59a14f\"/>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace mset::svg
