#include "mset/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "mset/epos.hpp"

namespace mset {

Metrics compute_metrics(const MissionReport& report, const SensingRequirement& requirement,
                        const std::vector<CollisionEvent>& events) {
  Metrics out;
  out.energy_j = report.energy;
  out.risk_ratio = report.total_distance > 0.0 ? report.risk_distance / report.total_distance : 0.0;
  out.mismatch_rss = rss(report.sensed, requirement.values);
  for (CollisionKind k : {CollisionKind::kCross, CollisionKind::kParallel,
                          CollisionKind::kDestinationOccupied})
    out.collision_counts[k] = 0;
  for (const auto& e : events) ++out.collision_counts[e.kind];
  out.sub_dmin_events = static_cast<int>(report.proximity_events.size());
  out.complete = report.complete;
  return out;
}

SummaryStat summarize(std::vector<double> values) {
  // Sorted summation keeps the result independent of run order.
  std::sort(values.begin(), values.end());
  SummaryStat s;
  s.n = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    const double sd = std::sqrt(sq / static_cast<double>(s.n - 1));
    s.stderr_ = sd / std::sqrt(static_cast<double>(s.n));
  }
  return s;
}

std::vector<MethodSummary> aggregate(const std::vector<LabeledMetrics>& runs) {
  std::vector<std::string> order;
  for (const auto& r : runs)
    if (std::find(order.begin(), order.end(), r.method) == order.end()) order.push_back(r.method);
  // Canonical methods first in their usual order, anything else by name.
  auto rank = [](const std::string& name) {
    const auto m = method_from_string(name);
    return m ? static_cast<int>(*m) : 100;
  };
  std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    return std::pair(rank(a), a) < std::pair(rank(b), b);
  });
  std::vector<MethodSummary> out;
  for (const auto& method : order) {
    std::vector<double> e, risk, mis, cross, par, dest, sub;
    for (const auto& r : runs) {
      if (r.method != method) continue;
      e.push_back(r.metrics.energy_j);
      risk.push_back(r.metrics.risk_ratio);
      mis.push_back(r.metrics.mismatch_rss);
      cross.push_back(r.metrics.count(CollisionKind::kCross));
      par.push_back(r.metrics.count(CollisionKind::kParallel));
      dest.push_back(r.metrics.count(CollisionKind::kDestinationOccupied));
      sub.push_back(r.metrics.sub_dmin_events);
    }
    out.push_back({method, summarize(e), summarize(risk), summarize(mis), summarize(cross),
                   summarize(par), summarize(dest), summarize(sub)});
  }
  return out;
}

}  // namespace mset
