#pragma once

#include <map>
#include <string>
#include <vector>

#include "mset/env.hpp"
#include "mset/sched.hpp"
#include "mset/sim.hpp"

namespace mset {

struct Metrics {
  double energy_j = 0.0;
  double risk_ratio = 0.0;
  double mismatch_rss = 0.0;
  std::map<CollisionKind, int> collision_counts;
  int sub_dmin_events = 0;
  // False when the mission hit the time cap; headline numbers are then partial.
  bool complete = true;

  int count(CollisionKind k) const {
    auto it = collision_counts.find(k);
    return it == collision_counts.end() ? 0 : it->second;
  }
};

Metrics compute_metrics(const MissionReport& report, const SensingRequirement& requirement,
                        const std::vector<CollisionEvent>& events);

struct SummaryStat {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

// Mean and standard error (sample standard deviation / sqrt(n)).
SummaryStat summarize(std::vector<double> values);

struct MethodSummary {
  std::string method;
  SummaryStat energy_j;
  SummaryStat risk_ratio;
  SummaryStat mismatch_rss;
  SummaryStat cross;
  SummaryStat parallel;
  SummaryStat dest_occupied;
  SummaryStat sub_dmin_events;
};

struct LabeledMetrics {
  std::string method;
  Metrics metrics;
};

/// Per-method mean and standard error. Methods come out in canonical order.
std::vector<MethodSummary> aggregate(const std::vector<LabeledMetrics>& runs);

}  // namespace mset
