#pragma once

#include <string>
#include <vector>

#include "riskbn/inference.hpp"
#include "riskbn/network.hpp"

namespace riskbn {

/// Default cap on unrolled/filtered step counts. Overridable; exceeding it
/// without the override is an error (step_cap_exceeded).
inline constexpr std::size_t kDefaultStepCap = 1000;

/// Inter-slice dependency: `target` at slice t depends on `source` at slice
/// t-1 (plus the target's intra-slice parents, in that order). `transition`
/// spans (source state x intra-parent configs) columns.
struct TemporalArc {
  std::string source;
  std::string target;
  Cpt transition;
};

/// Two-slice temporal template: slice-0 network, the repeating slice
/// template, and the temporal arcs. At most one arc per target.
class TwoSliceNetwork {
 public:
  TwoSliceNetwork() = default;
  TwoSliceNetwork(Network base, Network initial, std::vector<TemporalArc> arcs,
                  double step_hours = 1.0);

  const Network& base() const { return base_; }
  const Network& initial() const { return initial_; }
  const std::vector<TemporalArc>& arcs() const { return arcs_; }
  double step_hours() const { return step_hours_; }

  /// Index into arcs() for a node index in base(), or -1.
  int arc_for(std::size_t node) const { return arc_of_[node]; }
  /// Sorted node indices (in base()) that feed the next slice.
  const std::vector<std::size_t>& interface_nodes() const { return interface_; }

 private:
  Network base_;
  Network initial_;
  std::vector<TemporalArc> arcs_;
  std::vector<int> arc_of_;
  std::vector<std::size_t> interface_;
  double step_hours_ = 1.0;
};

struct TrajectoryStep {
  std::size_t step = 0;
  // one distribution per monitored node, monitored order
  std::vector<std::vector<double>> distributions;
};

struct TrajectoryResult {
  std::vector<std::string> monitored;
  std::vector<std::vector<std::string>> state_labels;  // per monitored node
  std::vector<TrajectoryStep> steps;
  double step_hours = 1.0;
};

/// Flattens `steps` slices (slice indices 0..steps-1) into one network with
/// `name@t` node ids. Slice 0 uses the initial network's priors/CPTs.
Network unroll(const TwoSliceNetwork& tsn, std::size_t steps,
               std::size_t cap = kDefaultStepCap, bool allow_beyond_cap = false);

/// Exact forward filtering: marginals of the monitored nodes at every slice.
/// Maintains the joint frontier over the temporal interface, so results
/// match posterior_ve on the unrolled network.
TrajectoryResult filter(const TwoSliceNetwork& tsn, std::size_t steps,
                        const std::vector<std::string>& monitored,
                        std::size_t cap = kDefaultStepCap,
                        bool allow_beyond_cap = false);

/// Incremental filtering state; filter() is a convenience loop over this.
class FilterState {
 public:
  FilterState(const TwoSliceNetwork& tsn,
              const std::vector<std::string>& monitored);

  /// Marginals of the monitored nodes at the current slice.
  std::vector<std::vector<double>> marginals() const;
  /// Advances one slice.
  void advance();
  std::size_t step() const { return step_; }

 private:
  const TwoSliceNetwork* tsn_;
  std::vector<std::size_t> monitored_;
  Factor frontier_;        // joint over interface nodes (current slice ids)
  std::vector<Factor> slice_factors_;  // current-slice conditionals
  std::size_t step_ = 0;

  void rebuild_slice(bool initial);
};

/// Converts a per-year failure probability to an equivalent per-step
/// probability: 1 - (1 - p)^(hours/8760). p = 1 stays 1 at every scale.
double annual_to_step(double p_annual, double step_hours);

/// CSV with header `step,node,state,probability`, one row per
/// (step, monitored node, state). Deterministic bytes.
std::string trajectory_csv(const TrajectoryResult& result);

}  // namespace riskbn
