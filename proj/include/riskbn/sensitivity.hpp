#pragma once

#include <string>
#include <vector>

#include "riskbn/inference.hpp"
#include "riskbn/network.hpp"

namespace riskbn {

struct SensitivityTarget {
  std::string node;
  std::string state;
  Evidence evidence;
};

/// Identifies one swept CPT parameter: the `state` entry of `node`'s column
/// for `parent_config` (labels in parent declaration order; empty for
/// roots).
struct ParameterRef {
  std::string node;
  std::string state;
  std::vector<std::string> parent_config;
  std::size_t node_index = 0;
  std::size_t config_index = 0;
};

struct TornadoEntry {
  ParameterRef parameter;
  double parameter_value = 0.0;  // baseline CPT entry
  double baseline = 0.0;         // target posterior with the unmodified CPT
  double low = 0.0;              // min posterior over the sweep
  double high = 0.0;             // max posterior over the sweep
  double spread = 0.0;           // high - low
  bool additive = false;         // 0/1 baseline swept additively
};

struct TornadoOptions {
  double sweep = 0.1;   // relative fraction in (0, 1]
  int points = 11;      // odd, >= 3; the baseline is always a sweep point
  bool roots_only = false;
  bool include_target = false;  // also sweep the target node's own columns
};

/// One-way sensitivity of P(target.node = target.state | evidence). One
/// parameter per CPT column is swept: the column's first-state entry, over
/// [max(0, p(1-sweep)), min(1, p(1+sweep))] (additively by ±sweep/100 when p
/// is exactly 0 or 1), co-varying the rest of the column proportionally. The
/// posterior is recomputed exactly at every sweep point. Entries are ranked
/// by descending spread, ties broken by (node index, config index).
///
/// The target node's own columns are excluded unless include_target is set:
/// the ranking answers which causes matter, and the target's own entries
/// dominate it trivially.
std::vector<TornadoEntry> tornado(const Network& net,
                                  const SensitivityTarget& target,
                                  const TornadoOptions& options = {});

/// Per-node maximum spread, descending; ties keep node declaration order.
std::vector<std::pair<std::string, double>> node_importance(
    const std::vector<TornadoEntry>& entries);

/// CSV: rank,node,state,parent_config,baseline,low,high,spread. The
/// parent_config field joins `parent=state` pairs with ';'.
std::string tornado_csv(const std::vector<TornadoEntry>& entries);

/// Deterministic SVG tornado diagram: one horizontal bar per entry spanning
/// [low, high], ranked top-down, with a vertical baseline rule.
std::string tornado_svg(const std::vector<TornadoEntry>& entries);

}  // namespace riskbn
