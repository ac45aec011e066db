#ifndef ADMMNET_ROAD_HPP
#define ADMMNET_ROAD_HPP

#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <utility>

#include "admmnet/engine.hpp"

namespace admmnet {

/// Per-arc cumulative deviation statistics with a fixed threshold U.
/// Arc (i, j) means agent i monitoring the broadcasts it receives from
/// neighbor j. A flag is permanent once tripped.
struct DeviationTracker {
  double U = 0.0;
  std::map<std::pair<int, int>, double> stat;
  std::set<std::pair<int, int>> flagged;

  explicit DeviationTracker(double threshold) : U(threshold) {
    if (threshold <= 0) throw DomainError("DeviationTracker: U must be positive");
  }

  bool is_flagged(int i, int j) const { return flagged.count({i, j}) > 0; }

  /// Accumulates one deviation sample; returns the new statistic if the arc
  /// just crossed U, otherwise an empty optional.
  std::optional<double> record(int i, int j, double deviation);
};

/// One robust round. Flags already present at round start redirect both the
/// x-update neighbor sums and the multiplier rows: a flagged neighbor's
/// broadcast is replaced by the monitoring agent's own iterate. Statistics
/// are updated with the fresh broadcasts after they are used, so a flag
/// tripped this round only takes effect in the next one.
/// Returns the Lemma-1 identity residual while no flag is active (the
/// identity no longer holds once substitution kicks in; 0 is recorded then),
/// plus the arcs newly flagged this round.
double road_step(NetworkState& state, DeviationTracker& tracker,
                 const CostList& costs, const ConsensusOperators& ops,
                 const AdmmConfig& config, const ErrorModel& model,
                 std::vector<std::tuple<int, int, double>>* new_flags = nullptr);

Trace run_road(const CostList& costs, const ConsensusOperators& ops,
               const AdmmConfig& config, const ErrorModel& model, double U);

}  // namespace admmnet

#endif
