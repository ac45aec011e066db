#ifndef ADMMNET_TOPOLOGY_HPP
#define ADMMNET_TOPOLOGY_HPP

#include <utility>
#include <vector>

#include "admmnet/common.hpp"

namespace admmnet {

/// Undirected connected agent graph, expanded into its 2E directed arcs.
/// Arcs are kept sorted lexicographically so every matrix built from the
/// topology is reproducible bit for bit.
struct Topology {
  int D = 0;                                 // agent count
  int N = 0;                                 // per-agent variable dimension
  std::vector<std::pair<int, int>> edges;    // unordered pairs, i < j
  std::vector<std::pair<int, int>> arcs;     // both orientations, sorted
  std::vector<std::vector<int>> neighbors;   // adjacency lists, sorted

  int E() const { return static_cast<int>(edges.size()); }
  int degree(int i) const { return static_cast<int>(neighbors[i].size()); }
  int stacked_dim() const { return D * N; }
};

Topology build_topology(int D, int N, std::vector<std::pair<int, int>> edges);

// Named presets used by the experiment harness.
std::vector<std::pair<int, int>> path_edges(int D);
std::vector<std::pair<int, int>> ring_edges(int D);
std::vector<std::pair<int, int>> complete_edges(int D);
std::vector<std::pair<int, int>> random_connected_edges(int D, double p, std::uint64_t seed);

}  // namespace admmnet

#endif
