#include "admmnet/topology.hpp"

#include <algorithm>
#include <set>

#include "admmnet/rng.hpp"

namespace admmnet {

Topology build_topology(int D, int N, std::vector<std::pair<int, int>> edges) {
  if (D < 2) throw InvalidEdge("build_topology: need at least 2 agents");
  if (N < 1) throw InvalidEdge("build_topology: dimension must be positive");
  if (edges.empty()) throw InvalidEdge("build_topology: edge list is empty");

  std::set<std::pair<int, int>> seen;
  for (auto& [i, j] : edges) {
    if (i < 0 || i >= D || j < 0 || j >= D)
      throw InvalidEdge("build_topology: agent index out of range");
    if (i == j) throw InvalidEdge("build_topology: self-loop");
    if (i > j) std::swap(i, j);
    if (!seen.insert({i, j}).second)
      throw InvalidEdge("build_topology: duplicate edge");
  }
  std::sort(edges.begin(), edges.end());

  Topology t;
  t.D = D;
  t.N = N;
  t.edges = edges;
  t.neighbors.assign(D, {});
  for (auto [i, j] : edges) {
    t.neighbors[i].push_back(j);
    t.neighbors[j].push_back(i);
    t.arcs.push_back({i, j});
    t.arcs.push_back({j, i});
  }
  for (auto& nb : t.neighbors) std::sort(nb.begin(), nb.end());
  std::sort(t.arcs.begin(), t.arcs.end());

  // connectivity by BFS from agent 0
  std::vector<char> visited(D, 0);
  std::vector<int> stack{0};
  visited[0] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int w : t.neighbors[u])
      if (!visited[w]) {
        visited[w] = 1;
        stack.push_back(w);
      }
  }
  if (std::count(visited.begin(), visited.end(), 1) != D)
    throw DisconnectedGraph("build_topology: graph is not connected");
  return t;
}

std::vector<std::pair<int, int>> path_edges(int D) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < D; ++i) e.push_back({i, i + 1});
  return e;
}

std::vector<std::pair<int, int>> ring_edges(int D) {
  auto e = path_edges(D);
  if (D > 2) e.push_back({0, D - 1});
  return e;
}

std::vector<std::pair<int, int>> complete_edges(int D) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j) e.push_back({i, j});
  return e;
}

std::vector<std::pair<int, int>> random_connected_edges(int D, double p,
                                                        std::uint64_t seed) {
  // Rejection-sample Erdos-Renyi draws until connected; the draw index is
  // part of the RNG key so the whole procedure is a function of the seed.
  for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < D; ++i)
      for (int j = i + 1; j < D; ++j)
        if (rng::uniform(seed, attempt, static_cast<std::uint64_t>(i) * D + j,
                         0) < p)
          e.push_back({i, j});
    if (e.empty()) continue;
    try {
      build_topology(D, 1, e);
      return e;
    } catch (const DisconnectedGraph&) {
      continue;
    }
  }
  throw DisconnectedGraph("random_connected_edges: no connected draw found");
}

}  // namespace admmnet
