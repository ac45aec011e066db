#include <doctest.h>

#include <algorithm>
#include <set>

#include "admmnet/topology.hpp"

using namespace admmnet;

TEST_CASE("path ring complete presets") {
  CHECK(path_edges(4).size() == 3);
  CHECK(ring_edges(4).size() == 4);
  CHECK(complete_edges(5).size() == 10);

  Topology t = build_topology(4, 2, path_edges(4));
  CHECK(t.D == 4);
  CHECK(t.N == 2);
  CHECK(t.E() == 3);
  CHECK(t.arcs.size() == 6);  // both orientations
  CHECK(t.degree(0) == 1);
  CHECK(t.degree(1) == 2);
  CHECK(t.stacked_dim() == 8);
}

TEST_CASE("arcs sorted and neighbors sorted") {
  Topology t = build_topology(4, 1, {{2, 3}, {0, 2}, {0, 1}});
  CHECK(std::is_sorted(t.arcs.begin(), t.arcs.end()));
  for (const auto& nbrs : t.neighbors)
    CHECK(std::is_sorted(nbrs.begin(), nbrs.end()));
  // every edge appears as two arcs
  std::set<std::pair<int, int>> arcset(t.arcs.begin(), t.arcs.end());
  for (auto [i, j] : t.edges) {
    CHECK(arcset.count({i, j}) == 1);
    CHECK(arcset.count({j, i}) == 1);
  }
}

TEST_CASE("invalid graphs rejected") {
  CHECK_THROWS_AS(build_topology(3, 1, {{0, 1}, {0, 1}, {1, 2}}), InvalidEdge);
  CHECK_THROWS_AS(build_topology(3, 1, {{0, 0}, {1, 2}}), InvalidEdge);
  CHECK_THROWS_AS(build_topology(3, 1, {{0, 1}, {1, 5}}), InvalidEdge);
  CHECK_THROWS_AS(build_topology(4, 1, {{0, 1}, {2, 3}}), DisconnectedGraph);
  CHECK_THROWS_AS(build_topology(2, 1, {}), InvalidEdge);
}

TEST_CASE("edge order does not matter") {
  Topology a = build_topology(4, 1, {{0, 1}, {1, 2}, {2, 3}});
  Topology b = build_topology(4, 1, {{2, 3}, {0, 1}, {1, 2}});
  CHECK(a.edges == b.edges);
  CHECK(a.arcs == b.arcs);
}

TEST_CASE("random connected topologies are deterministic and connected") {
  for (std::uint64_t seed : {1ull, 7ull, 42ull}) {
    auto e1 = random_connected_edges(9, 0.4, seed);
    auto e2 = random_connected_edges(9, 0.4, seed);
    CHECK(e1 == e2);
    CHECK_NOTHROW(build_topology(9, 1, e1));  // throws if disconnected
  }
  // different seeds give different graphs at least once
  CHECK(random_connected_edges(9, 0.4, 1) != random_connected_edges(9, 0.4, 2));
}
