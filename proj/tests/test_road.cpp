#include <doctest.h>

#include "admmnet/road.hpp"
#include "admmnet/rng.hpp"
#include "helpers.hpp"

using namespace admmnet;

namespace {

struct RoadFixture {
  Topology topo;
  ConsensusOperators ops;
  CostList costs;
};

RoadFixture make_fixture(std::uint64_t seed, int D = 6, int N = 2) {
  RoadFixture f;
  f.topo = build_topology(D, N, random_connected_edges(D, 0.6, seed));
  f.ops = build_operators(f.topo);
  for (int i = 0; i < D; ++i) {
    Mat B(N + 1, N);
    for (int r = 0; r < N + 1; ++r)
      for (int c = 0; c < N; ++c) B(r, c) = rng::normal(seed, i, r, c);
    Vec y(N + 1);
    for (int r = 0; r < N + 1; ++r) y[r] = rng::normal(seed, i, 50 + r, 0);
    f.costs.push_back(std::make_shared<LeastSquaresCost>(B, y));
  }
  return f;
}

}  // namespace

TEST_CASE("deviation tracker accumulates and flags permanently") {
  DeviationTracker t(1.0);
  CHECK_FALSE(t.is_flagged(0, 1));
  CHECK_FALSE(t.record(0, 1, 0.6).has_value());
  auto crossing = t.record(0, 1, 0.6);
  REQUIRE(crossing.has_value());
  CHECK(*crossing == doctest::Approx(1.2));
  CHECK(t.is_flagged(0, 1));
  // Further samples keep accumulating but never re-flag.
  CHECK_FALSE(t.record(0, 1, 5.0).has_value());
  CHECK(t.is_flagged(0, 1));
  CHECK_FALSE(t.is_flagged(1, 0));  // arcs are directed
  CHECK_THROWS_AS(t.record(0, 1, -0.1), DomainError);
  CHECK_THROWS_AS(DeviationTracker(0.0), DomainError);
}

TEST_CASE("error-free road tracks the plain engine with no flags") {
  RoadFixture f = make_fixture(2);
  AdmmConfig cfg;
  cfg.c = 0.9;
  cfg.T = 80;
  Trace plain = run(f.costs, f.ops, cfg, ErrorModel::none());
  Trace robust = run_road(f.costs, f.ops, cfg, ErrorModel::none(), 1e6);
  REQUIRE(plain.rows.size() == robust.rows.size());
  // Summation order differs slightly between the two loops, so allow
  // round-off while requiring agreement far below algorithmic scales.
  for (size_t i = 0; i < plain.rows.size(); ++i) {
    CHECK((plain.rows[i].x - robust.rows[i].x).norm() <
          1e-12 * (1.0 + plain.rows[i].x.norm()));
    CHECK((plain.rows[i].alpha - robust.rows[i].alpha).norm() <
          1e-12 * (1.0 + plain.rows[i].alpha.norm()));
    CHECK(robust.rows[i].flagged_arcs == 0);
  }
}

TEST_CASE("erroneous road matches the engine until the first flag") {
  RoadFixture f = make_fixture(3);
  ErrorModel model = ErrorModel::gaussian({1, 4}, 1.0, 1.5, 99);
  AdmmConfig cfg;
  cfg.c = 0.8;
  cfg.T = 120;
  Trace plain = run(f.costs, f.ops, cfg, model);
  Trace robust = run_road(f.costs, f.ops, cfg, model, 25.0);

  int first_flag_k = cfg.T + 1;
  for (const auto& row : robust.rows)
    if (row.flagged_arcs > 0) {
      first_flag_k = row.k;
      break;
    }
  REQUIRE(first_flag_k <= cfg.T);  // errors this large must trip the stats
  for (size_t i = 0; i < robust.rows.size(); ++i) {
    if (robust.rows[i].k > first_flag_k) break;
    CHECK((plain.rows[i].x - robust.rows[i].x).norm() <
          1e-12 * (1.0 + plain.rows[i].x.norm()));
    CHECK((plain.rows[i].alpha - robust.rows[i].alpha).norm() <
          1e-12 * (1.0 + plain.rows[i].alpha.norm()));
  }
  // Flags never disappear.
  int prev = 0;
  for (const auto& row : robust.rows) {
    CHECK(row.flagged_arcs >= prev);
    prev = row.flagged_arcs;
  }
  // Newly flagged arcs carry the crossing statistic above U.
  for (const auto& row : robust.rows)
    for (const auto& [i, j, stat] : row.new_flags) {
      CHECK(stat > 25.0);
      CHECK(i >= 0);
      CHECK(i < f.topo.D);
      CHECK(j >= 0);
      CHECK(j < f.topo.D);
    }
}

TEST_CASE("multiplier conservation holds until substitution begins") {
  // Conservation relies on 1'L_- = 0, which the substituted update breaks
  // on purpose once an arc is one-sidedly flagged: the monitoring agent
  // integrates its own broadcast while the peer still integrates the
  // received one. So the consensus component of alpha must be zero exactly
  // up to the first flag and is allowed to drift afterwards.
  RoadFixture f = make_fixture(4);
  ErrorModel model = ErrorModel::gaussian({0, 2}, 1.0, 1.0, 7);
  AdmmConfig cfg;
  cfg.c = 0.8;
  cfg.T = 150;
  Trace robust = run_road(f.costs, f.ops, cfg, model, 10.0);
  CHECK(robust.rows.back().flagged_arcs > 0);
  bool saw_preflag_rows = false;
  for (const auto& row : robust.rows) {
    if (row.flagged_arcs > 0) break;
    saw_preflag_rows = true;
    Vec cons = consensus_component(row.alpha, f.topo.D, f.topo.N);
    CHECK(cons.norm() < 1e-9 * (1.0 + row.alpha.norm()));
  }
  CHECK(saw_preflag_rows);
}

TEST_CASE("substitution only affects the monitoring agent's blocks") {
  RoadFixture f = make_fixture(5);
  const int N = f.topo.N;
  AdmmConfig cfg;
  cfg.c = 0.9;
  cfg.T = 0;
  cfg.verify_identities = false;

  // Run a few plain steps, then fork: one step with and without a forced
  // flag on arc (0, j0).
  NetworkState s = init_state(f.ops, ErrorModel::none(), cfg.c);
  for (int k = 0; k < 5; ++k) step(s, f.costs, f.ops, cfg, ErrorModel::none());

  const int j0 = f.topo.neighbors[0][0];
  NetworkState plain_state = s, road_state = s;
  step(plain_state, f.costs, f.ops, cfg, ErrorModel::none());
  DeviationTracker tracker(1e9);
  tracker.flagged.insert({0, j0});
  road_step(road_state, tracker, f.costs, f.ops, cfg, ErrorModel::none());

  // x differs only in agent 0's block this round.
  for (int i = 0; i < f.topo.D; ++i) {
    const double diff =
        (plain_state.x.segment(i * N, N) - road_state.x.segment(i * N, N)).norm();
    if (i == 0)
      CHECK(diff > 0.0);
    else
      CHECK(diff == 0.0);
  }
}

TEST_CASE("road replay determinism") {
  RoadFixture f = make_fixture(6);
  ErrorModel model = ErrorModel::gaussian({1}, 0.7, 1.2, 3);
  AdmmConfig cfg;
  cfg.c = 1.0;
  cfg.T = 60;
  Trace a = run_road(f.costs, f.ops, cfg, model, 8.0);
  Trace b = run_road(f.costs, f.ops, cfg, model, 8.0);
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK((a.rows[i].x - b.rows[i].x).norm() == 0.0);
    CHECK(a.rows[i].flagged_arcs == b.rows[i].flagged_arcs);
  }
}

TEST_CASE("lemma 8 consensus bound holds on error-free road runs") {
  auto inst = testing::make_edge_instance(1);
  const double c = inst.constants.c_opt;
  const double U = road_threshold(inst.ops, inst.profile.V1, inst.profile.V2, c);
  AdmmConfig cfg;
  cfg.c = c;
  cfg.T = 200;
  Trace tr = run_road(inst.costs, inst.ops, cfg, ErrorModel::none(), U);
  CHECK(tr.rows.back().flagged_arcs == 0);
  BoundReport rep = lemma8_report(tr, inst.ops, inst.profile.V1,
                                  inst.profile.V2, c);
  CHECK_FALSE(rep.violated);
}
