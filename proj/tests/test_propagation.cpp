#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "engine.hpp"
#include "oracles.hpp"
#include "propagation.hpp"
#include "rng.hpp"

using namespace eex;

namespace {

Graph line_graph(int n, double w = 1.0) {
  GraphBuilder builder;
  for (int i = 0; i < n; ++i) builder.add_node("n" + std::to_string(i));
  for (int i = 0; i + 1 < n; ++i) builder.add_edge(i, i + 1, w);
  return builder.build(1);
}

}  // namespace

TEST_CASE("lp_energy on a single edge") {
  Graph g = line_graph(2);
  BeliefState state(2, 1);
  state.mutable_dist(0, 0) = {{3, 1.0}};
  state.mutable_dist(1, 0) = {{3, 1.0}};
  CHECK(lp_energy(g, state, 0) == doctest::Approx(0.0));

  state.mutable_dist(1, 0) = {{4, 1.0}};
  CHECK(lp_energy(g, state, 0) == doctest::Approx(1.0));

  Graph heavy = line_graph(2, 3.0);
  CHECK(lp_energy(heavy, state, 0) == doctest::Approx(3.0));
}

TEST_CASE("lp_update averages neighbor distributions") {
  // two unit-weight neighbors with point masses -> 0.5 / 0.5
  GraphBuilder builder;
  for (int i = 0; i < 3; ++i) builder.add_node("n" + std::to_string(i));
  builder.add_edge(0, 1, 1.0);
  builder.add_edge(0, 2, 1.0);
  Graph g = builder.build(1);
  BeliefState state(3, 1);
  state.mutable_dist(1, 0) = {{1, 1.0}};
  state.mutable_dist(2, 0) = {{2, 1.0}};
  SparseVec out = lp_update(g, 0, 0, state, 8);
  REQUIRE(out.size() == 2);
  CHECK(out[0].value == doctest::Approx(0.5));
  CHECK(out[1].value == doctest::Approx(0.5));

  // same label everywhere is a fixed point
  state.mutable_dist(2, 0) = {{1, 1.0}};
  out = lp_update(g, 0, 0, state, 8);
  REQUIRE(out.size() == 1);
  CHECK(out[0].label == 1);
  CHECK(out[0].value == doctest::Approx(1.0));

  // weights 3 and 1 -> 0.75 / 0.25
  GraphBuilder wb;
  for (int i = 0; i < 3; ++i) wb.add_node("n" + std::to_string(i));
  wb.add_edge(0, 1, 3.0);
  wb.add_edge(0, 2, 1.0);
  Graph wg = wb.build(1);
  state.mutable_dist(1, 0) = {{1, 1.0}};
  state.mutable_dist(2, 0) = {{2, 1.0}};
  out = lp_update(wg, 0, 0, state, 8);
  REQUIRE(out.size() == 2);
  CHECK(out[0].value == doctest::Approx(0.75));
  CHECK(out[1].value == doctest::Approx(0.25));
}

TEST_CASE("lp_update abstains without neighbor information and clips otherwise") {
  Graph g = line_graph(3);
  BeliefState empty(3, 1);
  CHECK(lp_update(g, 1, 0, empty, 8).empty());

  // node 1 sees 6 distinct labels from two neighbors; clip to 4
  BeliefState state(3, 1);
  state.mutable_dist(0, 0) = {{0, 0.5}, {1, 0.3}, {2, 0.2}};
  state.mutable_dist(2, 0) = {{3, 0.6}, {4, 0.25}, {5, 0.15}};
  const SparseVec out = lp_update(g, 1, 0, state, 4);
  REQUIRE(out.size() == 4);
  double total = 0.0;
  for (const Entry& e : out) total += e.value;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // averaged masses: {0:.25, 1:.15, 2:.1, 3:.3, 4:.125, 5:.075}; the two
  // smallest (labels 2 and 5) are clipped away
  for (const Entry& e : out) {
    CHECK(e.label != 2);
    CHECK(e.label != 5);
  }
}

TEST_CASE("fully observed graph terminates immediately") {
  Graph g = line_graph(4);
  ObservedLabels observed(4, 1);
  for (int i = 0; i < 4; ++i) observed.set(i, 0, i % 2);
  ModelParams params;
  const InferenceResult res = run_label_propagation(g, observed, params);
  CHECK(res.reports.size() == 1);
  CHECK(res.reports[0].max_change == doctest::Approx(0.0));
  for (int i = 0; i < 4; ++i) {
    REQUIRE(res.beliefs.dist(i, 0).size() == 1);
    CHECK(res.beliefs.dist(i, 0)[0].label == i % 2);
  }
}

TEST_CASE("labels flow down a chain from the seed") {
  Graph g = line_graph(3);
  ObservedLabels observed(3, 1);
  observed.set(0, 0, 7);
  ModelParams params;
  const InferenceResult res = run_label_propagation(g, observed, params);
  for (int i = 1; i < 3; ++i) {
    REQUIRE(res.beliefs.dist(i, 0).size() == 1);
    CHECK(res.beliefs.dist(i, 0)[0].label == 7);
    CHECK(res.beliefs.dist(i, 0)[0].value == doctest::Approx(1.0));
  }
}

TEST_CASE("propagation matches a dense reference implementation") {
  Rng rng(321);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 6 + static_cast<int>(rng.bounded(6));
    const int num_labels = 2 + static_cast<int>(rng.bounded(3));
    GraphBuilder builder;
    for (int i = 0; i < n; ++i) builder.add_node("n" + std::to_string(i));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.uniform() < 0.4) builder.add_edge(i, j, 0.5 + rng.uniform());
      }
    }
    const Graph g = builder.build(1);
    ObservedLabels observed(n, 1);
    std::vector<int32_t> dense_observed(n, -1);
    for (int i = 0; i < n; ++i) {
      if (rng.uniform() < 0.4) {
        const int l = static_cast<int>(rng.bounded(num_labels));
        observed.set(i, 0, l);
        dense_observed[i] = l;
      }
    }
    ModelParams params;
    params.tol = 1e-12;
    params.max_supersteps = 25;
    params.clip_size = 8;  // >= |L|; no truncation
    const InferenceResult res = run_label_propagation(g, observed, params);
    const auto dense =
        oracle::dense_lp(g, dense_observed, num_labels, static_cast<int>(res.reports.size()));
    for (int u = 0; u < n; ++u) {
      for (int l = 0; l < num_labels; ++l) {
        CHECK(oracle::get_entry(res.beliefs.dist(u, 0), l) ==
              doctest::Approx(dense[u][l]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("energy never increases once supports have stabilized") {
  // Every unclamped node borders a seed, so supports settle after the first
  // sweep; from then on Jacobi sweeps cannot increase the quadratic energy.
  Rng rng(55);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 10;
    GraphBuilder builder;
    for (int i = 0; i < n; ++i) builder.add_node("n" + std::to_string(i));
    for (int i = 0; i < n; ++i) builder.add_edge(i, (i + 1) % n, 1.0);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 2; j < n; ++j) {
        if (rng.uniform() < 0.2) builder.add_edge(i, j, 1.0);
      }
    }
    const Graph g = builder.build(1);
    ObservedLabels observed(n, 1);
    for (int i = 0; i < n; i += 2) observed.set(i, 0, static_cast<int>(rng.bounded(3)));
    ModelParams params;
    params.tol = 1e-10;
    params.max_supersteps = 40;
    const InferenceResult res = run_label_propagation(g, observed, params);
    // reports[i].objective carries the LP energy after sweep i+1
    for (size_t i = 1; i < res.reports.size(); ++i) {
      CHECK(res.reports[i].objective <= res.reports[i - 1].objective + 1e-9);
    }
  }
}
