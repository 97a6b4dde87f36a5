#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "engine.hpp"
#include "eval.hpp"
#include "generator.hpp"

using namespace eex;

namespace {

bool states_identical(const BeliefState& a, const BeliefState& b) {
  if (a.num_nodes() != b.num_nodes() || a.num_types() != b.num_types()) return false;
  for (int32_t u = 0; u < a.num_nodes(); ++u) {
    for (int32_t t = 0; t < a.num_types(); ++t) {
      const SparseVec& da = a.dist(u, t);
      const SparseVec& db = b.dist(u, t);
      if (da.size() != db.size()) return false;
      for (size_t i = 0; i < da.size(); ++i) {
        if (da[i].label != db[i].label || da[i].value != db[i].value) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("fully clamped input yields one superstep with zero change") {
  GeneratorConfig config;
  config.nodes = 60;
  config.seed = 3;
  config.mean_degree = 6.0;
  config.types = {{"hometown", 6, 0.5, 0.6, 1.0}, {"employer", 10, 0.5, 0.4, 1.0}};
  for (auto& t : config.types) t.visibility = 1.0;
  const Dataset ds = generate(config);
  ModelParams params;
  for (Mode mode : {Mode::kLabelPropagation, Mode::kEdgeExplain}) {
    const InferenceResult res = run_inference(ds.graph, ds.observed, params, mode);
    CHECK(res.reports.size() == 1);
    CHECK(res.reports[0].max_change == doctest::Approx(0.0));
  }
}

TEST_CASE("the motivating example separates the two methods") {
  Fig1Expected expected;
  const Dataset ds = make_fig1_instance(&expected);
  CHECK(ds.graph.num_edges() == 16);
  const int32_t u = *ds.graph.find_node(expected.node);
  const int32_t hometown = *ds.schema.find_type("hometown");
  const int32_t city = *ds.schema.find_type("current_city");
  ModelParams params;
  params.alpha = 10.0;

  const InferenceResult ee = run_inference(ds.graph, ds.observed, params, Mode::kEdgeExplain);
  const SparseVec ee_home = ranked(ee.beliefs.dist(u, hometown));
  const SparseVec ee_city = ranked(ee.beliefs.dist(u, city));
  REQUIRE(!ee_home.empty());
  REQUIRE(!ee_city.empty());
  CHECK(ds.schema.label_name(hometown, ee_home[0].label) == expected.hometown);
  CHECK(ds.schema.label_name(city, ee_city[0].label) == expected.current_city);

  const InferenceResult lp =
      run_inference(ds.graph, ds.observed, params, Mode::kLabelPropagation);
  const SparseVec lp_home = ranked(lp.beliefs.dist(u, hometown));
  const SparseVec lp_city = ranked(lp.beliefs.dist(u, city));
  CHECK(ds.schema.label_name(hometown, lp_home[0].label) == expected.hometown);
  CHECK(ds.schema.label_name(city, lp_city[0].label) == expected.current_city_lp);
}

TEST_CASE("worker count never changes the result") {
  GeneratorConfig config;
  config.nodes = 400;
  config.seed = 17;
  config.mean_degree = 10.0;
  config.types = {{"hometown", 12, 0.5, 0.5, 0.5},
                  {"college", 20, 0.5, 0.3, 0.5},
                  {"employer", 30, 0.5, 0.2, 0.5}};
  const Dataset ds = generate(config);
  ModelParams params;
  params.max_supersteps = 6;
  for (Mode mode : {Mode::kLabelPropagation, Mode::kEdgeExplain}) {
    const InferenceResult one = run_inference(ds.graph, ds.observed, params, mode, 1);
    const InferenceResult two = run_inference(ds.graph, ds.observed, params, mode, 2);
    const InferenceResult eight = run_inference(ds.graph, ds.observed, params, mode, 8);
    CHECK(states_identical(one.beliefs, two.beliefs));
    CHECK(states_identical(one.beliefs, eight.beliefs));
    REQUIRE(one.reports.size() == eight.reports.size());
    for (size_t i = 0; i < one.reports.size(); ++i) {
      CHECK(one.reports[i].max_change == eight.reports[i].max_change);
      CHECK(one.reports[i].objective == eight.reports[i].objective);
      CHECK(one.reports[i].messages == eight.reports[i].messages);
    }
  }
}

TEST_CASE("clamped pairs stay exact point masses; messages respect the clip") {
  GeneratorConfig config;
  config.nodes = 300;
  config.seed = 23;
  config.mean_degree = 12.0;
  config.types = {{"hometown", 10, 0.5, 0.5, 0.5},
                  {"college", 16, 0.5, 0.3, 0.5},
                  {"employer", 24, 0.5, 0.2, 0.5}};
  const Dataset ds = generate(config);
  ModelParams params;
  params.clip_size = 8;
  params.max_supersteps = 5;
  const InferenceResult res = run_inference(ds.graph, ds.observed, params, Mode::kEdgeExplain, 2);
  const int32_t num_types = ds.schema.num_types();
  for (int32_t u = 0; u < ds.graph.num_nodes(); ++u) {
    for (int32_t t = 0; t < num_types; ++t) {
      const SparseVec& d = res.beliefs.dist(u, t);
      CHECK(static_cast<int>(d.size()) <= params.clip_size);
      if (ds.observed.has(u, t)) {
        REQUIRE(d.size() == 1);
        CHECK(d[0].label == ds.observed.get(u, t));
        CHECK(d[0].value == 1.0);
        CHECK(res.beliefs.clamped(u, t));
      }
    }
  }
  const int64_t cap = static_cast<int64_t>(ds.graph.num_nodes()) * num_types * params.clip_size;
  for (const SuperstepReport& r : res.reports) {
    CHECK(r.messages <= cap);
    CHECK(r.max_change >= 0.0);
    CHECK(std::isfinite(r.objective));
  }
}

TEST_CASE("gauss-seidel matches jacobi when ordering cannot matter") {
  // a single unclamped node surrounded by clamped ones
  GraphBuilder builder;
  builder.add_node("u");
  for (int i = 1; i <= 4; ++i) {
    builder.add_node("v" + std::to_string(i));
    builder.add_edge(0, i, 1.0);
  }
  const Graph g = builder.build(2);
  ObservedLabels observed(5, 2);
  for (int i = 1; i <= 4; ++i) {
    observed.set(i, 0, i % 2);
    observed.set(i, 1, 2 + i % 3);
  }
  ModelParams params;
  params.max_supersteps = 1;
  const InferenceResult jacobi = run_inference(g, observed, params, Mode::kEdgeExplain);
  const InferenceResult gs = gauss_seidel(g, observed, params);
  CHECK(states_identical(jacobi.beliefs, gs.beliefs));
}

TEST_CASE("gauss-seidel objective trace is non-decreasing and sweeps help") {
  GeneratorConfig config;
  config.nodes = 20;
  config.seed = 77;
  config.mean_degree = 5.0;
  config.types.clear();
  config.types = {{"hometown", 6, 1.0, 0.6, 0.5}, {"employer", 8, 1.0, 0.4, 0.4}};
  const Dataset ds = generate(config);
  ModelParams params;
  params.step_policy = StepPolicy::kBacktracking;

  params.max_supersteps = 1;
  std::vector<double> trace_one;
  const InferenceResult one = gauss_seidel(ds.graph, ds.observed, params, &trace_one);
  for (size_t i = 1; i < trace_one.size(); ++i) {
    CHECK(trace_one[i] >= trace_one[i - 1] - 1e-9);
  }

  params.max_supersteps = 2;
  std::vector<double> trace_two;
  const InferenceResult two = gauss_seidel(ds.graph, ds.observed, params, &trace_two);
  CHECK(two.reports.back().objective >= one.reports.back().objective - 1e-9);
}

TEST_CASE("superstep trace records termination by tolerance") {
  Graph g = [&] {
    GraphBuilder b;
    b.add_node("a");
    b.add_node("b");
    b.add_node("c");
    b.add_edge(0, 1, 1.0);
    b.add_edge(1, 2, 1.0);
    return b.build(1);
  }();
  ObservedLabels observed(3, 1);
  observed.set(0, 0, 0);
  ModelParams params;
  params.tol = 1e-4;
  const InferenceResult res = run_inference(g, observed, params, Mode::kLabelPropagation);
  CHECK(res.reports.size() < static_cast<size_t>(params.max_supersteps));
  CHECK(res.reports.back().max_change < params.tol);
}
