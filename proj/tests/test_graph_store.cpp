#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "dataset.hpp"
#include "errors.hpp"
#include "generator.hpp"

using namespace eex;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("eex-test-" + std::to_string(reinterpret_cast<uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path file(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }
};

Dataset ingest_strings(const TempDir& dir, const std::string& edges, const std::string& labels,
                       const std::string* ages = nullptr, const std::string* groups = nullptr,
                       const std::string* type_weights = nullptr) {
  IngestPaths paths;
  paths.edges = dir.file("edges.tsv", edges);
  paths.labels = dir.file("labels.tsv", labels);
  if (ages) paths.ages = dir.file("ages.tsv", *ages);
  if (groups) paths.groups = dir.file("groups.tsv", *groups);
  if (type_weights) paths.edge_type_weights = dir.file("edge_type_weights.tsv", *type_weights);
  return ingest(paths);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>{});
}

}  // namespace

TEST_CASE("symmetric duplicate edges collapse to one undirected edge") {
  TempDir dir;
  const Dataset ds = ingest_strings(dir, "a\tb\nb\ta\n", "a\thometown\tH\n");
  CHECK(ds.graph.num_nodes() == 2);
  CHECK(ds.graph.num_edges() == 1);
  CHECK(ds.graph.edge_weight(0, 1) == doctest::Approx(1.0));
  // symmetric adjacency
  CHECK(ds.graph.has_edge(0, 1));
  CHECK(ds.graph.has_edge(1, 0));
}

TEST_CASE("duplicate identical observation is idempotent, conflicting one fails") {
  TempDir dir;
  const Dataset ds =
      ingest_strings(dir, "a\tb\n", "a\thometown\tH\na\thometown\tH\n");
  CHECK(ds.observed.count() == 1);

  TempDir dir2;
  CHECK_THROWS_WITH_AS(
      ingest_strings(dir2, "a\tb\n", "a\thometown\tH\na\thometown\tH2\n"),
      doctest::Contains("conflicting observation"), DataError);
}

TEST_CASE("malformed input names the file and line") {
  TempDir dir;
  try {
    ingest_strings(dir, "# comment\na\tb\nbroken-line\n", "");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("edges.tsv:3") != std::string::npos);
  }
}

TEST_CASE("self-loops and non-positive weights are rejected") {
  TempDir dir;
  CHECK_THROWS_AS(ingest_strings(dir, "a\ta\n", ""), DataError);
  TempDir dir2;
  CHECK_THROWS_WITH_AS(ingest_strings(dir2, "a\tb\t0\n", ""),
                       doctest::Contains("non-positive"), DataError);
  TempDir dir3;
  CHECK_THROWS_WITH_AS(ingest_strings(dir3, "a\tb\t1\na\tb\t2\n", ""),
                       doctest::Contains("conflicting weight"), DataError);
}

TEST_CASE("group expansion adds one node per group and one edge per membership") {
  TempDir dir;
  const std::string groups = "g1\ta\ng1\tb\ng1\tc\ng1\tc\n";  // duplicate membership
  const Dataset ds = ingest_strings(dir, "a\tb\nb\tc\n", "", nullptr, &groups);
  CHECK(ds.graph.num_nodes() == 4);
  CHECK(ds.graph.num_edges() == 2 + 3);
  const int32_t g = *ds.graph.find_node("g1");
  CHECK(ds.graph.kind(g) == NodeKind::kGroup);
  CHECK(ds.graph.degree(g) == 3);

  // empty groups file: graph unchanged
  TempDir dir2;
  const std::string empty;
  const Dataset ds2 = ingest_strings(dir2, "a\tb\n", "", nullptr, &empty);
  CHECK(ds2.graph.num_nodes() == 2);
  CHECK(ds2.graph.num_edges() == 1);

  // single-member group: one edge
  TempDir dir3;
  const std::string one = "g\ta\n";
  const Dataset ds3 = ingest_strings(dir3, "a\tb\n", "", nullptr, &one);
  CHECK(ds3.graph.num_edges() == 2);
}

TEST_CASE("group membership referencing unknown node fails") {
  TempDir dir;
  const std::string groups = "g1\tzz\n";
  CHECK_THROWS_WITH_AS(ingest_strings(dir, "a\tb\n", "", nullptr, &groups),
                       doctest::Contains("unknown user node"), DataError);

  TempDir dir2;
  const std::string collision = "a\tb\n";
  CHECK_THROWS_WITH_AS(ingest_strings(dir2, "a\tb\n", "", nullptr, &collision),
                       doctest::Contains("collides"), DataError);
}

TEST_CASE("per-type multipliers scale the per-type weight only") {
  TempDir dir;
  const std::string tw = "a\tb\thometown\t2.5\n";
  const Dataset ds = ingest_strings(dir, "a\tb\t2\n", "a\thometown\tH\na\tcollege\tX\n",
                                    nullptr, nullptr, &tw);
  const int32_t hometown = *ds.schema.find_type("hometown");
  const int32_t college = *ds.schema.find_type("college");
  const auto nbrs = ds.graph.neighbors(0);
  REQUIRE(nbrs.size() == 1);
  const int64_t arc = ds.graph.arc(0, 0);
  CHECK(ds.graph.type_weight(arc, hometown) == doctest::Approx(5.0));
  CHECK(ds.graph.type_weight(arc, college) == doctest::Approx(2.0));

  TempDir dir2;
  const std::string bad = "a\tzz\thometown\t2\n";
  CHECK_THROWS_WITH_AS(ingest_strings(dir2, "a\tb\n", "a\thometown\tH\n", nullptr, nullptr, &bad),
                       doctest::Contains("no such edge"), DataError);
}

TEST_CASE("age sparsification: star example") {
  // center age 21; leaves 20, 21, 22, 30, 40. K=2: center keeps the age-21
  // and age-20 leaves, every leaf keeps its only neighbor, so all edges stay.
  TempDir dir;
  const std::string ages = "c\t21\nl1\t20\nl2\t21\nl3\t22\nl4\t30\nl5\t40\n";
  const Dataset ds = ingest_strings(dir, "c\tl1\nc\tl2\nc\tl3\nc\tl4\nc\tl5\n", "", &ages);
  const Graph sparse = sparsify_by_age(ds.graph, 2);
  CHECK(sparse.num_edges() == 5);
}

TEST_CASE("age sparsification: path example and subset property") {
  TempDir dir;
  const std::string ages = "a\t20\nb\t21\nc\t40\n";
  const Dataset ds = ingest_strings(dir, "a\tb\nb\tc\n", "", &ages);
  const Graph sparse = sparsify_by_age(ds.graph, 1);
  // b nominates a; a nominates b; c nominates b: both edges survive.
  CHECK(sparse.num_edges() == 2);

  CHECK_THROWS_AS(sparsify_by_age(ds.graph, 0), UsageError);

  // K >= max degree: unchanged
  const Graph same = sparsify_by_age(ds.graph, 5);
  CHECK(same.num_edges() == ds.graph.num_edges());
}

TEST_CASE("age sparsification keeps group edges and respects degrees") {
  GeneratorConfig config;
  config.nodes = 300;
  config.seed = 5;
  config.mean_degree = 18.0;
  config.types = GeneratorConfig::defaults().types;
  const Dataset ds = generate(config);
  const int k = 4;
  const Graph sparse = sparsify_by_age(ds.graph, k);

  // subset of the input edge set, and every node keeps >= min(K, degree)
  sparse.for_each_edge([&](int32_t u, int32_t v, int64_t) { CHECK(ds.graph.has_edge(u, v)); });
  for (int32_t u = 0; u < ds.graph.num_nodes(); ++u) {
    CHECK(sparse.degree(u) >= std::min<int32_t>(k, ds.graph.degree(u)));
  }
}

TEST_CASE("nodes without ages rank after aged neighbors, by id") {
  TempDir dir;
  const std::string ages = "c\t30\nl1\t31\n";  // l2, l3 have no age
  const Dataset ds = ingest_strings(dir, "c\tl1\nc\tl2\nc\tl3\n", "", &ages);
  const Graph sparse = sparsify_by_age(ds.graph, 2);
  // c nominates l1 (aged) then l2 (smaller id among age-less); leaves
  // nominate c; edges c-l1, c-l2, c-l3 all kept through leaf nominations.
  CHECK(sparse.num_edges() == 3);

  const Graph tighter = sparsify_by_age(ds.graph, 1);
  CHECK(tighter.num_edges() == 3);  // every leaf still nominates c
}

TEST_CASE("round trip: save then ingest preserves everything") {
  GeneratorConfig config;
  config.nodes = 120;
  config.seed = 9;
  config.mean_degree = 10.0;
  Dataset ds = generate(config);

  TempDir dir;
  const fs::path first = dir.path / "first";
  const fs::path second = dir.path / "second";
  save_dir(ds, first);
  Dataset reloaded = ingest_dir(first);
  save_dir(reloaded, second);

  for (const char* name : {"edges.tsv", "labels.tsv", "ages.tsv", "truth.tsv", "reasons.tsv"}) {
    CAPTURE(name);
    CHECK(slurp(first / name) == slurp(second / name));
  }
  CHECK(reloaded.graph.num_nodes() == ds.graph.num_nodes());
  CHECK(reloaded.graph.num_edges() == ds.graph.num_edges());
  CHECK(reloaded.observed.count() == ds.observed.count());
  CHECK(reloaded.schema.num_types() == ds.schema.num_types());
  REQUIRE(reloaded.truth.has_value());
  CHECK(reloaded.reasons.size() == ds.reasons.size());
}

TEST_CASE("round trip keeps groups and kinds") {
  TempDir dir;
  const std::string groups = "g1\ta\ng1\tb\n";
  const std::string ages = "a\t30\nb\t31\nc\t45\n";
  Dataset ds = ingest_strings(dir, "a\tb\nb\tc\t2.5\n", "a\tcollege\tX\n", &ages, &groups);

  const fs::path out = dir.path / "saved";
  save_dir(ds, out);
  Dataset reloaded = ingest_dir(out);
  const int32_t g = *reloaded.graph.find_node("g1");
  CHECK(reloaded.graph.kind(g) == NodeKind::kGroup);
  CHECK(reloaded.graph.num_edges() == ds.graph.num_edges());
  CHECK(reloaded.graph.edge_weight(*reloaded.graph.find_node("b"),
                                   *reloaded.graph.find_node("c")) == doctest::Approx(2.5));
}

TEST_CASE("missing required files raise data errors naming the path") {
  try {
    ingest_dir("/nonexistent-dir-for-eex-tests");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("edges.tsv") != std::string::npos);
  }
}
