#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// This suite goes through the public C header only.
#include "edgeexplain.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("eex-capi-" + std::to_string(reinterpret_cast<uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("parameter handles validate their inputs") {
  eex_params* params = eex_params_new();
  REQUIRE(params != nullptr);
  CHECK(eex_params_set_alpha(params, 10.0) == EEX_OK);
  CHECK(eex_params_set_alpha(params, -1.0) == EEX_ERR_USAGE);
  CHECK(std::strlen(eex_last_error()) > 0);
  CHECK(eex_params_set_clip(params, 0) == EEX_ERR_USAGE);
  CHECK(eex_params_set_step_policy(params, "lipschitz") == EEX_OK);
  CHECK(eex_params_set_step_policy(params, "wat") == EEX_ERR_USAGE);
  CHECK(eex_params_set_lipschitz_rule(params, "conservative") == EEX_OK);
  CHECK(eex_params_set_tol(params, 1e-6) == EEX_OK);
  CHECK(eex_params_set_alpha(nullptr, 1.0) == EEX_ERR_USAGE);
  eex_params_free(params);
}

TEST_CASE("loading a missing directory is a data error naming the path") {
  eex_dataset* ds = nullptr;
  CHECK(eex_dataset_load("/no/such/dir", &ds) == EEX_ERR_DATA);
  CHECK(ds == nullptr);
  CHECK(std::string(eex_last_error()).find("/no/such/dir") != std::string::npos);
}

TEST_CASE("generate, save, reload, infer, and rank through the C surface") {
  TempDir dir;
  const std::string config_path = (dir.path / "gen.toml").string();
  {
    std::ofstream out(config_path);
    out << "nodes = 300\nseed = 5\nmean_degree = 10\n"
           "[[type]]\nname = \"hometown\"\nlabels = 20\nedge_fraction = 0.6\n"
           "[[type]]\nname = \"college\"\nlabels = 30\nedge_fraction = 0.4\n";
  }

  eex_dataset* generated = nullptr;
  REQUIRE(eex_generate(config_path.c_str(), -1, &generated) == EEX_OK);
  CHECK(eex_dataset_nodes(generated) == 300);
  CHECK(eex_dataset_edges(generated) > 0);
  CHECK(eex_dataset_types(generated) == 2);

  const std::string data_dir = (dir.path / "data").string();
  REQUIRE(eex_dataset_save(generated, data_dir.c_str()) == EEX_OK);

  eex_dataset* loaded = nullptr;
  REQUIRE(eex_dataset_load(data_dir.c_str(), &loaded) == EEX_OK);
  CHECK(eex_dataset_nodes(loaded) == eex_dataset_nodes(generated));
  CHECK(eex_dataset_edges(loaded) == eex_dataset_edges(generated));

  eex_params* params = eex_params_new();
  eex_params_set_max_supersteps(params, 10);
  eex_result* result = nullptr;
  REQUIRE(eex_infer(loaded, EEX_MODE_EDGEEXPLAIN, params, 2, &result) == EEX_OK);
  CHECK(eex_result_supersteps(result) > 0);

  double change = -1.0, objective = 1.0, millis = -1.0;
  int64_t messages = -1;
  REQUIRE(eex_result_superstep_stats(result, 0, &change, &objective, &millis, &messages) ==
          EEX_OK);
  CHECK(change >= 0.0);
  CHECK(objective <= 0.0);
  CHECK(messages >= 0);
  CHECK(eex_result_superstep_stats(result, 9999, nullptr, nullptr, nullptr, nullptr) ==
        EEX_ERR_USAGE);

  const char* labels[8];
  double probs[8];
  int count = -1;
  REQUIRE(eex_result_topk(result, "n000000", "hometown", 8, labels, probs, &count) == EEX_OK);
  CHECK(count >= 1);
  for (int i = 1; i < count; ++i) CHECK(probs[i] <= probs[i - 1]);
  CHECK(eex_result_topk(result, "nope", "hometown", 8, labels, probs, &count) == EEX_ERR_USAGE);
  CHECK(eex_result_topk(result, "n000000", "nope", 8, labels, probs, &count) == EEX_ERR_USAGE);

  const std::string pred_path = (dir.path / "pred.tsv").string();
  const std::string trace_path = (dir.path / "trace.tsv").string();
  REQUIRE(eex_result_write_predictions(result, pred_path.c_str()) == EEX_OK);
  REQUIRE(eex_result_write_trace(result, trace_path.c_str()) == EEX_OK);
  CHECK(fs::file_size(pred_path) > 0);
  CHECK(fs::file_size(trace_path) > 0);

  // score held-out pairs through the file interface
  const std::string report_path = (dir.path / "report.tsv").string();
  const int ks[2] = {1, 3};
  REQUIRE(eex_evaluate_files(pred_path.c_str(), (fs::path(data_dir) / "truth.tsv").c_str(),
                             (fs::path(data_dir) / "labels.tsv").c_str(), ks, 2,
                             report_path.c_str()) == EEX_OK);
  CHECK(fs::file_size(report_path) > 0);

  const std::string curve_path = (dir.path / "curve.tsv").string();
  REQUIRE(eex_resolution_curve_files(data_dir.c_str(), pred_path.c_str(),
                                     (fs::path(data_dir) / "truth.tsv").c_str(), "hometown",
                                     curve_path.c_str()) == EEX_OK);
  CHECK(fs::file_size(curve_path) > 0);

  eex_result_free(result);
  eex_params_free(params);
  eex_dataset_free(loaded);
  eex_dataset_free(generated);
}

TEST_CASE("sparsify through the C surface") {
  eex_dataset* ds = nullptr;
  REQUIRE(eex_generate(nullptr, 7, &ds) == EEX_OK);  // default config, seed 7
  eex_dataset* sparse = nullptr;
  REQUIRE(eex_dataset_sparsify_age(ds, 3, &sparse) == EEX_OK);
  CHECK(eex_dataset_edges(sparse) <= eex_dataset_edges(ds));
  CHECK(eex_dataset_sparsify_age(ds, 0, &sparse) == EEX_ERR_USAGE);
  eex_dataset_free(sparse);
  eex_dataset_free(ds);
}

TEST_CASE("sweep through the C surface") {
  TempDir dir;
  const std::string config_path = (dir.path / "gen.toml").string();
  {
    std::ofstream out(config_path);
    out << "nodes = 150\nseed = 3\nmean_degree = 8\n"
           "[[type]]\nname = \"hometown\"\nlabels = 12\nedge_fraction = 1.0\n";
  }
  eex_params* params = eex_params_new();
  eex_params_set_max_supersteps(params, 6);
  const double values[2] = {0.1, 10.0};
  const std::string out_path = (dir.path / "sweep.tsv").string();
  REQUIRE(eex_sweep(config_path.c_str(), -1, "alpha", values, 2, params, EEX_MODE_EDGEEXPLAIN, 1,
                    2, out_path.c_str()) == EEX_OK);
  CHECK(fs::file_size(out_path) > 0);
  CHECK(eex_sweep(config_path.c_str(), -1, "gamma", values, 2, params, EEX_MODE_EDGEEXPLAIN, 1, 1,
                  out_path.c_str()) == EEX_ERR_USAGE);
  eex_params_free(params);
  CHECK(std::string(eex_version()).size() > 0);
}
