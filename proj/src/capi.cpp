#include "edgeexplain.h"

#include <cstring>
#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "engine.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "generator.hpp"

using eex::Dataset;

extern "C" {

struct eex_dataset {
  std::shared_ptr<const Dataset> ds;
};

struct eex_params {
  eex::ModelParams p;
};

struct eex_result {
  std::shared_ptr<const Dataset> ds;
  eex::InferenceResult r;
};

}  // extern "C"

namespace {

thread_local std::string g_last_error;

template <typename F>
eex_status guarded(F&& fn) {
  try {
    fn();
    return EEX_OK;
  } catch (const eex::DataError& e) {
    g_last_error = e.what();
    return EEX_ERR_DATA;
  } catch (const eex::UsageError& e) {
    g_last_error = e.what();
    return EEX_ERR_USAGE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EEX_ERR_INTERNAL;
  }
}

eex_status usage_error(const std::string& msg) {
  g_last_error = msg;
  return EEX_ERR_USAGE;
}

eex::Mode to_mode(eex_mode mode) {
  return mode == EEX_MODE_EDGEEXPLAIN ? eex::Mode::kEdgeExplain
                                      : eex::Mode::kLabelPropagation;
}

}  // namespace

extern "C" {

const char* eex_last_error(void) { return g_last_error.c_str(); }

const char* eex_version(void) { return "0.1.0"; }

eex_params* eex_params_new(void) { return new (std::nothrow) eex_params(); }

void eex_params_free(eex_params* params) { delete params; }

#define EEX_CHECK(cond, msg) \
  do {                       \
    if (!(cond)) return usage_error(msg); \
  } while (0)

eex_status eex_params_set_alpha(eex_params* params, double alpha) {
  EEX_CHECK(params, "null params");
  return guarded([&] {
    eex::ModelParams p = params->p;
    p.alpha = alpha;
    p.validate();
    params->p = p;
  });
}

eex_status eex_params_set_c(eex_params* params, double c) {
  EEX_CHECK(params, "null params");
  return guarded([&] {
    eex::ModelParams p = params->p;
    p.c = c;
    p.validate();
    params->p = p;
  });
}

eex_status eex_params_set_clip(eex_params* params, int clip_size) {
  EEX_CHECK(params, "null params");
  return guarded([&] {
    eex::ModelParams p = params->p;
    p.clip_size = clip_size;
    p.validate();
    params->p = p;
  });
}

eex_status eex_params_set_inner_steps(eex_params* params, int inner_steps) {
  EEX_CHECK(params, "null params");
  return guarded([&] {
    eex::ModelParams p = params->p;
    p.inner_steps = inner_steps;
    p.validate();
    params->p = p;
  });
}

eex_status eex_params_set_max_supersteps(eex_params* params, int max_supersteps) {
  EEX_CHECK(params, "null params");
  return guarded([&] {
    eex::ModelParams p = params->p;
    p.max_supersteps = max_supersteps;
    p.validate();
    params->p = p;
  });
}

eex_status eex_params_set_tol(eex_params* params, double tol) {
  EEX_CHECK(params, "null params");
  return guarded([&] {
    eex::ModelParams p = params->p;
    p.tol = tol;
    p.validate();
    params->p = p;
  });
}

eex_status eex_params_set_step_policy(eex_params* params, const char* policy) {
  EEX_CHECK(params && policy, "null argument");
  return guarded([&] { params->p.step_policy = eex::parse_step_policy(policy); });
}

eex_status eex_params_set_lipschitz_rule(eex_params* params, const char* rule) {
  EEX_CHECK(params && rule, "null argument");
  return guarded([&] { params->p.lipschitz_rule = eex::parse_lipschitz_rule(rule); });
}

eex_status eex_dataset_load(const char* dir, eex_dataset** out) {
  EEX_CHECK(dir && out, "null argument");
  return guarded([&] {
    auto ds = std::make_shared<Dataset>(eex::ingest_dir(dir));
    *out = new eex_dataset{std::move(ds)};
  });
}

eex_status eex_dataset_save(const eex_dataset* dataset, const char* dir) {
  EEX_CHECK(dataset && dir, "null argument");
  return guarded([&] { eex::save_dir(*dataset->ds, dir); });
}

void eex_dataset_free(eex_dataset* dataset) { delete dataset; }

int64_t eex_dataset_nodes(const eex_dataset* dataset) {
  return dataset ? dataset->ds->graph.num_nodes() : -1;
}

int64_t eex_dataset_edges(const eex_dataset* dataset) {
  return dataset ? dataset->ds->graph.num_edges() : -1;
}

int32_t eex_dataset_types(const eex_dataset* dataset) {
  return dataset ? dataset->ds->schema.num_types() : -1;
}

eex_status eex_dataset_sparsify_age(const eex_dataset* dataset, int k, eex_dataset** out) {
  EEX_CHECK(dataset && out, "null argument");
  return guarded([&] {
    auto ds = std::make_shared<Dataset>(*dataset->ds);
    ds->graph = eex::sparsify_by_age(dataset->ds->graph, k);
    // Reasons for pruned edges no longer apply.
    for (auto it = ds->reasons.begin(); it != ds->reasons.end();) {
      const int32_t u = static_cast<int32_t>(it->first >> 32);
      const int32_t v = static_cast<int32_t>(it->first & 0xffffffffu);
      it = ds->graph.has_edge(u, v) ? std::next(it) : ds->reasons.erase(it);
    }
    *out = new eex_dataset{std::move(ds)};
  });
}

eex_status eex_generate(const char* config_path, int64_t seed_override, eex_dataset** out) {
  EEX_CHECK(out, "null argument");
  return guarded([&] {
    eex::GeneratorConfig config = config_path
                                      ? eex::GeneratorConfig::from_toml_file(config_path)
                                      : eex::GeneratorConfig::defaults();
    if (seed_override >= 0) config.seed = static_cast<uint64_t>(seed_override);
    auto ds = std::make_shared<Dataset>(eex::generate(config));
    *out = new eex_dataset{std::move(ds)};
  });
}

eex_status eex_infer(const eex_dataset* dataset, eex_mode mode, const eex_params* params,
                     int threads, eex_result** out) {
  EEX_CHECK(dataset && out, "null argument");
  EEX_CHECK(mode == EEX_MODE_LP || mode == EEX_MODE_EDGEEXPLAIN, "unknown inference mode");
  return guarded([&] {
    const eex::ModelParams p = params ? params->p : eex::ModelParams{};
    auto result = eex::run_inference(dataset->ds->graph, dataset->ds->observed, p,
                                     to_mode(mode), threads);
    *out = new eex_result{dataset->ds, std::move(result)};
  });
}

void eex_result_free(eex_result* result) { delete result; }

int32_t eex_result_supersteps(const eex_result* result) {
  return result ? static_cast<int32_t>(result->r.reports.size()) : -1;
}

eex_status eex_result_superstep_stats(const eex_result* result, int32_t index,
                                      double* max_change, double* objective, double* millis,
                                      int64_t* messages) {
  EEX_CHECK(result, "null result");
  EEX_CHECK(index >= 0 && index < static_cast<int32_t>(result->r.reports.size()),
            "superstep index out of range");
  const eex::SuperstepReport& r = result->r.reports[index];
  if (max_change) *max_change = r.max_change;
  if (objective) *objective = r.objective;
  if (millis) *millis = r.millis;
  if (messages) *messages = r.messages;
  return EEX_OK;
}

eex_status eex_result_write_predictions(const eex_result* result, const char* path) {
  EEX_CHECK(result && path, "null argument");
  return guarded([&] {
    eex::write_predictions(result->r.beliefs, result->ds->graph, result->ds->schema, path);
  });
}

eex_status eex_result_write_trace(const eex_result* result, const char* path) {
  EEX_CHECK(result && path, "null argument");
  return guarded([&] { eex::write_trace(result->r.reports, path); });
}

eex_status eex_result_topk(const eex_result* result, const char* node, const char* type,
                           int capacity, const char** labels, double* probs, int* count) {
  EEX_CHECK(result && node && type && count, "null argument");
  EEX_CHECK(capacity >= 0, "negative capacity");
  const auto node_idx = result->ds->graph.find_node(node);
  if (!node_idx) return usage_error(std::string("unknown node '") + node + "'");
  const auto type_idx = result->ds->schema.find_type(type);
  if (!type_idx) return usage_error(std::string("unknown label type '") + type + "'");
  const eex::SparseVec ordering = eex::ranked(result->r.beliefs.dist(*node_idx, *type_idx));
  const int n = std::min<int>(capacity, static_cast<int>(ordering.size()));
  for (int i = 0; i < n; ++i) {
    if (labels) labels[i] = result->ds->schema.label_name(*type_idx, ordering[i].label).c_str();
    if (probs) probs[i] = ordering[i].value;
  }
  *count = n;
  return EEX_OK;
}

eex_status eex_evaluate_files(const char* predictions_path, const char* truth_path,
                              const char* exclude_labels_path, const int* ks, int num_ks,
                              const char* report_path) {
  EEX_CHECK(predictions_path && truth_path && report_path, "null argument");
  EEX_CHECK(ks && num_ks > 0, "need at least one recall cutoff");
  return guarded([&] {
    std::optional<std::filesystem::path> exclude;
    if (exclude_labels_path) exclude = exclude_labels_path;
    eex::evaluate_files(predictions_path, truth_path, exclude,
                        std::vector<int>(ks, ks + num_ks), report_path);
  });
}

eex_status eex_resolution_curve_files(const char* dataset_dir, const char* predictions_path,
                                      const char* truth_path, const char* type,
                                      const char* out_path) {
  EEX_CHECK(dataset_dir && predictions_path && truth_path && type && out_path, "null argument");
  return guarded([&] {
    eex::resolution_curve_files(dataset_dir, predictions_path, truth_path, type, out_path);
  });
}

eex_status eex_sweep(const char* config_path, int64_t seed_override, const char* param,
                     const double* values, int num_values, const eex_params* params,
                     eex_mode mode, int folds, int threads, const char* out_path) {
  EEX_CHECK(param && out_path, "null argument");
  EEX_CHECK(values && num_values > 0, "need at least one sweep value");
  return guarded([&] {
    eex::GeneratorConfig config = config_path
                                      ? eex::GeneratorConfig::from_toml_file(config_path)
                                      : eex::GeneratorConfig::defaults();
    if (seed_override >= 0) config.seed = static_cast<uint64_t>(seed_override);
    const eex::ModelParams p = params ? params->p : eex::ModelParams{};
    const auto rows = eex::run_sweep(config, param, std::vector<double>(values, values + num_values),
                                     p, to_mode(mode), folds, threads);
    eex::write_sweep(rows, out_path);
  });
}

}  // extern "C"
