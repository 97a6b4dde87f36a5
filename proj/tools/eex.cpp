// eex — command-line front end for the EdgeExplain shared library.
//
// Subcommands: generate, sparsify, infer, evaluate, sweep, resolution-curve.
// Exit codes: 0 success, 1 usage error, 2 data error. Diagnostics go to
// stderr; progress goes to stdout unless --quiet.

#include <cstdarg>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edgeexplain.h"

namespace {

struct ParamFlags {
  double alpha = 10.0;
  double c = 0.0;
  int clip = 8;
  int inner_steps = 1;
  int max_supersteps = 30;
  double tol = 1e-4;
  std::string step_policy = "backtracking";
  std::string lipschitz_rule = "paper";

  void attach(CLI::App* cmd) {
    cmd->add_option("--alpha", alpha, "Explanation sharpness (> 0)");
    cmd->add_option("--c", c, "Unmodeled-reason offset");
    cmd->add_option("--clip", clip, "Max entries kept per distribution");
    cmd->add_option("--inner-steps", inner_steps, "Proximal steps per superstep");
    cmd->add_option("--max-supersteps", max_supersteps, "Superstep budget");
    cmd->add_option("--tol", tol, "L1 convergence tolerance");
    cmd->add_option("--step-policy", step_policy, "backtracking|lipschitz");
    cmd->add_option("--lipschitz-rule", lipschitz_rule, "paper|conservative");
  }
};

struct ParamsHandle {
  eex_params* p = nullptr;
  ~ParamsHandle() { eex_params_free(p); }
};

struct DatasetHandle {
  eex_dataset* d = nullptr;
  ~DatasetHandle() { eex_dataset_free(d); }
};

struct ResultHandle {
  eex_result* r = nullptr;
  ~ResultHandle() { eex_result_free(r); }
};

int fail(eex_status status) {
  std::fprintf(stderr, "eex: %s\n", eex_last_error());
  return status == EEX_ERR_USAGE ? 1 : 2;
}

bool quiet = false;

void progress(const char* fmt, ...) {
  if (quiet) return;
  va_list args;
  va_start(args, fmt);
  std::vprintf(fmt, args);
  va_end(args);
  std::printf("\n");
}

#define TRY(call)                                   \
  do {                                              \
    const eex_status status_ = (call);              \
    if (status_ != EEX_OK) return fail(status_);    \
  } while (0)

int build_params(const ParamFlags& flags, ParamsHandle& out) {
  out.p = eex_params_new();
  if (!out.p) {
    std::fprintf(stderr, "eex: out of memory\n");
    return 2;
  }
  TRY(eex_params_set_alpha(out.p, flags.alpha));
  TRY(eex_params_set_c(out.p, flags.c));
  TRY(eex_params_set_clip(out.p, flags.clip));
  TRY(eex_params_set_inner_steps(out.p, flags.inner_steps));
  TRY(eex_params_set_max_supersteps(out.p, flags.max_supersteps));
  TRY(eex_params_set_tol(out.p, flags.tol));
  TRY(eex_params_set_step_policy(out.p, flags.step_policy.c_str()));
  TRY(eex_params_set_lipschitz_rule(out.p, flags.lipschitz_rule.c_str()));
  return 0;
}

int parse_mode(const std::string& mode, eex_mode& out) {
  if (mode == "lp") {
    out = EEX_MODE_LP;
    return 0;
  }
  if (mode == "edgeexplain") {
    out = EEX_MODE_EDGEEXPLAIN;
    return 0;
  }
  std::fprintf(stderr, "eex: unknown mode '%s' (expected lp|edgeexplain)\n", mode.c_str());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EdgeExplain: joint multi-type label inference on graphs"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.add_flag("--quiet", quiet, "Suppress progress output");

  int exit_code = 0;

  // generate
  {
    auto* cmd = app.add_subcommand("generate", "Generate a planted-truth graph");
    auto config = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto seed = std::make_shared<long long>(-1);
    cmd->add_option("--config", *config, "Generator TOML config")->required();
    cmd->add_option("--out", *out_dir, "Output directory")->required();
    cmd->add_option("--seed", *seed, "Override the config seed");
    cmd->callback([=, &exit_code] {
      DatasetHandle ds;
      exit_code = [&]() -> int {
        TRY(eex_generate(config->c_str(), *seed, &ds.d));
        TRY(eex_dataset_save(ds.d, out_dir->c_str()));
        progress("generated %lld nodes, %lld edges, %d label types -> %s",
                 (long long)eex_dataset_nodes(ds.d), (long long)eex_dataset_edges(ds.d),
                 (int)eex_dataset_types(ds.d), out_dir->c_str());
        return 0;
      }();
    });
  }

  // sparsify
  {
    auto* cmd = app.add_subcommand("sparsify", "Keep each user's K age-closest friends");
    auto in_dir = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto k = std::make_shared<int>(0);
    cmd->add_option("--in", *in_dir, "Input directory")->required();
    cmd->add_option("--out", *out_dir, "Output directory")->required();
    cmd->add_option("--k", *k, "Friends retained per user")->required();
    cmd->callback([=, &exit_code] {
      DatasetHandle ds, sparse;
      exit_code = [&]() -> int {
        TRY(eex_dataset_load(in_dir->c_str(), &ds.d));
        TRY(eex_dataset_sparsify_age(ds.d, *k, &sparse.d));
        TRY(eex_dataset_save(sparse.d, out_dir->c_str()));
        progress("sparsified %lld -> %lld edges (K=%d) -> %s",
                 (long long)eex_dataset_edges(ds.d), (long long)eex_dataset_edges(sparse.d), *k,
                 out_dir->c_str());
        return 0;
      }();
    });
  }

  // infer
  {
    auto* cmd = app.add_subcommand("infer", "Run inference and write ranked predictions");
    auto in_dir = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto trace_path = std::make_shared<std::string>();
    auto mode_name = std::make_shared<std::string>("edgeexplain");
    auto threads = std::make_shared<int>(1);
    auto flags = std::make_shared<ParamFlags>();
    cmd->add_option("--in", *in_dir, "Input directory")->required();
    cmd->add_option("--out", *out_path, "Predictions TSV path")->required();
    cmd->add_option("--mode", *mode_name, "lp|edgeexplain");
    cmd->add_option("--threads", *threads, "Worker count (results are identical)");
    cmd->add_option("--trace", *trace_path, "Superstep log TSV path");
    flags->attach(cmd);
    cmd->callback([=, &exit_code] {
      exit_code = [&]() -> int {
        eex_mode mode;
        if (int rc = parse_mode(*mode_name, mode)) return rc;
        ParamsHandle params;
        if (int rc = build_params(*flags, params)) return rc;
        DatasetHandle ds;
        TRY(eex_dataset_load(in_dir->c_str(), &ds.d));
        ResultHandle result;
        TRY(eex_infer(ds.d, mode, params.p, *threads, &result.r));
        TRY(eex_result_write_predictions(result.r, out_path->c_str()));
        if (!trace_path->empty()) {
          TRY(eex_result_write_trace(result.r, trace_path->c_str()));
        }
        double change = 0.0;
        const int steps = eex_result_supersteps(result.r);
        if (steps > 0) {
          eex_result_superstep_stats(result.r, steps - 1, &change, nullptr, nullptr, nullptr);
        }
        progress("%s inference: %d supersteps, final max change %.3g -> %s", mode_name->c_str(),
                 steps, change, out_path->c_str());
        return 0;
      }();
    });
  }

  // evaluate
  {
    auto* cmd = app.add_subcommand("evaluate", "Score predictions against truth");
    auto pred = std::make_shared<std::string>();
    auto truth = std::make_shared<std::string>();
    auto labels = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto ks = std::make_shared<std::vector<int>>(std::vector<int>{1, 3});
    cmd->add_option("--pred", *pred, "Predictions TSV")->required();
    cmd->add_option("--truth", *truth, "Truth TSV (node, type, label)")->required();
    cmd->add_option("--labels", *labels,
                    "Training-view labels.tsv; pairs observed there are skipped");
    cmd->add_option("--k", *ks, "Recall cutoffs")->delimiter(',');
    cmd->add_option("--out", *out_path, "Report TSV path")->required();
    cmd->callback([=, &exit_code] {
      exit_code = [&]() -> int {
        TRY(eex_evaluate_files(pred->c_str(), truth->c_str(),
                               labels->empty() ? nullptr : labels->c_str(), ks->data(),
                               (int)ks->size(), out_path->c_str()));
        progress("report -> %s", out_path->c_str());
        return 0;
      }();
    });
  }

  // sweep
  {
    auto* cmd = app.add_subcommand("sweep", "Generate/infer/evaluate over alpha or K values");
    auto param = std::make_shared<std::string>();
    auto values = std::make_shared<std::vector<double>>();
    auto config = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto mode_name = std::make_shared<std::string>("edgeexplain");
    auto folds = std::make_shared<int>(1);
    auto threads = std::make_shared<int>(1);
    auto seed = std::make_shared<long long>(-1);
    auto flags = std::make_shared<ParamFlags>();
    cmd->add_option("--param", *param, "alpha|K")->required();
    cmd->add_option("--values", *values, "Sweep values")->required()->delimiter(',');
    cmd->add_option("--config", *config, "Generator TOML config (defaults when omitted)");
    cmd->add_option("--seed", *seed, "Override the config seed");
    cmd->add_option("--mode", *mode_name, "lp|edgeexplain");
    cmd->add_option("--folds", *folds,
                    "1 = score generator-hidden truth; >= 2 = cross-validation");
    cmd->add_option("--threads", *threads, "Worker count");
    cmd->add_option("--out", *out_path, "Sweep TSV path")->required();
    flags->attach(cmd);
    cmd->callback([=, &exit_code] {
      exit_code = [&]() -> int {
        eex_mode mode;
        if (int rc = parse_mode(*mode_name, mode)) return rc;
        ParamsHandle params;
        if (int rc = build_params(*flags, params)) return rc;
        TRY(eex_sweep(config->empty() ? nullptr : config->c_str(), *seed, param->c_str(),
                      values->data(), (int)values->size(), params.p, mode, *folds, *threads,
                      out_path->c_str()));
        progress("sweep over %s (%zu values) -> %s", param->c_str(), values->size(),
                 out_path->c_str());
        return 0;
      }();
    });
  }

  // resolution-curve
  {
    auto* cmd = app.add_subcommand("resolution-curve",
                                   "P(correct@3) by shared-neighbor fraction decile");
    auto in_dir = std::make_shared<std::string>();
    auto pred = std::make_shared<std::string>();
    auto truth = std::make_shared<std::string>();
    auto type = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--in", *in_dir, "Training-view dataset directory")->required();
    cmd->add_option("--pred", *pred, "Predictions TSV")->required();
    cmd->add_option("--truth", *truth, "Truth TSV")->required();
    cmd->add_option("--type", *type, "Label type")->required();
    cmd->add_option("--out", *out_path, "Curve TSV path")->required();
    cmd->callback([=, &exit_code] {
      exit_code = [&]() -> int {
        TRY(eex_resolution_curve_files(in_dir->c_str(), pred->c_str(), truth->c_str(),
                                       type->c_str(), out_path->c_str()));
        progress("curve for %s -> %s", type->c_str(), out_path->c_str());
        return 0;
      }();
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return exit_code;
}
