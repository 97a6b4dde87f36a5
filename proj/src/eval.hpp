#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "engine.hpp"
#include "generator.hpp"

namespace eex {

// A (node, type) pair whose label was hidden from inference, with the label
// it should have produced.
struct HeldOutPair {
  int32_t node;
  int32_t type;
  int32_t label;
};

struct TypeMetrics {
  int64_t evaluable = 0;
  std::vector<int64_t> hits;  // aligned with the ks passed to recall_at_k
};

struct EvalReport {
  std::vector<int> ks;
  std::vector<TypeMetrics> per_type;

  double recall(int32_t type, size_t k_index) const {
    const TypeMetrics& m = per_type[type];
    return m.evaluable == 0 ? 0.0
                            : static_cast<double>(m.hits[k_index]) / m.evaluable;
  }
};

// Uniform random partition of the node set; fold sizes differ by at most
// one. Returns node -> fold.
std::vector<int32_t> make_folds(int64_t num_nodes, int folds, uint64_t seed);

// Counts, per type, how often the held-out label appears in the top-k
// prediction ranking (value desc, label index asc). Empty predictions are
// misses, not exclusions.
EvalReport recall_at_k(const BeliefState& beliefs, const std::vector<HeldOutPair>& held_out,
                       const std::vector<int>& ks, int32_t num_types);

// All (node, type) pairs with truth that are not observed in `observed`.
std::vector<HeldOutPair> hidden_truth_pairs(const Truth& truth, const ObservedLabels& observed);

struct CurveBucket {
  double lo = 0.0;
  double hi = 0.0;
  int64_t n = 0;
  double p_correct_at_3 = 0.0;
};

// For each held-out node of the given type: x = the fraction of its
// label-known neighbors (observed in the training view) sharing its true
// label, bucketed into deciles; y = P(truth in top-3). Nodes with no
// label-known neighbor are excluded.
std::vector<CurveBucket> resolution_curve(const Graph& graph, const ObservedLabels& observed,
                                          const BeliefState& beliefs,
                                          const std::vector<HeldOutPair>& held_out, int32_t type);

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Relative improvement (value - base) / base; 0 when the base is 0.
double lift(double value, double base);

struct SweepRow {
  std::string param;
  double value = 0.0;
  std::string type;
  double recall1 = 0.0;
  double recall3 = 0.0;
  double lift1 = 0.0;   // vs the first sweep value
  double lift3 = 0.0;
  double millis = 0.0;  // inference wall clock, summed over folds
};

// Runs generate -> (fold ->) infer -> eval per value of `param` ("alpha" or
// "K"), sharing the generator seed across values. folds == 1 scores against
// the generator-hidden truth; folds >= 2 runs cross-validation over the
// observed labels, hiding one fold at a time.
std::vector<SweepRow> run_sweep(const GeneratorConfig& base_config, const std::string& param,
                                const std::vector<double>& values, const ModelParams& params,
                                Mode mode, int folds, int threads);

// --- file-level scoring used by the CLI (string label comparison) ---

void write_report(const EvalReport& report, const LabelSchema& schema,
                  const std::filesystem::path& path);
void write_curve(const std::vector<CurveBucket>& curve, const std::filesystem::path& path);
void write_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

// Scores a predictions file against a truth file. Pairs present in
// `exclude_labels` (typically the training-view labels.tsv) are skipped.
void evaluate_files(const std::filesystem::path& predictions, const std::filesystem::path& truth,
                    const std::optional<std::filesystem::path>& exclude_labels,
                    const std::vector<int>& ks, const std::filesystem::path& out);

void resolution_curve_files(const std::filesystem::path& dataset_dir,
                            const std::filesystem::path& predictions,
                            const std::filesystem::path& truth, const std::string& type,
                            const std::filesystem::path& out);

// predictions.tsv: node, type, rank (1-based), label, probability.
void write_predictions(const BeliefState& beliefs, const Graph& graph, const LabelSchema& schema,
                       const std::filesystem::path& path);

// trace.tsv: superstep, max_change, objective, millis, messages.
void write_trace(const std::vector<SuperstepReport>& reports, const std::filesystem::path& path);

}  // namespace eex
