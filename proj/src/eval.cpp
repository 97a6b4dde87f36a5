#include "eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "errors.hpp"
#include "rng.hpp"
#include "tsv.hpp"

namespace eex {

std::vector<int32_t> make_folds(int64_t num_nodes, int folds, uint64_t seed) {
  if (folds < 2) throw UsageError("need at least 2 folds");
  if (folds > num_nodes) throw UsageError("more folds than nodes");
  std::vector<int32_t> order(num_nodes);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<int32_t> fold(num_nodes);
  for (int64_t i = 0; i < num_nodes; ++i) {
    fold[order[i]] = static_cast<int32_t>(i % folds);
  }
  return fold;
}

EvalReport recall_at_k(const BeliefState& beliefs, const std::vector<HeldOutPair>& held_out,
                       const std::vector<int>& ks, int32_t num_types) {
  for (int k : ks) {
    if (k < 1) throw UsageError("recall cutoff must be at least 1");
  }
  EvalReport report;
  report.ks = ks;
  report.per_type.resize(num_types);
  for (TypeMetrics& m : report.per_type) m.hits.assign(ks.size(), 0);

  for (const HeldOutPair& pair : held_out) {
    TypeMetrics& m = report.per_type[pair.type];
    ++m.evaluable;
    const SparseVec ordering = ranked(beliefs.dist(pair.node, pair.type));
    for (size_t ki = 0; ki < ks.size(); ++ki) {
      const size_t limit = std::min<size_t>(ordering.size(), static_cast<size_t>(ks[ki]));
      for (size_t r = 0; r < limit; ++r) {
        if (ordering[r].label == pair.label) {
          ++m.hits[ki];
          break;
        }
      }
    }
  }
  return report;
}

std::vector<HeldOutPair> hidden_truth_pairs(const Truth& truth, const ObservedLabels& observed) {
  std::vector<HeldOutPair> out;
  for (int32_t u = 0; u < observed.num_nodes(); ++u) {
    for (int32_t t = 0; t < observed.num_types(); ++t) {
      const int32_t label = truth.get(u, t);
      if (label >= 0 && !observed.has(u, t)) out.push_back({u, t, label});
    }
  }
  return out;
}

std::vector<CurveBucket> resolution_curve(const Graph& graph, const ObservedLabels& observed,
                                          const BeliefState& beliefs,
                                          const std::vector<HeldOutPair>& held_out,
                                          int32_t type) {
  std::vector<CurveBucket> buckets(10);
  for (int i = 0; i < 10; ++i) {
    buckets[i].lo = i / 10.0;
    buckets[i].hi = (i + 1) / 10.0;
  }
  std::vector<int64_t> correct(10, 0);
  for (const HeldOutPair& pair : held_out) {
    if (pair.type != type) continue;
    int64_t known = 0, sharing = 0;
    for (int32_t v : graph.neighbors(pair.node)) {
      const int32_t label = observed.get(v, type);
      if (label < 0) continue;
      ++known;
      if (label == pair.label) ++sharing;
    }
    if (known == 0) continue;
    const double x = static_cast<double>(sharing) / static_cast<double>(known);
    int b = static_cast<int>(x * 10.0);
    if (b > 9) b = 9;  // x == 1 joins the last bucket
    ++buckets[b].n;
    const SparseVec ordering = ranked(beliefs.dist(pair.node, type));
    const size_t limit = std::min<size_t>(ordering.size(), 3);
    for (size_t r = 0; r < limit; ++r) {
      if (ordering[r].label == pair.label) {
        ++correct[b];
        break;
      }
    }
  }
  for (int i = 0; i < 10; ++i) {
    buckets[i].p_correct_at_3 =
        buckets[i].n == 0 ? 0.0 : static_cast<double>(correct[i]) / buckets[i].n;
  }
  return buckets;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  return rank;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw UsageError("spearman needs two equally sized series of length >= 2");
  }
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    cov += (rx[i] - mx) * (ry[i] - my);
    vx += (rx[i] - mx) * (rx[i] - mx);
    vy += (ry[i] - my) * (ry[i] - my);
  }
  if (vx == 0.0 || vy == 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

double lift(double value, double base) { return base == 0.0 ? 0.0 : (value - base) / base; }

namespace {

struct RunOutcome {
  EvalReport report;
  double millis = 0.0;
};

RunOutcome run_once(const Dataset& ds, const ModelParams& params, Mode mode, int folds,
                    int threads, uint64_t seed) {
  const int32_t num_types = ds.schema.num_types();
  RunOutcome outcome;
  if (folds <= 1) {
    const auto started = std::chrono::steady_clock::now();
    const InferenceResult result = run_inference(ds.graph, ds.observed, params, mode, threads);
    outcome.millis = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    const auto held_out = hidden_truth_pairs(*ds.truth, ds.observed);
    outcome.report = recall_at_k(result.beliefs, held_out, {1, 3}, num_types);
    return outcome;
  }

  const auto fold_of = make_folds(ds.graph.num_nodes(), folds, seed);
  EvalReport total;
  total.ks = {1, 3};
  total.per_type.resize(num_types);
  for (TypeMetrics& m : total.per_type) m.hits.assign(2, 0);
  for (int fold = 0; fold < folds; ++fold) {
    ObservedLabels training = ds.observed;
    std::vector<HeldOutPair> held_out;
    for (int32_t u = 0; u < ds.graph.num_nodes(); ++u) {
      if (fold_of[u] != fold) continue;
      for (int32_t t = 0; t < num_types; ++t) {
        const int32_t label = ds.observed.get(u, t);
        if (label < 0) continue;
        training.clear(u, t);
        held_out.push_back({u, t, label});
      }
    }
    const auto started = std::chrono::steady_clock::now();
    const InferenceResult result = run_inference(ds.graph, training, params, mode, threads);
    outcome.millis += std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - started)
                          .count();
    const EvalReport part = recall_at_k(result.beliefs, held_out, {1, 3}, num_types);
    for (int32_t t = 0; t < num_types; ++t) {
      total.per_type[t].evaluable += part.per_type[t].evaluable;
      for (size_t ki = 0; ki < 2; ++ki) total.per_type[t].hits[ki] += part.per_type[t].hits[ki];
    }
  }
  outcome.report = std::move(total);
  return outcome;
}

}  // namespace

std::vector<SweepRow> run_sweep(const GeneratorConfig& base_config, const std::string& param,
                                const std::vector<double>& values, const ModelParams& params,
                                Mode mode, int folds, int threads) {
  if (values.empty()) throw UsageError("sweep needs at least one value");
  if (param != "alpha" && param != "K") {
    throw UsageError("unknown sweep parameter '" + param + "' (expected alpha|K)");
  }
  const Dataset base = generate(base_config);

  std::vector<SweepRow> rows;
  std::vector<double> base_recall1, base_recall3;
  for (size_t vi = 0; vi < values.size(); ++vi) {
    ModelParams run_params = params;
    Dataset run_ds;
    const Dataset* ds = &base;
    if (param == "alpha") {
      run_params.alpha = values[vi];
    } else {
      const int k = static_cast<int>(values[vi]);
      if (k < 1 || static_cast<double>(k) != values[vi]) {
        throw UsageError("K sweep values must be positive integers");
      }
      run_ds = base;
      run_ds.graph = sparsify_by_age(base.graph, k);
      ds = &run_ds;
    }
    const RunOutcome outcome =
        run_once(*ds, run_params, mode, folds, threads, base_config.seed);
    for (int32_t t = 0; t < base.schema.num_types(); ++t) {
      SweepRow row;
      row.param = param;
      row.value = values[vi];
      row.type = base.schema.type_name(t);
      row.recall1 = outcome.report.recall(t, 0);
      row.recall3 = outcome.report.recall(t, 1);
      if (vi == 0) {
        base_recall1.push_back(row.recall1);
        base_recall3.push_back(row.recall3);
      }
      row.lift1 = lift(row.recall1, base_recall1[t]);
      row.lift3 = lift(row.recall3, base_recall3[t]);
      row.millis = outcome.millis;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_report(const EvalReport& report, const LabelSchema& schema,
                  const std::filesystem::path& path) {
  TsvWriter w(path);
  for (int32_t t = 0; t < static_cast<int32_t>(report.per_type.size()); ++t) {
    const std::string& name = schema.type_name(t);
    for (size_t ki = 0; ki < report.ks.size(); ++ki) {
      w.field(name);
      w.field("recall@" + std::to_string(report.ks[ki]));
      w.field(report.recall(t, ki), "%.6f");
      w.end_row();
    }
    w.field(name);
    w.field("evaluable");
    w.field(report.per_type[t].evaluable);
    w.end_row();
  }
}

void write_curve(const std::vector<CurveBucket>& curve, const std::filesystem::path& path) {
  TsvWriter w(path);
  for (const CurveBucket& b : curve) {
    w.field(b.lo, "%.1f");
    w.field(b.hi, "%.1f");
    w.field(b.n);
    w.field(b.p_correct_at_3, "%.6f");
    w.end_row();
  }
}

void write_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  TsvWriter w(path);
  for (const SweepRow& r : rows) {
    w.field(r.param);
    w.field(r.value, "%.6g");
    w.field(r.type);
    w.field(r.recall1, "%.6f");
    w.field(r.recall3, "%.6f");
    w.field(r.lift1, "%.6f");
    w.field(r.lift3, "%.6f");
    w.field(r.millis, "%.3f");
    w.end_row();
  }
}

void write_predictions(const BeliefState& beliefs, const Graph& graph, const LabelSchema& schema,
                       const std::filesystem::path& path) {
  TsvWriter w(path);
  for (int32_t u = 0; u < graph.num_nodes(); ++u) {
    for (int32_t t = 0; t < schema.num_types(); ++t) {
      const SparseVec ordering = ranked(beliefs.dist(u, t));
      for (size_t r = 0; r < ordering.size(); ++r) {
        w.field(graph.node_id(u));
        w.field(schema.type_name(t));
        w.field(static_cast<int64_t>(r + 1));
        w.field(schema.label_name(t, ordering[r].label));
        w.field(ordering[r].value);
        w.end_row();
      }
    }
  }
}

void write_trace(const std::vector<SuperstepReport>& reports,
                 const std::filesystem::path& path) {
  TsvWriter w(path);
  for (const SuperstepReport& r : reports) {
    w.field(static_cast<int64_t>(r.superstep));
    w.field(r.max_change, "%.9g");
    w.field(r.objective, "%.12g");
    w.field(r.millis, "%.3f");
    w.field(r.messages);
    w.end_row();
  }
}

namespace {

struct PredictionKey {
  std::string node;
  std::string type;
  bool operator<(const PredictionKey& o) const {
    if (node != o.node) return node < o.node;
    return type < o.type;
  }
};

std::map<PredictionKey, std::vector<std::string>> read_predictions(
    const std::filesystem::path& path) {
  std::map<PredictionKey, std::vector<std::pair<int64_t, std::string>>> raw;
  TsvReader reader(path);
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    if (f.size() != 5) reader.fail("expected node<TAB>type<TAB>rank<TAB>label<TAB>prob");
    const auto rank = parse_int(f[2]);
    if (!rank || *rank < 1) reader.fail("malformed rank '" + std::string(f[2]) + "'");
    if (!parse_double(f[4])) reader.fail("malformed probability '" + std::string(f[4]) + "'");
    raw[{std::string(f[0]), std::string(f[1])}].emplace_back(*rank, std::string(f[3]));
  }
  std::map<PredictionKey, std::vector<std::string>> out;
  for (auto& [key, entries] : raw) {
    std::sort(entries.begin(), entries.end());
    auto& labels = out[key];
    labels.reserve(entries.size());
    for (auto& [rank, label] : entries) labels.push_back(std::move(label));
  }
  return out;
}

}  // namespace

void evaluate_files(const std::filesystem::path& predictions, const std::filesystem::path& truth,
                    const std::optional<std::filesystem::path>& exclude_labels,
                    const std::vector<int>& ks, const std::filesystem::path& out) {
  for (int k : ks) {
    if (k < 1) throw UsageError("recall cutoff must be at least 1");
  }
  const auto preds = read_predictions(predictions);

  std::map<std::pair<std::string, std::string>, std::string> excluded;
  if (exclude_labels) {
    TsvReader reader(*exclude_labels);
    std::vector<std::string_view> f;
    while (reader.next(f)) {
      if (f.size() != 3) reader.fail("expected node<TAB>type<TAB>label");
      excluded[{std::string(f[0]), std::string(f[1])}] = std::string(f[2]);
    }
  }

  // Type order: first seen in the truth file.
  std::vector<std::string> type_order;
  std::map<std::string, size_t> type_index;
  struct Counts {
    int64_t evaluable = 0;
    std::vector<int64_t> hits;
  };
  std::vector<Counts> counts;

  TsvReader reader(truth);
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    if (f.size() != 3) reader.fail("expected node<TAB>type<TAB>label");
    const std::string node(f[0]);
    const std::string type(f[1]);
    const std::string label(f[2]);
    if (excluded.count({node, type})) continue;
    auto [it, inserted] = type_index.try_emplace(type, type_order.size());
    if (inserted) {
      type_order.push_back(type);
      counts.emplace_back();
      counts.back().hits.assign(ks.size(), 0);
    }
    Counts& c = counts[it->second];
    ++c.evaluable;
    auto pit = preds.find({node, type});
    if (pit == preds.end()) continue;
    for (size_t ki = 0; ki < ks.size(); ++ki) {
      const size_t limit = std::min<size_t>(pit->second.size(), static_cast<size_t>(ks[ki]));
      for (size_t r = 0; r < limit; ++r) {
        if (pit->second[r] == label) {
          ++c.hits[ki];
          break;
        }
      }
    }
  }

  TsvWriter w(out);
  for (size_t ti = 0; ti < type_order.size(); ++ti) {
    for (size_t ki = 0; ki < ks.size(); ++ki) {
      w.field(type_order[ti]);
      w.field("recall@" + std::to_string(ks[ki]));
      const double r = counts[ti].evaluable == 0
                           ? 0.0
                           : static_cast<double>(counts[ti].hits[ki]) / counts[ti].evaluable;
      w.field(r, "%.6f");
      w.end_row();
    }
    w.field(type_order[ti]);
    w.field("evaluable");
    w.field(counts[ti].evaluable);
    w.end_row();
  }
}

void resolution_curve_files(const std::filesystem::path& dataset_dir,
                            const std::filesystem::path& predictions,
                            const std::filesystem::path& truth, const std::string& type,
                            const std::filesystem::path& out) {
  Dataset ds = ingest_dir(dataset_dir);
  const auto type_idx = ds.schema.find_type(type);
  if (!type_idx) throw DataError("unknown label type '" + type + "'");

  const auto preds = read_predictions(predictions);

  // Rebuild a belief state holding just the top-3 predicted labels; that is
  // all the curve needs.
  BeliefState beliefs(ds.graph.num_nodes(), ds.schema.num_types());
  for (const auto& [key, labels] : preds) {
    const auto node = ds.graph.find_node(key.node);
    const auto t = ds.schema.find_type(key.type);
    if (!node || !t || *t != *type_idx) continue;
    SparseVec& dist = beliefs.mutable_dist(*node, *t);
    const size_t limit = std::min<size_t>(labels.size(), 3);
    for (size_t r = 0; r < limit; ++r) {
      const auto label = ds.schema.find_label(*t, labels[r]);
      if (!label) continue;
      // Descending fake probabilities preserve the file's ranking.
      dist.push_back({*label, 1.0 - 0.1 * static_cast<double>(r)});
    }
    std::sort(dist.begin(), dist.end(),
              [](const Entry& a, const Entry& b) { return a.label < b.label; });
  }

  std::vector<HeldOutPair> held_out;
  TsvReader reader(truth);
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    if (f.size() != 3) reader.fail("expected node<TAB>type<TAB>label");
    if (std::string(f[1]) != type) continue;
    const auto node = ds.graph.find_node(std::string(f[0]));
    if (!node) reader.fail("truth references unknown node '" + std::string(f[0]) + "'");
    if (ds.observed.has(*node, *type_idx)) continue;  // not held out
    const auto label = ds.schema.find_label(*type_idx, std::string(f[2]));
    // Labels never seen anywhere else cannot be predicted or shared; keep
    // the pair with an unmatchable sentinel so it still counts as a miss.
    held_out.push_back({*node, *type_idx, label ? *label : -2});
  }

  const auto curve = resolution_curve(ds.graph, ds.observed, beliefs, held_out, *type_idx);
  write_curve(curve, out);
}

}  // namespace eex
