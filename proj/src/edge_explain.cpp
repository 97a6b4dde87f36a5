#include "edge_explain.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace eex {

void ModelParams::validate() const {
  if (!(alpha > 0.0)) throw UsageError("alpha must be positive");
  if (!std::isfinite(c)) throw UsageError("c must be finite");
  if (clip_size < 1) throw UsageError("clip size must be at least 1");
  if (inner_steps < 1) throw UsageError("inner steps must be at least 1");
  if (max_supersteps < 1) throw UsageError("superstep budget must be at least 1");
  if (!(tol > 0.0)) throw UsageError("tolerance must be positive");
}

StepPolicy parse_step_policy(const std::string& s) {
  if (s == "backtracking") return StepPolicy::kBacktracking;
  if (s == "lipschitz") return StepPolicy::kLipschitz;
  throw UsageError("unknown step policy '" + s + "' (expected backtracking|lipschitz)");
}

LipschitzRule parse_lipschitz_rule(const std::string& s) {
  if (s == "paper") return LipschitzRule::kPaper;
  if (s == "conservative") return LipschitzRule::kConservative;
  throw UsageError("unknown lipschitz rule '" + s + "' (expected paper|conservative)");
}

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  if (x >= 0.0) {
    return -std::log1p(std::exp(-x));
  }
  return x - std::log1p(std::exp(x));
}

double edge_logscore(std::span<const SparseVec> fu, std::span<const SparseVec> fv,
                     std::span<const double> type_weights, const ModelParams& params) {
  double total = 0.0;
  for (size_t t = 0; t < fu.size(); ++t) {
    total += edge_affinity(fu[t], fv[t], type_weights[t]);
  }
  return log_sigmoid(params.alpha * total + params.c);
}

double objective(const Graph& graph, const BeliefState& state, const ModelParams& params) {
  const int32_t num_types = state.num_types();
  std::vector<double> tw(num_types);
  double total = 0.0;
  graph.for_each_edge([&](int32_t u, int32_t v, int64_t arc) {
    for (int32_t t = 0; t < num_types; ++t) tw[t] = graph.type_weight(arc, t);
    total += edge_logscore(state.node_view(u), state.node_view(v), tw, params);
  });
  return total;
}

double node_objective(const Graph& graph, int32_t u, const BeliefState& snapshot,
                      std::span<const SparseVec> fu, const ModelParams& params) {
  const int32_t num_types = snapshot.num_types();
  std::vector<double> tw(num_types);
  const auto nbrs = graph.neighbors(u);
  double total = 0.0;
  for (size_t i = 0; i < nbrs.size(); ++i) {
    const int64_t arc = graph.arc(u, static_cast<int32_t>(i));
    for (int32_t t = 0; t < num_types; ++t) tw[t] = graph.type_weight(arc, t);
    total += edge_logscore(fu, snapshot.node_view(nbrs[i]), tw, params);
  }
  return total;
}

std::vector<SparseVec> node_gradient(const Graph& graph, int32_t u, const BeliefState& snapshot,
                                     std::span<const SparseVec> fu, const ModelParams& params) {
  const int32_t num_types = snapshot.num_types();
  const auto nbrs = graph.neighbors(u);
  std::vector<SparseVec> grad(num_types);
  if (nbrs.empty()) return grad;

  // Candidate support per type: all labels any neighbor carries.
  std::vector<std::vector<int32_t>> support(num_types);
  for (int32_t v : nbrs) {
    for (int32_t t = 0; t < num_types; ++t) {
      for (const Entry& e : snapshot.dist(v, t)) support[t].push_back(e.label);
    }
  }
  std::vector<std::vector<double>> acc(num_types);
  for (int32_t t = 0; t < num_types; ++t) {
    auto& s = support[t];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    acc[t].assign(s.size(), 0.0);
  }

  std::vector<double> tw(num_types);
  for (size_t i = 0; i < nbrs.size(); ++i) {
    const int32_t v = nbrs[i];
    const int64_t arc = graph.arc(u, static_cast<int32_t>(i));
    double score = params.c;
    for (int32_t t = 0; t < num_types; ++t) {
      tw[t] = graph.type_weight(arc, t);
      score += params.alpha * edge_affinity(fu[t], snapshot.dist(v, t), tw[t]);
    }
    const double coeff = params.alpha * sigmoid(-score);
    for (int32_t t = 0; t < num_types; ++t) {
      const double scale = coeff * tw[t];
      for (const Entry& e : snapshot.dist(v, t)) {
        const auto& s = support[t];
        const size_t pos = std::lower_bound(s.begin(), s.end(), e.label) - s.begin();
        acc[t][pos] += scale * e.value;
      }
    }
  }
  for (int32_t t = 0; t < num_types; ++t) {
    grad[t].reserve(support[t].size());
    for (size_t i = 0; i < support[t].size(); ++i) {
      grad[t].push_back({support[t][i], acc[t][i]});
    }
  }
  return grad;
}

SparseVec project_simplex(const SparseVec& v) {
  if (v.empty()) {
    throw UsageError("cannot project an empty vector onto the simplex");
  }
  // Sort values descending, find the pivot rho, apply the common shift.
  std::vector<double> sorted;
  sorted.reserve(v.size());
  for (const Entry& e : v) sorted.push_back(e.value);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double prefix = 0.0;
  double theta = 0.0;
  size_t rho = 0;
  for (size_t j = 0; j < sorted.size(); ++j) {
    prefix += sorted[j];
    const double candidate = (prefix - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) {
      rho = j + 1;
      theta = candidate;
    }
  }
  (void)rho;
  SparseVec out;
  out.reserve(v.size());
  for (const Entry& e : v) {
    const double val = e.value - theta;
    if (val > 0.0) out.push_back({e.label, val});
  }
  return out;
}

SparseVec project_simplex_ksparse(const SparseVec& v, int k) {
  if (k < 1) throw UsageError("k must be at least 1");
  if (static_cast<int>(v.size()) <= k) {
    return project_simplex(v);
  }
  SparseVec top = ranked(v);
  top.resize(k);
  std::sort(top.begin(), top.end(),
            [](const Entry& a, const Entry& b) { return a.label < b.label; });
  return project_simplex(top);
}

double lipschitz_constant(const ModelParams& params, int32_t degree) {
  const double base = params.lipschitz_rule == LipschitzRule::kPaper
                          ? params.alpha
                          : std::max(params.alpha, params.alpha * params.alpha / 4.0);
  return base * std::max<int32_t>(degree, 1);
}

namespace {

// f_u + step * grad, merged over the union support.
SparseVec gradient_step(const SparseVec& fu, const SparseVec& grad, double step) {
  SparseVec out;
  out.reserve(fu.size() + grad.size());
  size_t i = 0, j = 0;
  while (i < fu.size() || j < grad.size()) {
    if (j >= grad.size() || (i < fu.size() && fu[i].label < grad[j].label)) {
      out.push_back(fu[i]);
      ++i;
    } else if (i >= fu.size() || grad[j].label < fu[i].label) {
      out.push_back({grad[j].label, step * grad[j].value});
      ++j;
    } else {
      out.push_back({fu[i].label, fu[i].value + step * grad[j].value});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

std::vector<SparseVec> solve_node(const Graph& graph, int32_t u, const BeliefState& snapshot,
                                  std::span<const SparseVec> fu, std::span<const uint8_t> clamped,
                                  const ModelParams& params, std::vector<double>* inner_trace) {
  const int32_t num_types = snapshot.num_types();
  std::vector<SparseVec> current(fu.begin(), fu.end());
  bool all_clamped = true;
  for (int32_t t = 0; t < num_types; ++t) all_clamped &= clamped[t] != 0;
  if (all_clamped || graph.degree(u) == 0) {
    if (inner_trace) inner_trace->push_back(node_objective(graph, u, snapshot, current, params));
    return current;
  }

  // A starting point wider than the clip budget is first forced onto the
  // k-sparse simplex so every exit path satisfies the support invariant.
  for (int32_t t = 0; t < num_types; ++t) {
    if (!clamped[t] && static_cast<int>(current[t].size()) > params.clip_size) {
      current[t] = project_simplex_ksparse(current[t], params.clip_size);
    }
  }

  const double lipschitz = lipschitz_constant(params, graph.degree(u));
  double g_current = node_objective(graph, u, snapshot, current, params);
  if (inner_trace) inner_trace->push_back(g_current);

  const auto propose = [&](const std::vector<SparseVec>& grad, double step,
                           std::vector<SparseVec>& trial) {
    for (int32_t t = 0; t < num_types; ++t) {
      if (clamped[t]) {
        trial[t] = current[t];
        continue;
      }
      SparseVec q = gradient_step(current[t], grad[t], step);
      trial[t] = q.empty() ? SparseVec{} : project_simplex_ksparse(q, params.clip_size);
    }
  };

  std::vector<SparseVec> trial(num_types);
  std::vector<SparseVec> probe(num_types);
  for (int step_index = 0; step_index < params.inner_steps; ++step_index) {
    const auto grad = node_gradient(graph, u, snapshot, current, params);
    if (params.step_policy == StepPolicy::kLipschitz) {
      propose(grad, 1.0 / lipschitz, trial);
      current = trial;
      if (inner_trace) {
        inner_trace->push_back(node_objective(graph, u, snapshot, current, params));
      }
      continue;
    }
    // Backtracking with expansion: from 1/L, grow the step while the local
    // objective keeps improving, shrink while it does not. Only ascent is
    // ever accepted, so the trace is non-decreasing no matter how rough the
    // Lipschitz estimate is.
    double step = 1.0 / lipschitz;
    propose(grad, step, trial);
    double g_trial = node_objective(graph, u, snapshot, trial, params);
    bool accepted = false;
    if (g_trial >= g_current) {
      accepted = true;
      for (int expansion = 0; expansion < 40; ++expansion) {
        propose(grad, step * 2.0, probe);
        const double g_probe = node_objective(graph, u, snapshot, probe, params);
        if (g_probe <= g_trial) break;
        std::swap(trial, probe);
        g_trial = g_probe;
        step *= 2.0;
      }
    } else {
      for (int halving = 0; halving < 60; ++halving) {
        step *= 0.5;
        propose(grad, step, trial);
        g_trial = node_objective(graph, u, snapshot, trial, params);
        if (g_trial >= g_current) {
          accepted = true;
          break;
        }
      }
    }
    if (accepted) {
      g_current = g_trial;
      current = trial;
    }
    // else: no ascent step found, keep the current point.
    if (inner_trace) inner_trace->push_back(g_current);
  }
  return current;
}

}  // namespace eex
