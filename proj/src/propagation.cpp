#include "propagation.hpp"

#include <algorithm>

namespace eex {

double lp_energy(const Graph& graph, const BeliefState& state, int32_t type) {
  double total = 0.0;
  graph.for_each_edge([&](int32_t u, int32_t v, int64_t arc) {
    (void)arc;
    const SparseVec& a = state.dist(u, type);
    const SparseVec& b = state.dist(v, type);
    double sq = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j >= b.size() || (i < a.size() && a[i].label < b[j].label)) {
        sq += a[i].value * a[i].value;
        ++i;
      } else if (i >= a.size() || b[j].label < a[i].label) {
        sq += b[j].value * b[j].value;
        ++j;
      } else {
        const double d = a[i].value - b[j].value;
        sq += d * d;
        ++i;
        ++j;
      }
    }
    total += graph.edge_weight(u, v) * sq;
  });
  return 0.5 * total;
}

SparseVec lp_update(const Graph& graph, int32_t u, int32_t type, const BeliefState& snapshot,
                    int clip_size) {
  const auto nbrs = graph.neighbors(u);
  const auto weights = graph.edge_weights(u);

  double degree = 0.0;
  std::vector<int32_t> support;
  for (size_t i = 0; i < nbrs.size(); ++i) {
    const SparseVec& dist = snapshot.dist(nbrs[i], type);
    if (dist.empty()) continue;
    degree += weights[i];
    for (const Entry& e : dist) support.push_back(e.label);
  }
  if (degree <= 0.0) return {};

  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  std::vector<double> acc(support.size(), 0.0);
  for (size_t i = 0; i < nbrs.size(); ++i) {
    const SparseVec& dist = snapshot.dist(nbrs[i], type);
    for (const Entry& e : dist) {
      const size_t pos = std::lower_bound(support.begin(), support.end(), e.label) -
                         support.begin();
      acc[pos] += weights[i] * e.value;
    }
  }
  SparseVec out;
  out.reserve(support.size());
  for (size_t i = 0; i < support.size(); ++i) {
    out.push_back({support[i], acc[i] / degree});
  }
  return clip_top(out, clip_size);
}

}  // namespace eex
