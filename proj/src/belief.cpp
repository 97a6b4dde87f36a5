#include "belief.hpp"

#include <algorithm>
#include <cmath>

namespace eex {

double sparse_dot(const SparseVec& a, const SparseVec& b) {
  double acc = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].label < b[j].label) {
      ++i;
    } else if (a[i].label > b[j].label) {
      ++j;
    } else {
      acc += a[i].value * b[j].value;
      ++i;
      ++j;
    }
  }
  return acc;
}

double l1_distance(const SparseVec& a, const SparseVec& b) {
  double acc = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].label < b[j].label) {
      acc += std::abs(a[i].value);
      ++i;
    } else if (a[i].label > b[j].label) {
      acc += std::abs(b[j].value);
      ++j;
    } else {
      acc += std::abs(a[i].value - b[j].value);
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) acc += std::abs(a[i].value);
  for (; j < b.size(); ++j) acc += std::abs(b[j].value);
  return acc;
}

double sum_values(const SparseVec& a) {
  double acc = 0.0;
  for (const Entry& e : a) acc += e.value;
  return acc;
}

SparseVec ranked(const SparseVec& dist) {
  SparseVec out = dist;
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.label < b.label;
  });
  return out;
}

SparseVec clip_top(const SparseVec& dist, int k) {
  if (static_cast<int>(dist.size()) <= k) {
    return dist;
  }
  SparseVec out = ranked(dist);
  out.resize(k);
  std::sort(out.begin(), out.end(),
            [](const Entry& a, const Entry& b) { return a.label < b.label; });
  const double total = sum_values(out);
  if (total > 0.0) {
    for (Entry& e : out) e.value /= total;
  }
  return out;
}

BeliefState BeliefState::from_observed(const ObservedLabels& observed) {
  BeliefState state(observed.num_nodes(), observed.num_types());
  for (int32_t u = 0; u < observed.num_nodes(); ++u) {
    for (int32_t t = 0; t < observed.num_types(); ++t) {
      const int32_t label = observed.get(u, t);
      if (label >= 0) {
        const size_t s = state.slot(u, t);
        state.dists_[s] = {{label, 1.0}};
        state.clamped_[s] = 1;
      }
    }
  }
  return state;
}

bool BeliefState::any_unclamped(int32_t node) const {
  for (int32_t t = 0; t < num_types_; ++t) {
    if (!clamped(node, t)) return true;
  }
  return false;
}

int64_t BeliefState::entry_count() const {
  int64_t total = 0;
  for (const SparseVec& d : dists_) total += static_cast<int64_t>(d.size());
  return total;
}

}  // namespace eex
