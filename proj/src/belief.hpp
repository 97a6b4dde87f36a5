#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace eex {

// One coordinate of a sparse per-type vector: a label index and its value
// (a probability in distributions, an arbitrary real in gradients).
struct Entry {
  int32_t label;
  double value;
};

// Sparse vector over one type's label space, kept sorted by label index.
using SparseVec = std::vector<Entry>;

double sparse_dot(const SparseVec& a, const SparseVec& b);
double l1_distance(const SparseVec& a, const SparseVec& b);
double sum_values(const SparseVec& a);

// Keeps the k entries with the largest value (ties: smaller label index),
// restores label order, and rescales so the values sum to one.
SparseVec clip_top(const SparseVec& dist, int k);

// Entries ordered by descending value, ties broken by smaller label index.
// This is the ranking used everywhere predictions are reported.
SparseVec ranked(const SparseVec& dist);

// Publicly declared labels: at most one per (node, type) pair.
class ObservedLabels {
 public:
  ObservedLabels() = default;
  ObservedLabels(int32_t num_nodes, int32_t num_types)
      : num_nodes_(num_nodes),
        num_types_(num_types),
        labels_(static_cast<size_t>(num_nodes) * num_types, -1) {}

  int32_t get(int32_t node, int32_t type) const {
    return labels_[static_cast<size_t>(node) * num_types_ + type];
  }
  bool has(int32_t node, int32_t type) const { return get(node, type) >= 0; }

  void set(int32_t node, int32_t type, int32_t label) {
    auto& slot = labels_[static_cast<size_t>(node) * num_types_ + type];
    if (slot < 0 && label >= 0) ++count_;
    if (slot >= 0 && label < 0) --count_;
    slot = label;
  }

  void clear(int32_t node, int32_t type) { set(node, type, -1); }

  int32_t num_nodes() const { return num_nodes_; }
  int32_t num_types() const { return num_types_; }
  int64_t count() const { return count_; }

 private:
  int32_t num_nodes_ = 0;
  int32_t num_types_ = 0;
  std::vector<int32_t> labels_;
  int64_t count_ = 0;
};

// Per-node, per-type sparse probability distributions. Observed pairs are
// clamped to exact point masses and are never mutated by inference.
class BeliefState {
 public:
  BeliefState() = default;
  BeliefState(int32_t num_nodes, int32_t num_types)
      : num_nodes_(num_nodes),
        num_types_(num_types),
        dists_(static_cast<size_t>(num_nodes) * num_types),
        clamped_(static_cast<size_t>(num_nodes) * num_types, 0) {}

  static BeliefState from_observed(const ObservedLabels& observed);

  const SparseVec& dist(int32_t node, int32_t type) const {
    return dists_[slot(node, type)];
  }
  SparseVec& mutable_dist(int32_t node, int32_t type) { return dists_[slot(node, type)]; }

  // The node's distributions for all types, in type order.
  std::span<const SparseVec> node_view(int32_t node) const {
    return {dists_.data() + slot(node, 0), static_cast<size_t>(num_types_)};
  }
  std::span<const uint8_t> clamp_view(int32_t node) const {
    return {clamped_.data() + slot(node, 0), static_cast<size_t>(num_types_)};
  }

  bool clamped(int32_t node, int32_t type) const { return clamped_[slot(node, type)] != 0; }
  bool any_unclamped(int32_t node) const;

  int32_t num_nodes() const { return num_nodes_; }
  int32_t num_types() const { return num_types_; }

  // Total number of stored (node, type, entry) tuples.
  int64_t entry_count() const;

 private:
  size_t slot(int32_t node, int32_t type) const {
    return static_cast<size_t>(node) * num_types_ + type;
  }

  int32_t num_nodes_ = 0;
  int32_t num_types_ = 0;
  std::vector<SparseVec> dists_;
  std::vector<uint8_t> clamped_;
};

}  // namespace eex
