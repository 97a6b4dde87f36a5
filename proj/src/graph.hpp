#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace eex {

enum class NodeKind : uint8_t { kUser = 0, kGroup = 1 };

inline constexpr int32_t kNoAge = std::numeric_limits<int32_t>::min();

inline uint64_t edge_key(int32_t u, int32_t v) {
  const uint32_t lo = static_cast<uint32_t>(u < v ? u : v);
  const uint32_t hi = static_cast<uint32_t>(u < v ? v : u);
  return (static_cast<uint64_t>(lo) << 32) | hi;
}

// Immutable undirected graph: compressed sorted adjacency, per-edge weights,
// optional per-edge-per-type weight multipliers, node ages and kinds, and the
// external-id <-> dense-index map. Safe to share across workers.
class Graph {
 public:
  int32_t num_nodes() const { return static_cast<int32_t>(offsets_.size()) - 1; }
  int64_t num_edges() const { return num_edges_; }

  std::span<const int32_t> neighbors(int32_t u) const {
    return {adj_.data() + offsets_[u], static_cast<size_t>(offsets_[u + 1] - offsets_[u])};
  }
  std::span<const double> edge_weights(int32_t u) const {
    return {weights_.data() + offsets_[u], static_cast<size_t>(offsets_[u + 1] - offsets_[u])};
  }
  int32_t degree(int32_t u) const { return static_cast<int32_t>(offsets_[u + 1] - offsets_[u]); }

  // Index into the arc arrays for neighbor position i of node u.
  int64_t arc(int32_t u, int32_t i) const { return offsets_[u] + i; }

  // Effective weight of an arc for one label type: scalar edge weight times
  // the per-type multiplier (1 when no multiplier file was given).
  double type_weight(int64_t arc_index, int32_t type) const {
    const double w = weights_[arc_index];
    if (type_mult_.empty()) return w;
    return w * type_mult_[static_cast<size_t>(arc_index) * mult_types_ + type];
  }
  bool has_type_multipliers() const { return !type_mult_.empty(); }
  int32_t mult_types() const { return mult_types_; }

  const std::string& node_id(int32_t u) const { return ids_[u]; }
  std::optional<int32_t> find_node(const std::string& id) const {
    auto it = id_index_.find(id);
    if (it == id_index_.end()) return std::nullopt;
    return it->second;
  }

  NodeKind kind(int32_t u) const { return kinds_[u]; }
  bool has_age(int32_t u) const { return ages_[u] != kNoAge; }
  int32_t age(int32_t u) const { return ages_[u]; }

  bool has_edge(int32_t u, int32_t v) const;
  double edge_weight(int32_t u, int32_t v) const;  // 0 when absent

  // Calls fn(u, v, arc_index) once per undirected edge, with u < v, in
  // deterministic (u, v) order.
  template <typename F>
  void for_each_edge(F&& fn) const {
    for (int32_t u = 0; u < num_nodes(); ++u) {
      const auto nbrs = neighbors(u);
      for (size_t i = 0; i < nbrs.size(); ++i) {
        if (nbrs[i] > u) fn(u, nbrs[i], offsets_[u] + static_cast<int64_t>(i));
      }
    }
  }

 private:
  friend class GraphBuilder;
  std::vector<int64_t> offsets_;
  std::vector<int32_t> adj_;
  std::vector<double> weights_;
  std::vector<double> type_mult_;  // arcs x mult_types_, or empty
  int32_t mult_types_ = 0;
  int64_t num_edges_ = 0;
  std::vector<int32_t> ages_;
  std::vector<NodeKind> kinds_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int32_t> id_index_;
};

// Accumulates nodes and edges during ingestion or generation, then builds
// the compressed representation. Duplicate edges collapse; callers are
// expected to have rejected conflicts first (see the query methods).
class GraphBuilder {
 public:
  // Get-or-create; first-seen order fixes the dense numbering.
  int32_t add_node(const std::string& id, NodeKind kind = NodeKind::kUser);
  std::optional<int32_t> find_node(const std::string& id) const;
  NodeKind kind(int32_t u) const { return kinds_[u]; }

  void add_edge(int32_t u, int32_t v, double weight);
  std::optional<double> edge_weight(int32_t u, int32_t v) const;

  void set_age(int32_t u, int32_t age) { ages_[u] = age; }
  bool has_age(int32_t u) const { return ages_[u] != kNoAge; }
  int32_t age(int32_t u) const { return ages_[u]; }

  void set_type_multiplier(int32_t u, int32_t v, int32_t type, double value);
  std::optional<double> type_multiplier(int32_t u, int32_t v, int32_t type) const;

  int32_t num_nodes() const { return static_cast<int32_t>(ids_.size()); }
  int64_t num_edges() const { return static_cast<int64_t>(edges_.size()); }

  // num_types is needed to lay out the multiplier table; pass 0 when no
  // multipliers were set.
  Graph build(int32_t num_types) const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int32_t> id_index_;
  std::vector<NodeKind> kinds_;
  std::vector<int32_t> ages_;
  std::unordered_map<uint64_t, double> edges_;
  std::unordered_map<uint64_t, std::unordered_map<int32_t, double>> type_mult_;
};

// Keeps edge u-v iff u nominates v or v nominates u, where each user node
// nominates its min(K, degree) user neighbors closest in age. Group-member
// edges are always retained. Ties break toward the smaller external id;
// neighbors without a comparable age rank after all age-ranked ones.
Graph sparsify_by_age(const Graph& graph, int k);

}  // namespace eex
