#include "graph.hpp"

#include <algorithm>
#include <cstdlib>

#include "errors.hpp"

namespace eex {

bool Graph::has_edge(int32_t u, int32_t v) const {
  const auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

double Graph::edge_weight(int32_t u, int32_t v) const {
  const auto nbrs = neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return 0.0;
  return weights_[offsets_[u] + (it - nbrs.begin())];
}

int32_t GraphBuilder::add_node(const std::string& id, NodeKind kind) {
  auto it = id_index_.find(id);
  if (it != id_index_.end()) return it->second;
  const int32_t idx = num_nodes();
  ids_.push_back(id);
  id_index_.emplace(id, idx);
  kinds_.push_back(kind);
  ages_.push_back(kNoAge);
  return idx;
}

std::optional<int32_t> GraphBuilder::find_node(const std::string& id) const {
  auto it = id_index_.find(id);
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

void GraphBuilder::add_edge(int32_t u, int32_t v, double weight) {
  edges_[edge_key(u, v)] = weight;
}

std::optional<double> GraphBuilder::edge_weight(int32_t u, int32_t v) const {
  auto it = edges_.find(edge_key(u, v));
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

void GraphBuilder::set_type_multiplier(int32_t u, int32_t v, int32_t type, double value) {
  type_mult_[edge_key(u, v)][type] = value;
}

std::optional<double> GraphBuilder::type_multiplier(int32_t u, int32_t v, int32_t type) const {
  auto it = type_mult_.find(edge_key(u, v));
  if (it == type_mult_.end()) return std::nullopt;
  auto jt = it->second.find(type);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

Graph GraphBuilder::build(int32_t num_types) const {
  Graph g;
  const int32_t n = num_nodes();
  g.ids_ = ids_;
  g.id_index_ = id_index_;
  g.kinds_ = kinds_;
  g.ages_ = ages_;
  g.num_edges_ = static_cast<int64_t>(edges_.size());

  std::vector<int32_t> degree(n, 0);
  for (const auto& [key, w] : edges_) {
    (void)w;
    ++degree[static_cast<int32_t>(key >> 32)];
    ++degree[static_cast<int32_t>(key & 0xffffffffu)];
  }
  g.offsets_.assign(n + 1, 0);
  for (int32_t u = 0; u < n; ++u) g.offsets_[u + 1] = g.offsets_[u] + degree[u];
  const int64_t arcs = g.offsets_[n];
  g.adj_.resize(arcs);
  g.weights_.resize(arcs);

  std::vector<int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [key, w] : edges_) {
    const int32_t u = static_cast<int32_t>(key >> 32);
    const int32_t v = static_cast<int32_t>(key & 0xffffffffu);
    g.adj_[cursor[u]] = v;
    g.weights_[cursor[u]] = w;
    ++cursor[u];
    g.adj_[cursor[v]] = u;
    g.weights_[cursor[v]] = w;
    ++cursor[v];
  }
  // Sort each adjacency list by neighbor index, keeping weights aligned.
  for (int32_t u = 0; u < n; ++u) {
    const int64_t lo = g.offsets_[u], hi = g.offsets_[u + 1];
    std::vector<std::pair<int32_t, double>> tmp;
    tmp.reserve(hi - lo);
    for (int64_t i = lo; i < hi; ++i) tmp.emplace_back(g.adj_[i], g.weights_[i]);
    std::sort(tmp.begin(), tmp.end());
    for (int64_t i = lo; i < hi; ++i) {
      g.adj_[i] = tmp[i - lo].first;
      g.weights_[i] = tmp[i - lo].second;
    }
  }

  if (!type_mult_.empty()) {
    if (num_types <= 0) {
      throw UsageError("type multipliers present but no label types declared");
    }
    g.mult_types_ = num_types;
    g.type_mult_.assign(static_cast<size_t>(arcs) * num_types, 1.0);
    for (int32_t u = 0; u < n; ++u) {
      const auto nbrs = g.neighbors(u);
      for (size_t i = 0; i < nbrs.size(); ++i) {
        auto it = type_mult_.find(edge_key(u, nbrs[i]));
        if (it == type_mult_.end()) continue;
        const int64_t a = g.offsets_[u] + static_cast<int64_t>(i);
        for (const auto& [t, m] : it->second) {
          g.type_mult_[static_cast<size_t>(a) * num_types + t] = m;
        }
      }
    }
  }
  return g;
}

namespace {

// Ordering of v as a sparsification candidate from u's point of view.
struct AgeRank {
  bool age_known;
  int32_t age_gap;
  const std::string* id;
};

bool rank_less(const AgeRank& a, const AgeRank& b) {
  if (a.age_known != b.age_known) return a.age_known;
  if (a.age_known && a.age_gap != b.age_gap) return a.age_gap < b.age_gap;
  return *a.id < *b.id;
}

}  // namespace

Graph sparsify_by_age(const Graph& graph, int k) {
  if (k <= 0) {
    throw UsageError("sparsification K must be positive");
  }
  const int32_t n = graph.num_nodes();

  std::vector<uint64_t> kept;
  std::vector<std::pair<AgeRank, int32_t>> candidates;
  for (int32_t u = 0; u < n; ++u) {
    const auto nbrs = graph.neighbors(u);
    if (graph.kind(u) == NodeKind::kGroup) {
      for (int32_t v : nbrs) kept.push_back(edge_key(u, v));
      continue;
    }
    candidates.clear();
    for (int32_t v : nbrs) {
      if (graph.kind(v) == NodeKind::kGroup) {
        kept.push_back(edge_key(u, v));
        continue;
      }
      AgeRank r;
      r.age_known = graph.has_age(u) && graph.has_age(v);
      r.age_gap = r.age_known ? std::abs(graph.age(u) - graph.age(v)) : 0;
      r.id = &graph.node_id(v);
      candidates.emplace_back(r, v);
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return rank_less(a.first, b.first); });
    const size_t take = std::min<size_t>(static_cast<size_t>(k), candidates.size());
    for (size_t i = 0; i < take; ++i) {
      kept.push_back(edge_key(u, candidates[i].second));
    }
  }

  GraphBuilder builder;
  for (int32_t u = 0; u < n; ++u) {
    const int32_t idx = builder.add_node(graph.node_id(u), graph.kind(u));
    if (graph.has_age(u)) builder.set_age(idx, graph.age(u));
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  for (uint64_t key : kept) {
    const int32_t u = static_cast<int32_t>(key >> 32);
    const int32_t v = static_cast<int32_t>(key & 0xffffffffu);
    builder.add_edge(u, v, graph.edge_weight(u, v));
  }
  // Multipliers survive on surviving edges.
  Graph out = builder.build(0);
  if (graph.has_type_multipliers()) {
    GraphBuilder with_mult = builder;  // cheap relative to graph size
    for (int32_t u = 0; u < out.num_nodes(); ++u) {
      const auto nbrs = out.neighbors(u);
      for (size_t i = 0; i < nbrs.size(); ++i) {
        if (nbrs[i] < u) continue;
        const auto src_nbrs = graph.neighbors(u);
        auto it = std::lower_bound(src_nbrs.begin(), src_nbrs.end(), nbrs[i]);
        const int64_t src_arc = graph.arc(u, static_cast<int32_t>(it - src_nbrs.begin()));
        for (int32_t t = 0; t < graph.mult_types(); ++t) {
          const double w = graph.type_weight(src_arc, t) / graph.edge_weight(u, nbrs[i]);
          if (w != 1.0) with_mult.set_type_multiplier(u, nbrs[i], t, w);
        }
      }
    }
    out = with_mult.build(graph.mult_types());
  }
  return out;
}

}  // namespace eex
