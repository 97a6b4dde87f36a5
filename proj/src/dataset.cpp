#include "dataset.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "errors.hpp"
#include "tsv.hpp"

namespace eex {

namespace {

std::string fld(std::string_view s) { return std::string(s); }

void read_edges(const std::filesystem::path& path, GraphBuilder& builder) {
  TsvReader reader(path);
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    if (f.size() != 2 && f.size() != 3) {
      reader.fail("expected src<TAB>dst[<TAB>weight]");
    }
    if (f[0].empty() || f[1].empty()) reader.fail("empty node id");
    if (f[0] == f[1]) reader.fail("self-loop on node '" + fld(f[0]) + "'");
    double w = 1.0;
    if (f.size() == 3) {
      const auto parsed = parse_double(f[2]);
      if (!parsed) reader.fail("malformed weight '" + fld(f[2]) + "'");
      w = *parsed;
    }
    if (w <= 0.0) reader.fail("non-positive weight");
    const int32_t u = builder.add_node(fld(f[0]));
    const int32_t v = builder.add_node(fld(f[1]));
    const auto existing = builder.edge_weight(u, v);
    if (existing && *existing != w) {
      reader.fail("conflicting weight for edge " + fld(f[0]) + "-" + fld(f[1]));
    }
    builder.add_edge(u, v, w);
  }
}

struct RawObservation {
  int32_t label;
  int64_t line;
};

void read_labels(const std::filesystem::path& path, GraphBuilder& builder,
                 LabelSchema& schema,
                 std::map<std::pair<int32_t, int32_t>, RawObservation>& out) {
  TsvReader reader(path);
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    if (f.size() != 3) reader.fail("expected node<TAB>type<TAB>label");
    if (f[0].empty() || f[1].empty() || f[2].empty()) reader.fail("empty field");
    const int32_t node = builder.add_node(fld(f[0]));
    const int32_t type = schema.intern_type(fld(f[1]));
    const int32_t label = schema.intern_label(type, fld(f[2]));
    auto [it, inserted] = out.try_emplace({node, type}, RawObservation{label, reader.line()});
    if (!inserted && it->second.label != label) {
      reader.fail("conflicting observation for node '" + fld(f[0]) + "' type '" + fld(f[1]) +
                  "' (previous at line " + std::to_string(it->second.line) + ")");
    }
  }
}

void read_ages(const std::filesystem::path& path, GraphBuilder& builder) {
  TsvReader reader(path);
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    if (f.size() != 2) reader.fail("expected node<TAB>age");
    if (f[0].empty()) reader.fail("empty node id");
    const auto age = parse_int(f[1]);
    if (!age || *age < 0 || *age > 200) reader.fail("malformed age '" + fld(f[1]) + "'");
    const int32_t node = builder.add_node(fld(f[0]));
    if (builder.has_age(node) && builder.age(node) != static_cast<int32_t>(*age)) {
      reader.fail("conflicting age for node '" + fld(f[0]) + "'");
    }
    builder.set_age(node, static_cast<int32_t>(*age));
  }
}

void read_groups(const std::filesystem::path& path, GraphBuilder& builder) {
  TsvReader reader(path);
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    if (f.size() != 2) reader.fail("expected group_id<TAB>member_node");
    if (f[0].empty() || f[1].empty()) reader.fail("empty field");
    const auto existing = builder.find_node(fld(f[0]));
    if (existing && builder.kind(*existing) == NodeKind::kUser) {
      reader.fail("group id '" + fld(f[0]) + "' collides with a user node id");
    }
    const auto member = builder.find_node(fld(f[1]));
    if (!member) {
      reader.fail("membership references unknown user node '" + fld(f[1]) + "'");
    }
    if (builder.kind(*member) == NodeKind::kGroup) {
      reader.fail("group member '" + fld(f[1]) + "' is itself a group");
    }
    const int32_t group = builder.add_node(fld(f[0]), NodeKind::kGroup);
    builder.add_edge(group, *member, 1.0);
  }
}

void read_type_weights(const std::filesystem::path& path, GraphBuilder& builder,
                       const LabelSchema& schema) {
  TsvReader reader(path);
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    if (f.size() != 4) reader.fail("expected src<TAB>dst<TAB>type<TAB>multiplier");
    const auto u = builder.find_node(fld(f[0]));
    const auto v = builder.find_node(fld(f[1]));
    if (!u || !v || !builder.edge_weight(*u, *v)) {
      reader.fail("no such edge " + fld(f[0]) + "-" + fld(f[1]));
    }
    const auto type = schema.find_type(fld(f[2]));
    if (!type) reader.fail("unknown label type '" + fld(f[2]) + "'");
    const auto mult = parse_double(f[3]);
    if (!mult || *mult <= 0.0) reader.fail("malformed multiplier '" + fld(f[3]) + "'");
    const auto existing = builder.type_multiplier(*u, *v, *type);
    if (existing && *existing != *mult) {
      reader.fail("conflicting multiplier for edge " + fld(f[0]) + "-" + fld(f[1]));
    }
    builder.set_type_multiplier(*u, *v, *type, *mult);
  }
}

void read_truth(const std::filesystem::path& path, GraphBuilder& builder,
                LabelSchema& schema,
                std::map<std::pair<int32_t, int32_t>, RawObservation>& out) {
  TsvReader reader(path);
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    if (f.size() != 3) reader.fail("expected node<TAB>type<TAB>label");
    const auto node = builder.find_node(fld(f[0]));
    if (!node) reader.fail("truth references unknown node '" + fld(f[0]) + "'");
    const int32_t type = schema.intern_type(fld(f[1]));
    const int32_t label = schema.intern_label(type, fld(f[2]));
    auto [it, inserted] = out.try_emplace({*node, type}, RawObservation{label, reader.line()});
    if (!inserted && it->second.label != label) {
      reader.fail("conflicting truth for node '" + fld(f[0]) + "' type '" + fld(f[1]) + "'");
    }
  }
}

void read_reasons(const std::filesystem::path& path, GraphBuilder& builder,
                  const LabelSchema& schema,
                  std::unordered_map<uint64_t, int32_t>& reasons) {
  TsvReader reader(path);
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    if (f.size() != 3) reader.fail("expected src<TAB>dst<TAB>type");
    const auto u = builder.find_node(fld(f[0]));
    const auto v = builder.find_node(fld(f[1]));
    if (!u || !v || !builder.edge_weight(*u, *v)) {
      reader.fail("no such edge " + fld(f[0]) + "-" + fld(f[1]));
    }
    const auto type = schema.find_type(fld(f[2]));
    if (!type) reader.fail("unknown label type '" + fld(f[2]) + "'");
    reasons[edge_key(*u, *v)] = *type;
  }
}

}  // namespace

Dataset ingest(const IngestPaths& paths) {
  GraphBuilder builder;
  LabelSchema schema;
  std::map<std::pair<int32_t, int32_t>, RawObservation> observations;
  std::map<std::pair<int32_t, int32_t>, RawObservation> truth_entries;

  read_edges(paths.edges, builder);
  read_labels(paths.labels, builder, schema, observations);
  if (paths.ages) read_ages(*paths.ages, builder);
  if (paths.groups) read_groups(*paths.groups, builder);
  // Truth may introduce labels (and in degenerate cases types) that no one
  // declared publicly; the schema covers both so scoring can refer to them.
  if (paths.truth) read_truth(*paths.truth, builder, schema, truth_entries);

  Dataset ds;
  if (paths.edge_type_weights) read_type_weights(*paths.edge_type_weights, builder, schema);
  if (paths.reasons) read_reasons(*paths.reasons, builder, schema, ds.reasons);

  ds.graph = builder.build(schema.num_types());
  ds.observed = ObservedLabels(ds.graph.num_nodes(), schema.num_types());
  for (const auto& [key, obs] : observations) {
    ds.observed.set(key.first, key.second, obs.label);
  }
  if (paths.truth) {
    Truth truth;
    truth.num_types = schema.num_types();
    truth.labels.assign(static_cast<size_t>(ds.graph.num_nodes()) * schema.num_types(), -1);
    for (const auto& [key, obs] : truth_entries) {
      truth.labels[static_cast<size_t>(key.first) * schema.num_types() + key.second] = obs.label;
    }
    ds.truth = std::move(truth);
  }
  ds.schema = std::move(schema);
  return ds;
}

Dataset ingest_dir(const std::filesystem::path& dir) {
  IngestPaths paths;
  paths.edges = dir / "edges.tsv";
  paths.labels = dir / "labels.tsv";
  const auto optional_file = [&](const char* name) -> std::optional<std::filesystem::path> {
    const auto p = dir / name;
    if (std::filesystem::exists(p)) return p;
    return std::nullopt;
  };
  if (!std::filesystem::exists(paths.edges)) {
    throw DataError("missing edges file: " + paths.edges.string());
  }
  if (!std::filesystem::exists(paths.labels)) {
    throw DataError("missing labels file: " + paths.labels.string());
  }
  paths.ages = optional_file("ages.tsv");
  paths.groups = optional_file("groups.tsv");
  paths.edge_type_weights = optional_file("edge_type_weights.tsv");
  paths.truth = optional_file("truth.tsv");
  paths.reasons = optional_file("reasons.tsv");
  return ingest(paths);
}

namespace {

// Rows are sorted by their external-id text before writing, so a saved
// directory does not depend on internal numbering: save -> ingest -> save
// is a byte-level fixed point.
class SortedRows {
 public:
  void add(std::initializer_list<std::string_view> fields) {
    std::string row;
    bool first = true;
    for (std::string_view f : fields) {
      if (!first) row.push_back('\t');
      row.append(f);
      first = false;
    }
    rows_.push_back(std::move(row));
  }

  void write(const std::filesystem::path& path) {
    std::sort(rows_.begin(), rows_.end());
    TsvWriter w(path);
    for (const std::string& row : rows_) {
      w.field(row);
      w.end_row();
    }
  }

 private:
  std::vector<std::string> rows_;
};

std::string format_weight(double w) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", w);
  return buf;
}

// endpoints ordered by external id
std::pair<std::string_view, std::string_view> id_pair(const Graph& g, int32_t u, int32_t v) {
  const std::string& a = g.node_id(u);
  const std::string& b = g.node_id(v);
  return a < b ? std::make_pair(std::string_view(a), std::string_view(b))
               : std::make_pair(std::string_view(b), std::string_view(a));
}

}  // namespace

void save_dir(const Dataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const Graph& g = ds.graph;
  const LabelSchema& schema = ds.schema;

  {
    SortedRows rows;
    g.for_each_edge([&](int32_t u, int32_t v, int64_t) {
      if (g.kind(u) == NodeKind::kGroup || g.kind(v) == NodeKind::kGroup) return;
      const auto [a, b] = id_pair(g, u, v);
      const double weight = g.edge_weight(u, v);
      if (weight != 1.0) {
        rows.add({a, b, format_weight(weight)});
      } else {
        rows.add({a, b});
      }
    });
    rows.write(dir / "edges.tsv");
  }
  {
    SortedRows rows;
    for (int32_t u = 0; u < g.num_nodes(); ++u) {
      for (int32_t t = 0; t < schema.num_types(); ++t) {
        const int32_t label = ds.observed.get(u, t);
        if (label < 0) continue;
        rows.add({g.node_id(u), schema.type_name(t), schema.label_name(t, label)});
      }
    }
    rows.write(dir / "labels.tsv");
  }

  bool any_age = false, any_group = false;
  for (int32_t u = 0; u < g.num_nodes(); ++u) {
    any_age |= g.has_age(u);
    any_group |= g.kind(u) == NodeKind::kGroup;
  }
  if (any_age) {
    SortedRows rows;
    for (int32_t u = 0; u < g.num_nodes(); ++u) {
      if (!g.has_age(u)) continue;
      rows.add({g.node_id(u), std::to_string(g.age(u))});
    }
    rows.write(dir / "ages.tsv");
  }
  if (any_group) {
    SortedRows rows;
    for (int32_t u = 0; u < g.num_nodes(); ++u) {
      if (g.kind(u) != NodeKind::kGroup) continue;
      for (int32_t v : g.neighbors(u)) {
        rows.add({g.node_id(u), g.node_id(v)});
      }
    }
    rows.write(dir / "groups.tsv");
  }
  if (g.has_type_multipliers()) {
    SortedRows rows;
    g.for_each_edge([&](int32_t u, int32_t v, int64_t arc) {
      const double base = g.edge_weight(u, v);
      for (int32_t t = 0; t < g.mult_types(); ++t) {
        const double mult = g.type_weight(arc, t) / base;
        if (mult == 1.0) continue;
        const auto [a, b] = id_pair(g, u, v);
        rows.add({a, b, schema.type_name(t), format_weight(mult)});
      }
    });
    rows.write(dir / "edge_type_weights.tsv");
  }
  if (ds.truth) {
    SortedRows rows;
    for (int32_t u = 0; u < g.num_nodes(); ++u) {
      for (int32_t t = 0; t < schema.num_types(); ++t) {
        const int32_t label = ds.truth->get(u, t);
        if (label < 0) continue;
        rows.add({g.node_id(u), schema.type_name(t), schema.label_name(t, label)});
      }
    }
    rows.write(dir / "truth.tsv");
  }
  if (!ds.reasons.empty()) {
    SortedRows rows;
    g.for_each_edge([&](int32_t u, int32_t v, int64_t) {
      auto it = ds.reasons.find(edge_key(u, v));
      if (it == ds.reasons.end()) return;
      const auto [a, b] = id_pair(g, u, v);
      rows.add({a, b, schema.type_name(it->second)});
    });
    rows.write(dir / "reasons.tsv");
  }
}

}  // namespace eex
