#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "belief.hpp"
#include "graph.hpp"
#include "schema.hpp"

namespace eex {

// Ground-truth assignments, one label per (node, type). Present on generated
// data; -1 marks pairs without truth.
struct Truth {
  int32_t num_types = 0;
  std::vector<int32_t> labels;  // node * num_types + type

  int32_t get(int32_t node, int32_t type) const {
    return labels[static_cast<size_t>(node) * num_types + type];
  }
  void set(int32_t node, int32_t type, int32_t label) {
    labels[static_cast<size_t>(node) * num_types + type] = label;
  }
};

// A graph plus everything needed to run and score inference on it.
struct Dataset {
  LabelSchema schema;
  Graph graph;
  ObservedLabels observed;
  std::optional<Truth> truth;
  // Edge key -> label type that created the edge (generator provenance).
  std::unordered_map<uint64_t, int32_t> reasons;
};

struct IngestPaths {
  std::filesystem::path edges;
  std::filesystem::path labels;
  std::optional<std::filesystem::path> ages;
  std::optional<std::filesystem::path> groups;
  std::optional<std::filesystem::path> edge_type_weights;
  std::optional<std::filesystem::path> truth;
  std::optional<std::filesystem::path> reasons;
};

// Reads the TSV files into a Dataset. Dense node indices follow first-seen
// order across edges, labels, ages, then groups. Malformed or conflicting
// input raises DataError with file:line context.
Dataset ingest(const IngestPaths& paths);

// Convenience over a directory using the standard file names; edges.tsv and
// labels.tsv are required, everything else is picked up when present.
Dataset ingest_dir(const std::filesystem::path& dir);

// Writes edges.tsv / labels.tsv (+ ages, groups, edge_type_weights, truth,
// reasons when present). Re-ingesting yields the same graph, observations
// and schema up to dense renumbering.
void save_dir(const Dataset& dataset, const std::filesystem::path& dir);

}  // namespace eex
