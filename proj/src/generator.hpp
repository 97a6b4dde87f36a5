#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace eex {

struct TypeConfig {
  std::string name;
  int32_t num_labels = 100;
  double zipf_s = 1.0;        // label popularity exponent, 0 = uniform
  double edge_fraction = 0.0; // share of the total edge budget
  double visibility = 0.5;    // probability an assignment is declared
};

// Planted-truth generator settings. Every node draws one true label per
// type; label communities are split into small pockets and edges only form
// inside pockets, so sharing a label is necessary but far from sufficient
// for an edge.
// The stock five-type mix: hometown-heavy, employer-starved.
std::vector<TypeConfig> default_type_mix();

struct GeneratorConfig {
  int64_t nodes = 1000;
  double mean_degree = 16.0;   // total edge budget = nodes * mean_degree / 2
  double pocket_mean = 12.0;   // Poisson mean pocket size
  double pocket_edge_prob = 0.6;
  std::string age_anchor = "high_school";  // pocket-correlated ages for this type
  uint64_t seed = 1;
  std::vector<TypeConfig> types = default_type_mix();

  static GeneratorConfig defaults();
  static GeneratorConfig from_toml_file(const std::filesystem::path& path);
  static GeneratorConfig from_toml(const std::string& text, const std::string& origin);

  void validate() const;  // throws UsageError
};

// Deterministic given the seed. The returned dataset carries full planted
// truth and per-edge reasons; observations are the visibility-sampled
// subset of the truth.
Dataset generate(const GeneratorConfig& config);

struct Fig1Expected {
  std::string hometown;            // both methods
  std::string current_city;        // edge-explain answer
  std::string current_city_lp;     // label-propagation answer
  std::string node;                // the unlabeled node
};

// The motivating hand example: an unlabeled node whose hometown friends
// contain a current-city subset that outvotes the friends from the node's
// actual current city.
Dataset make_fig1_instance(Fig1Expected* expected = nullptr);

}  // namespace eex
