#include "generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "errors.hpp"
#include "rng.hpp"
#include "tsv.hpp"

namespace eex {

std::vector<TypeConfig> default_type_mix() {
  return {
      {"hometown", 100, 1.0, 0.30, 0.5},
      {"current_city", 100, 1.0, 0.25, 0.5},
      {"high_school", 200, 1.0, 0.20, 0.5},
      {"college", 200, 1.0, 0.15, 0.5},
      {"employer", 400, 1.0, 0.10, 0.5},
  };
}

GeneratorConfig GeneratorConfig::defaults() { return GeneratorConfig{}; }

void GeneratorConfig::validate() const {
  if (nodes < 2) throw UsageError("generator: need at least 2 nodes");
  if (!(mean_degree > 0.0)) throw UsageError("generator: mean_degree must be positive");
  if (!(pocket_mean >= 2.0)) throw UsageError("generator: pocket_mean must be at least 2");
  if (!(pocket_edge_prob > 0.0 && pocket_edge_prob <= 1.0)) {
    throw UsageError("generator: pocket_edge_prob must be in (0, 1]");
  }
  if (types.empty()) throw UsageError("generator: at least one label type required");
  double total_fraction = 0.0;
  for (const TypeConfig& t : types) {
    if (t.name.empty()) throw UsageError("generator: type name must not be empty");
    if (t.num_labels < 1) throw UsageError("generator: type '" + t.name + "' needs labels >= 1");
    if (t.zipf_s < 0.0) throw UsageError("generator: zipf exponent must be >= 0");
    if (!(t.edge_fraction > 0.0)) {
      throw UsageError("generator: type '" + t.name + "' needs a positive edge_fraction");
    }
    if (t.visibility < 0.0 || t.visibility > 1.0) {
      throw UsageError("generator: visibility must be in [0, 1]");
    }
    total_fraction += t.edge_fraction;
  }
  if (std::abs(total_fraction - 1.0) > 1e-9) {
    throw UsageError("generator: edge fractions must sum to 1");
  }
}

namespace {

// --- minimal TOML subset: top-level key = value pairs and [[type]] blocks.

struct TomlScanner {
  std::string origin;
  int64_t line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw DataError(origin + ":" + std::to_string(line) + ": " + msg);
  }
};

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

GeneratorConfig GeneratorConfig::from_toml(const std::string& text, const std::string& origin) {
  GeneratorConfig config;
  config.types.clear();
  TomlScanner scan{origin};
  TypeConfig* current_type = nullptr;

  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string raw(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++scan.line;
    if (const size_t hash = raw.find('#'); hash != std::string::npos) {
      // '#' inside a quoted string is not supported; config values here
      // never need one.
      raw.resize(hash);
    }
    const std::string line = trim(raw);
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }
    if (line == "[[type]]") {
      config.types.emplace_back();
      config.types.back().num_labels = 0;  // force explicit label counts
      current_type = &config.types.back();
      continue;
    }
    if (line.front() == '[') scan.fail("unknown section '" + line + "'");
    const size_t eq = line.find('=');
    if (eq == std::string::npos) scan.fail("expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty()) scan.fail("expected key = value");

    const bool quoted = value.size() >= 2 && value.front() == '"' && value.back() == '"';
    if (quoted) value = value.substr(1, value.size() - 2);
    const auto as_int = [&]() -> int64_t {
      const auto v = parse_int(value);
      if (!v) scan.fail("expected an integer for '" + key + "'");
      return *v;
    };
    const auto as_double = [&]() -> double {
      const auto v = parse_double(value);
      if (!v) scan.fail("expected a number for '" + key + "'");
      return *v;
    };

    if (current_type == nullptr) {
      if (key == "nodes") {
        config.nodes = as_int();
      } else if (key == "mean_degree") {
        config.mean_degree = as_double();
      } else if (key == "pocket_mean") {
        config.pocket_mean = as_double();
      } else if (key == "pocket_edge_prob") {
        config.pocket_edge_prob = as_double();
      } else if (key == "age_anchor") {
        config.age_anchor = value;
      } else if (key == "seed") {
        config.seed = static_cast<uint64_t>(as_int());
      } else {
        scan.fail("unknown key '" + key + "'");
      }
    } else {
      if (key == "name") {
        current_type->name = value;
      } else if (key == "labels") {
        current_type->num_labels = static_cast<int32_t>(as_int());
      } else if (key == "zipf") {
        current_type->zipf_s = as_double();
      } else if (key == "edge_fraction") {
        current_type->edge_fraction = as_double();
      } else if (key == "visibility") {
        current_type->visibility = as_double();
      } else {
        scan.fail("unknown key '" + key + "' in [[type]]");
      }
    }
    if (pos > text.size()) break;
  }
  if (config.types.empty()) {
    config.types = defaults().types;
  }
  config.validate();
  return config;
}

GeneratorConfig GeneratorConfig::from_toml_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config: " + path.string());
  std::string text(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>{});
  return from_toml(text, path.string());
}

namespace {

std::string node_name(int64_t i) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "n%06lld", static_cast<long long>(i));
  return buf;
}

std::vector<double> zipf_weights(int32_t n, double s) {
  std::vector<double> w(n);
  for (int32_t i = 0; i < n; ++i) w[i] = std::pow(static_cast<double>(i + 1), -s);
  return w;
}

}  // namespace

Dataset generate(const GeneratorConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const int64_t n = config.nodes;
  const int32_t num_types = static_cast<int32_t>(config.types.size());

  Dataset ds;
  for (const TypeConfig& tc : config.types) {
    const int32_t t = ds.schema.intern_type(tc.name);
    for (int32_t l = 0; l < tc.num_labels; ++l) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%s-%04d", tc.name.c_str(), l);
      ds.schema.intern_label(t, buf);
    }
  }

  GraphBuilder builder;
  for (int64_t i = 0; i < n; ++i) builder.add_node(node_name(i));

  // True label per (node, type), drawn from the per-type Zipf law.
  Truth truth;
  truth.num_types = num_types;
  truth.labels.assign(static_cast<size_t>(n) * num_types, -1);
  for (int32_t t = 0; t < num_types; ++t) {
    CumulativeSampler sampler(zipf_weights(config.types[t].num_labels, config.types[t].zipf_s));
    for (int64_t u = 0; u < n; ++u) {
      truth.set(static_cast<int32_t>(u), t, sampler.sample(rng));
    }
  }

  // Partition each label community into pockets; remember the anchor type's
  // pockets for age assignment.
  const int64_t total_budget = std::llround(n * config.mean_degree / 2.0);
  std::unordered_set<uint64_t> edge_set;
  std::vector<std::vector<int32_t>> anchor_pockets;

  for (int32_t t = 0; t < num_types; ++t) {
    const TypeConfig& tc = config.types[t];
    std::vector<std::vector<int32_t>> communities(tc.num_labels);
    for (int64_t u = 0; u < n; ++u) {
      communities[truth.get(static_cast<int32_t>(u), t)].push_back(static_cast<int32_t>(u));
    }
    std::vector<std::vector<int32_t>> pockets;
    for (auto& community : communities) {
      rng.shuffle(community);
      size_t start = 0;
      while (start < community.size()) {
        size_t size = static_cast<size_t>(std::max(2, rng.poisson(config.pocket_mean)));
        size = std::min(size, community.size() - start);
        if (community.size() - start - size == 1) ++size;  // avoid a trailing singleton
        pockets.emplace_back(community.begin() + start, community.begin() + start + size);
        start += size;
      }
    }
    if (config.types[t].name == config.age_anchor) {
      anchor_pockets = pockets;
    }

    // All within-pocket pairs are candidates; Bernoulli passes over the
    // shuffled list fill the type's edge budget. The shuffle matters: it
    // spreads a small budget over every pocket instead of the first few.
    std::vector<std::pair<int32_t, int32_t>> candidates;
    for (const auto& pocket : pockets) {
      for (size_t i = 0; i < pocket.size(); ++i) {
        for (size_t j = i + 1; j < pocket.size(); ++j) {
          const uint64_t key = edge_key(pocket[i], pocket[j]);
          if (!edge_set.count(key)) candidates.emplace_back(pocket[i], pocket[j]);
        }
      }
    }
    rng.shuffle(candidates);
    const int64_t budget = std::llround(tc.edge_fraction * total_budget);
    int64_t added = 0;
    while (added < budget) {
      if (candidates.empty()) {
        throw DataError("generator: type '" + tc.name + "' can host only " +
                        std::to_string(added) + " of " + std::to_string(budget) +
                        " requested edges; grow pockets or lower its edge fraction");
      }
      std::vector<std::pair<int32_t, int32_t>> remaining;
      remaining.reserve(candidates.size());
      for (const auto& [a, b] : candidates) {
        if (added >= budget) {
          remaining.emplace_back(a, b);
          continue;
        }
        if (rng.bernoulli(config.pocket_edge_prob)) {
          edge_set.insert(edge_key(a, b));
          builder.add_edge(a, b, 1.0);
          ds.reasons[edge_key(a, b)] = t;
          ++added;
        } else {
          remaining.emplace_back(a, b);
        }
      }
      candidates = std::move(remaining);
    }
  }

  // Ages: pocket-mates of the anchor type are within a year of each other,
  // everyone else is uniform over 18-65.
  if (!anchor_pockets.empty()) {
    for (const auto& pocket : anchor_pockets) {
      const int32_t base = 19 + static_cast<int32_t>(rng.bounded(46));
      for (int32_t u : pocket) {
        builder.set_age(u, base - 1 + static_cast<int32_t>(rng.bounded(3)));
      }
    }
  } else {
    for (int64_t u = 0; u < n; ++u) {
      builder.set_age(static_cast<int32_t>(u), 18 + static_cast<int32_t>(rng.bounded(48)));
    }
  }

  ds.graph = builder.build(num_types);
  ds.observed = ObservedLabels(ds.graph.num_nodes(), num_types);
  for (int64_t u = 0; u < n; ++u) {
    for (int32_t t = 0; t < num_types; ++t) {
      if (rng.bernoulli(config.types[t].visibility)) {
        ds.observed.set(static_cast<int32_t>(u), t, truth.get(static_cast<int32_t>(u), t));
      }
    }
  }
  ds.truth = std::move(truth);
  return ds;
}

Dataset make_fig1_instance(Fig1Expected* expected) {
  Dataset ds;
  const int32_t hometown = ds.schema.intern_type("hometown");
  const int32_t city = ds.schema.intern_type("current_city");

  GraphBuilder builder;
  const int32_t u = builder.add_node("u");
  struct Friend {
    std::string id;
    std::string hometown;
    std::string city;
  };
  std::vector<Friend> friends;
  // 12 hometown-H friends; 5 of them declare current city Cp, the rest
  // pairwise-distinct filler cities, so Cp is the plurality city.
  for (int i = 0; i < 12; ++i) {
    Friend f;
    f.id = "hf" + std::to_string(i + 1);
    f.hometown = "H";
    f.city = i < 5 ? "Cp" : "F" + std::to_string(i - 4);
    friends.push_back(f);
  }
  // 4 friends from the actual current city C, sharing neither H nor Cp.
  for (int i = 0; i < 4; ++i) {
    friends.push_back({"cf" + std::to_string(i + 1), "H2", "C"});
  }

  Truth truth;
  truth.num_types = 2;
  truth.labels.assign(static_cast<size_t>(friends.size() + 1) * 2, -1);

  std::vector<std::pair<int32_t, std::pair<int32_t, int32_t>>> observations;
  for (const Friend& f : friends) {
    const int32_t v = builder.add_node(f.id);
    builder.add_edge(u, v, 1.0);
    observations.push_back(
        {v,
         {ds.schema.intern_label(hometown, f.hometown), ds.schema.intern_label(city, f.city)}});
  }
  ds.graph = builder.build(2);
  ds.observed = ObservedLabels(ds.graph.num_nodes(), 2);
  for (const auto& [v, labels] : observations) {
    ds.observed.set(v, hometown, labels.first);
    ds.observed.set(v, city, labels.second);
    truth.set(v, hometown, labels.first);
    truth.set(v, city, labels.second);
  }
  truth.set(u, hometown, *ds.schema.find_label(hometown, "H"));
  truth.set(u, city, *ds.schema.find_label(city, "C"));
  ds.truth = std::move(truth);

  if (expected) {
    expected->hometown = "H";
    expected->current_city = "C";
    expected->current_city_lp = "Cp";
    expected->node = "u";
  }
  return ds;
}

}  // namespace eex
