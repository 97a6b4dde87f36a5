#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace eex {

// Interned label types and per-type label vocabularies. Indices are dense
// and assigned in first-seen order, so the same input order always yields
// the same numbering.
class LabelSchema {
 public:
  int32_t intern_type(const std::string& name);
  int32_t intern_label(int32_t type, const std::string& label);

  std::optional<int32_t> find_type(const std::string& name) const;
  std::optional<int32_t> find_label(int32_t type, const std::string& label) const;

  const std::string& type_name(int32_t type) const { return types_[type]; }
  const std::string& label_name(int32_t type, int32_t label) const {
    return labels_[type][label];
  }

  int32_t num_types() const { return static_cast<int32_t>(types_.size()); }
  int32_t num_labels(int32_t type) const {
    return static_cast<int32_t>(labels_[type].size());
  }

 private:
  std::vector<std::string> types_;
  std::unordered_map<std::string, int32_t> type_index_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::unordered_map<std::string, int32_t>> label_index_;
};

}  // namespace eex
