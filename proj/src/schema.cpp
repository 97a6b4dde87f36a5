#include "schema.hpp"

namespace eex {

int32_t LabelSchema::intern_type(const std::string& name) {
  auto it = type_index_.find(name);
  if (it != type_index_.end()) return it->second;
  const int32_t idx = static_cast<int32_t>(types_.size());
  types_.push_back(name);
  type_index_.emplace(name, idx);
  labels_.emplace_back();
  label_index_.emplace_back();
  return idx;
}

int32_t LabelSchema::intern_label(int32_t type, const std::string& label) {
  auto& index = label_index_[type];
  auto it = index.find(label);
  if (it != index.end()) return it->second;
  const int32_t idx = static_cast<int32_t>(labels_[type].size());
  labels_[type].push_back(label);
  index.emplace(label, idx);
  return idx;
}

std::optional<int32_t> LabelSchema::find_type(const std::string& name) const {
  auto it = type_index_.find(name);
  if (it == type_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int32_t> LabelSchema::find_label(int32_t type, const std::string& label) const {
  const auto& index = label_index_[type];
  auto it = index.find(label);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

}  // namespace eex
