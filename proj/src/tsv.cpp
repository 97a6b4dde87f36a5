#include "tsv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "errors.hpp"

namespace eex {

TsvReader::TsvReader(const std::filesystem::path& path) : path_(path.string()) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open file: " + path_);
  }
  data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool TsvReader::next(std::vector<std::string_view>& fields) {
  while (pos_ < data_.size()) {
    size_t eol = data_.find('\n', pos_);
    if (eol == std::string::npos) eol = data_.size();
    std::string_view row(data_.data() + pos_, eol - pos_);
    pos_ = eol + 1;
    ++line_;
    if (row.empty() || row.front() == '#') continue;
    fields.clear();
    size_t start = 0;
    while (true) {
      const size_t tab = row.find('\t', start);
      if (tab == std::string_view::npos) {
        fields.push_back(row.substr(start));
        break;
      }
      fields.push_back(row.substr(start, tab - start));
      start = tab + 1;
    }
    return true;
  }
  return false;
}

void TsvReader::fail(const std::string& msg) const {
  throw DataError(path_ + ":" + std::to_string(line_) + ": " + msg);
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  char buf[64];
  if (s.size() >= sizeof(buf)) return std::nullopt;
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(buf, &end);
  if (errno != 0 || end != buf + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<int64_t> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  char buf[32];
  if (s.size() >= sizeof(buf)) return std::nullopt;
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(buf, &end, 10);
  if (errno != 0 || end != buf + s.size()) return std::nullopt;
  return v;
}

TsvWriter::TsvWriter(const std::filesystem::path& path)
    : path_(path.string()), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) {
    throw DataError("cannot write file: " + path_);
  }
  buf_.reserve(1 << 16);
}

TsvWriter::~TsvWriter() {
  if (!buf_.empty()) {
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
  }
}

void TsvWriter::field(std::string_view s) {
  if (fields_in_row_ > 0) buf_.push_back('\t');
  buf_.append(s);
  ++fields_in_row_;
}

void TsvWriter::field(int64_t v) {
  char tmp[24];
  std::snprintf(tmp, sizeof(tmp), "%lld", static_cast<long long>(v));
  field(std::string_view(tmp));
}

void TsvWriter::field(double v, const char* fmt) {
  char tmp[48];
  std::snprintf(tmp, sizeof(tmp), fmt, v);
  field(std::string_view(tmp));
}

void TsvWriter::end_row() {
  buf_.push_back('\n');
  fields_in_row_ = 0;
  if (buf_.size() >= (1 << 16)) {
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
  }
}

}  // namespace eex
