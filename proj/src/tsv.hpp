#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eex {

// Line-oriented reader for the tab-separated interchange files. Skips blank
// lines and lines starting with '#', tracks line numbers for diagnostics.
class TsvReader {
 public:
  explicit TsvReader(const std::filesystem::path& path);

  // Fills `fields` with views into internal storage (valid until the next
  // call). Returns false at end of input.
  bool next(std::vector<std::string_view>& fields);

  // Throws DataError with "<path>:<line>: <msg>".
  [[noreturn]] void fail(const std::string& msg) const;

  int64_t line() const { return line_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string data_;
  size_t pos_ = 0;
  int64_t line_ = 0;
};

std::optional<double> parse_double(std::string_view s);
std::optional<int64_t> parse_int(std::string_view s);

// Buffered writer with explicit LF line endings.
class TsvWriter {
 public:
  explicit TsvWriter(const std::filesystem::path& path);
  ~TsvWriter();
  TsvWriter(const TsvWriter&) = delete;
  TsvWriter& operator=(const TsvWriter&) = delete;

  void field(std::string_view s);
  void field(int64_t v);
  void field(double v, const char* fmt = "%.12g");
  void end_row();

 private:
  std::string path_;
  std::ofstream out_;
  std::string buf_;
  int fields_in_row_ = 0;
};

}  // namespace eex
