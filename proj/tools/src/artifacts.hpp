#pragma once

#include <fstream>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace eqtri::cli {

using json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form; identical across runs and thread counts.
std::string fmt(double v);

std::string utc_timestamp();

/// An output file, or `fallback` when the path is empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback);
  std::ostream& stream() { return *os_; }
  void finish();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* os_;
};

/// CSV with a single "# {json}" metadata line before the column header.
class CsvWriter {
 public:
  CsvWriter(Sink& sink, const json& metadata, const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
  std::size_t width_;
};

void write_json(Sink& sink, const json& doc);

}  // namespace eqtri::cli
