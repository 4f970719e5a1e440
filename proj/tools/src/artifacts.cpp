#include "artifacts.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>

namespace eqtri::cli {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return {buf, end};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Sink::Sink(const std::string& path, std::ostream& fallback) : path_(path), os_(&fallback) {
  if (path.empty() || path == "-") {
    path_ = "-";
    return;
  }
  file_.open(path, std::ios::out | std::ios::trunc);
  if (!file_) throw IoError("cannot open '" + path + "' for writing");
  os_ = &file_;
}

void Sink::finish() {
  os_->flush();
  if (!*os_) throw IoError("write to '" + path_ + "' failed");
  if (file_.is_open()) {
    file_.close();
    if (file_.fail()) throw IoError("closing '" + path_ + "' failed");
  }
}

CsvWriter::CsvWriter(Sink& sink, const json& metadata, const std::vector<std::string>& columns)
    : os_(sink.stream()), width_(columns.size()) {
  os_ << "# " << metadata.dump() << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
  os_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
  os_ << '\n';
}

void write_json(Sink& sink, const json& doc) { sink.stream() << doc.dump(2) << '\n'; }

}  // namespace eqtri::cli
