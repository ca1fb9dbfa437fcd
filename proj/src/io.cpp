#include "qavmc/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace qavmc {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& schema,
                     const std::string& config_hash, std::uint64_t seed,
                     const std::vector<std::string>& columns)
    : path_(path), n_columns_(columns.size()) {
  out_.open(path);
  if (!out_) throw std::runtime_error("cannot open output file: " + path.string());
  out_ << "# schema=" << schema << "-v1 config=" << config_hash << " seed=" << seed << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_columns_)
    throw std::logic_error("CsvWriter: row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "");
  out_ << "\n";
}

OutputTracker::OutputTracker(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path OutputTracker::claim(const std::string& filename) {
  auto p = dir_ / filename;
  created_.push_back(p);
  return p;
}

void OutputTracker::discard_all() {
  for (const auto& p : created_) {
    std::error_code ec;
    std::filesystem::remove(p, ec);
  }
  created_.clear();
}

}  // namespace qavmc
