#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace qavmc {

/// Round-trip-stable decimal formatting (%.17g); keeps outputs byte-identical
/// across reruns.
std::string format_double(double v);

/// CSV writer: provenance comment line, then a header row, then data rows.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& schema,
            const std::string& config_hash, std::uint64_t seed,
            const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t n_columns_;
};

/// Tracks files created by one subcommand run; removes them all on failure.
class OutputTracker {
 public:
  explicit OutputTracker(std::filesystem::path dir);
  std::filesystem::path claim(const std::string& filename);
  void discard_all();  // deletes every claimed file
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> created_;
};

}  // namespace qavmc
