// io.hpp — atomic file writes, CSV helpers and the self-describing result
// envelope wrapped around every emitted artifact.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "blochsim/common.hpp"

namespace blochsim {

// write-temp-then-rename; the target is either fully written or untouched
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string format_double(double v);  // round-trip exact ("%.17g")

// Minimal CSV builder; numeric cells are emitted round-trip exact.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);
  const std::string& str() const { return body_; }
  void save(const std::filesystem::path& path) const;

 private:
  std::size_t columns_;
  std::string body_;
};

struct ResultEnvelope {
  int schema_version = 1;
  std::string command;
  std::string build_id;      // git-describe-style
  std::string version;       // library version (also keys sweep caches)
  nlohmann::json config;     // verbatim run configuration
  std::uint64_t seed = 0;
  double elapsed_seconds = 0.0;
  std::vector<std::string> data_files;  // payload references, relative paths
  nlohmann::json extra;      // command-specific summary values

  nlohmann::json to_json() const;
  static ResultEnvelope from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static ResultEnvelope load(const std::filesystem::path& path);
};

std::string build_id_string();
std::string version_string();

}  // namespace blochsim
