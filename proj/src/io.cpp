#include "blochsim/io.hpp"

#include <unistd.h>

#include <cstdio>
#include <fstream>

namespace blochsim {

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) body_ += ',';
    body_ += header[i];
  }
  body_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::runtime_error("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_double(values[i]);
  }
  body_ += '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::runtime_error("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
}

void CsvWriter::save(const std::filesystem::path& path) const {
  write_file_atomic(path, body_);
}

nlohmann::json ResultEnvelope::to_json() const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["command"] = command;
  j["build_id"] = build_id;
  j["version"] = version;
  j["config"] = config;
  j["seed"] = seed;
  j["elapsed_seconds"] = elapsed_seconds;
  j["data_files"] = data_files;
  j["extra"] = extra;
  return j;
}

ResultEnvelope ResultEnvelope::from_json(const nlohmann::json& j) {
  ResultEnvelope e;
  e.schema_version = j.at("schema_version").get<int>();
  e.command = j.at("command").get<std::string>();
  e.build_id = j.at("build_id").get<std::string>();
  e.version = j.at("version").get<std::string>();
  e.config = j.at("config");
  e.seed = j.at("seed").get<std::uint64_t>();
  e.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  e.data_files = j.at("data_files").get<std::vector<std::string>>();
  e.extra = j.at("extra");
  return e;
}

void ResultEnvelope::save(const std::filesystem::path& path) const {
  write_file_atomic(path, to_json().dump(2) + "\n");
}

ResultEnvelope ResultEnvelope::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

std::string build_id_string() {
#ifdef BLOCHSIM_BUILD_ID
  return BLOCHSIM_BUILD_ID;
#else
  return "unknown";
#endif
}

std::string version_string() {
#ifdef BLOCHSIM_VERSION
  return BLOCHSIM_VERSION;
#else
  return "0.0.0";
#endif
}

}  // namespace blochsim
