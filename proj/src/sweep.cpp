#include "blochsim/sweep.hpp"

#include <fstream>

#include "blochsim/io.hpp"

namespace blochsim {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

namespace detail {

SweepCacheFile::SweepCacheFile(const std::filesystem::path& dir, const std::string& tag)
    : tag_(tag) {
  char name[32];
  std::snprintf(name, sizeof(name), "sweep_%016llx.json",
                static_cast<unsigned long long>(fnv1a(tag)));
  path_ = dir / name;
  std::ifstream in(path_);
  if (!in) return;
  try {
    nlohmann::json j;
    in >> j;
    if (j.value("tag", std::string{}) == tag_ && j.contains("cells"))
      for (auto& [k, v] : j["cells"].items()) cells_[k] = v;
  } catch (...) {
    cells_.clear();  // unreadable cache is ignored, never fatal
  }
}

std::optional<nlohmann::json> SweepCacheFile::lookup(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = cells_.find(key);
  if (it == cells_.end()) return std::nullopt;
  return it->second;
}

void SweepCacheFile::store(const std::string& key, nlohmann::json value) {
  std::lock_guard lock(mutex_);
  cells_[key] = std::move(value);
}

void SweepCacheFile::save() const {
  std::lock_guard lock(mutex_);
  nlohmann::json j;
  j["tag"] = tag_;
  j["cells"] = nlohmann::json::object();
  for (const auto& [k, v] : cells_) j["cells"][k] = v;
  write_file_atomic(path_, j.dump() + "\n");
}

}  // namespace detail
}  // namespace blochsim
