#pragma once

// Output bookkeeping for one run: every artifact goes through here so a
// failed run can remove what it wrote, and the manifest can list it.

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace lms::cli {

class RunContext {
 public:
  explicit RunContext(std::filesystem::path out_dir);

  const std::filesystem::path& dir() const { return dir_; }

  /// Path for a new artifact, registered for cleanup and the manifest.
  std::filesystem::path artifact(const std::string& name);

  /// Writes via `writer(path)` and registers the file.
  void emit(const std::string& name, const std::function<void(const std::filesystem::path&)>& writer);

  YAML::Node& summary() { return summary_; }
  const std::vector<std::string>& outputs() const { return names_; }

  /// Removes every registered artifact, and the output directory when this
  /// run created it and it is left empty.
  void discard() noexcept;

 private:
  std::filesystem::path dir_;
  bool created_dir_ = false;
  std::vector<std::string> names_;
  YAML::Node summary_{YAML::NodeType::Map};
};

}  // namespace lms::cli
