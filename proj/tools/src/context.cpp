#include "lms_cli/context.hpp"

#include "lms/types.hpp"

#include <algorithm>

namespace lms::cli {

RunContext::RunContext(std::filesystem::path out_dir) : dir_(std::move(out_dir)) {
  std::error_code ec;
  if (!std::filesystem::exists(dir_, ec)) {
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw InvalidInput("cannot create output directory " + dir_.string() + ": " + ec.message());
    created_dir_ = true;
  } else if (!std::filesystem::is_directory(dir_)) {
    throw InvalidInput("output path " + dir_.string() + " exists and is not a directory");
  }
}

std::filesystem::path RunContext::artifact(const std::string& name) {
  if (std::find(names_.begin(), names_.end(), name) == names_.end()) names_.push_back(name);
  return dir_ / name;
}

void RunContext::emit(const std::string& name, const std::function<void(const std::filesystem::path&)>& writer) {
  writer(artifact(name));
}

void RunContext::discard() noexcept {
  std::error_code ec;
  for (const auto& name : names_) std::filesystem::remove(dir_ / name, ec);
  names_.clear();
  if (created_dir_ && std::filesystem::is_empty(dir_, ec)) std::filesystem::remove(dir_, ec);
}

}  // namespace lms::cli
