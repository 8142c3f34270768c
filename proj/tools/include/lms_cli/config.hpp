#pragma once

// Run configuration: YAML document -> typed options. The grammar is
// documented in docs/config.md.

#include "lms/geometry.hpp"
#include "lms/simulate.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lms::cli {

/// Configuration problem; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string> kKinds = {"simulate", "embed",    "select-dim", "tda",
                                                "geodesic", "predict",  "reproduce",  "ingest"};

struct EmbedOptions {
  Index r = 2;
  bool centered = false;
};

struct SelectDimOptions {
  std::optional<Index> r_max;  // default min(50, ceil(n/2), p)
  bool full_sweep = false;     // r_max = min(ceil(n/2), p)
  bool shuffle = false;
};

struct TdaOptions {
  Index r = 20;
  double max_scale = 1.5;
  double cutoff = 0.2;
  int max_dim = 1;
  Index cap = 512;
  Index subsample = 0;  // 0: use every row
  bool latent = true;   // also analyse the simulated latent points
};

struct GeodesicOptions {
  Index r = 20;
  geometry::GraphMode graph = geometry::Knn{5};
  geometry::Fallback fallback = geometry::Fallback::EuclideanFallback;
  bool pairs = true;  // emit the (latent, score) distance pairs
};

struct PredictOptions {
  std::string task = "regression";
  std::string targets;  // torus-angles | atoms | first-pc | CSV path
  std::vector<Index> r_grid;
  Index splits = 200;
  double train_fraction = 0.7;
  Index k = 5;
  bool train_only_scores = false;
  bool centered = false;
};

struct ReproduceOptions {
  std::string target;
  Index seeds = 0;   // 0: target default
  Index splits = 0;  // 0: target default
  std::vector<int> configs{1, 2, 3, 4};  // fig12 / fig12c configurations
};

struct RunConfig {
  std::string kind;
  std::uint64_t seed = 0;
  std::filesystem::path out = "lms-out";
  std::optional<std::size_t> threads;
  std::optional<sim::SimConfig> simulate;
  std::optional<std::filesystem::path> data;
  EmbedOptions embed;
  SelectDimOptions select_dim;
  TdaOptions tda;
  GeodesicOptions geodesic;
  PredictOptions predict;
  ReproduceOptions reproduce;

  YAML::Node echo;  // effective document, re-runnable as a config
};

struct Overrides {
  std::optional<std::string> kind;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> threads;
  std::optional<std::string> target;
};

/// Parses a config document. A run manifest (which nests the effective config
/// under `config`) is accepted as well. Relative data paths resolve against
/// the config file's directory.
RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides);
RunConfig parse_config(const YAML::Node& document, const Overrides& overrides,
                       const std::filesystem::path& base_dir = {});

kernels::KernelSpec parse_kernel(const YAML::Node& node);
latent::LatentSpace parse_space(const YAML::Node& node);

}  // namespace lms::cli
