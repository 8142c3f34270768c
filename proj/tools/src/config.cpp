#include "lms_cli/config.hpp"
#include "lms_cli/commands.hpp"

#include <algorithm>
#include <set>

namespace lms::cli {

namespace {

std::string where(const std::string& ctx, const std::string& key) { return ctx.empty() ? key : ctx + "." + key; }

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& ctx) {
  if (!node.IsMap()) throw ConfigError((ctx.empty() ? std::string("document") : ctx) + ": expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + where(ctx, key) + "'");
  }
}

template <typename T>
T get(const YAML::Node& node, const std::string& key, const std::string& ctx) {
  const auto v = node[key];
  if (!v) throw ConfigError("missing required key '" + where(ctx, key) + "'");
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + where(ctx, key) + "' has the wrong type");
  }
}

template <typename T>
T get_or(const YAML::Node& node, const std::string& key, T fallback, const std::string& ctx) {
  if (!node[key]) return fallback;
  return get<T>(node, key, ctx);
}

Matrix parse_matrix(const YAML::Node& node, const std::string& ctx) {
  if (!node.IsSequence() || node.size() == 0) throw ConfigError(ctx + ": expected a non-empty list of rows");
  const auto rows = static_cast<Index>(node.size());
  const auto cols = static_cast<Index>(node[0].size());
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (!node[i].IsSequence() || static_cast<Index>(node[i].size()) != cols) throw ConfigError(ctx + ": ragged matrix");
    for (Index j = 0; j < cols; ++j) M(i, j) = node[i][j].as<double>();
  }
  return M;
}

Eigen::Vector2d parse_point(const YAML::Node& node, const std::string& ctx) {
  if (!node.IsSequence() || node.size() != 2) throw ConfigError(ctx + ": expected [x, y]");
  return {node[0].as<double>(), node[1].as<double>()};
}

std::vector<Eigen::Vector2d> parse_ring(const YAML::Node& node, const std::string& ctx) {
  if (!node.IsSequence()) throw ConfigError(ctx + ": expected a list of [x, y] vertices");
  std::vector<Eigen::Vector2d> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(parse_point(node[i], ctx));
  return out;
}

sim::SimConfig parse_simulate(const YAML::Node& node, std::uint64_t seed) {
  const std::string ctx = "simulate";
  check_keys(node, {"n", "p", "sigma", "kernel", "space", "retain_fields", "features"}, ctx);
  sim::SimConfig c;
  c.n = get<Index>(node, "n", ctx);
  c.p = get<Index>(node, "p", ctx);
  c.sigma = get_or<double>(node, "sigma", 1.0, ctx);
  if (!node["kernel"]) throw ConfigError("missing required key 'simulate.kernel'");
  if (!node["space"]) throw ConfigError("missing required key 'simulate.space'");
  c.kernel = parse_kernel(node["kernel"]);
  c.space = parse_space(node["space"]);
  c.retain_fields = get_or<bool>(node, "retain_fields", false, ctx);
  c.compute_features = get_or<bool>(node, "features", true, ctx);
  c.seed = seed;
  try {
    sim::validate(c);
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("simulate: ") + e.what());
  }
  return c;
}

}  // namespace

kernels::KernelSpec parse_kernel(const YAML::Node& node) {
  const std::string ctx = "simulate.kernel";
  if (!node.IsMap()) throw ConfigError(ctx + ": expected a mapping with a 'type' key");
  const auto type = get<std::string>(node, "type", ctx);
  kernels::KernelSpec spec;
  if (type == "rbf") {
    check_keys(node, {"type", "scale"}, ctx);
    spec = kernels::Rbf{get_or<double>(node, "scale", 1.0, ctx)};
  } else if (type == "polynomial") {
    check_keys(node, {"type", "a", "b"}, ctx);
    spec = kernels::Polynomial{get_or<double>(node, "a", 1.0, ctx), get_or<int>(node, "b", 2, ctx)};
  } else if (type == "cosine") {
    check_keys(node, {"type", "offset"}, ctx);
    spec = kernels::CosineSum{get_or<double>(node, "offset", 2.0, ctx)};
  } else if (type == "inner_product") {
    check_keys(node, {"type", "coeffs"}, ctx);
    spec = kernels::InnerProductAnalytic{get<std::vector<double>>(node, "coeffs", ctx)};
  } else if (type == "discrete") {
    check_keys(node, {"type", "F"}, ctx);
    if (!node["F"]) throw ConfigError("missing required key 'simulate.kernel.F'");
    spec = kernels::DiscreteMatrix{parse_matrix(node["F"], ctx + ".F")};
  } else {
    throw ConfigError(ctx + ": unknown type '" + type + "' (rbf, polynomial, cosine, inner_product, discrete)");
  }
  try {
    kernels::validate(spec);
  } catch (const InvalidInput& e) {
    throw ConfigError(ctx + ": " + e.what());
  }
  return spec;
}

latent::LatentSpace parse_space(const YAML::Node& node) {
  const std::string ctx = "simulate.space";
  if (!node.IsMap()) throw ConfigError(ctx + ": expected a mapping with a 'type' key");
  const auto type = get<std::string>(node, "type", ctx);
  latent::LatentSpace space;
  if (type == "torus") {
    check_keys(node, {"type", "major_radius", "minor_radius"}, ctx);
    space = latent::TorusR3{get_or<double>(node, "major_radius", 2.0, ctx), get_or<double>(node, "minor_radius", 1.0, ctx)};
  } else if (type == "sphere") {
    check_keys(node, {"type", "dim"}, ctx);
    space = latent::Sphere{get_or<Index>(node, "dim", 3, ctx)};
  } else if (type == "discrete") {
    check_keys(node, {"type", "probs", "atoms"}, ctx);
    if (node["probs"]) {
      space = latent::Discrete{get<std::vector<double>>(node, "probs", ctx)};
    } else {
      const auto m = get<Index>(node, "atoms", ctx);
      if (m < 1) throw ConfigError(ctx + ".atoms must be >= 1");
      space = latent::Discrete{std::vector<double>(static_cast<std::size_t>(m), 1.0 / static_cast<double>(m))};
    }
  } else if (type == "annulus") {
    check_keys(node, {"type", "center", "inner", "outer"}, ctx);
    latent::Annulus a;
    if (node["center"]) a.center = parse_point(node["center"], ctx + ".center");
    a.inner_radius = get<double>(node, "inner", ctx);
    a.outer_radius = get<double>(node, "outer", ctx);
    space = latent::PlanarRegion{a};
  } else if (type == "polygon") {
    check_keys(node, {"type", "outer", "holes"}, ctx);
    latent::Polygon poly;
    poly.outer = parse_ring(node["outer"], ctx + ".outer");
    if (node["holes"]) {
      for (std::size_t h = 0; h < node["holes"].size(); ++h) poly.holes.push_back(parse_ring(node["holes"][h], ctx + ".holes"));
    }
    space = latent::PlanarRegion{poly};
  } else if (type == "region") {
    check_keys(node, {"type", "name"}, ctx);
    const auto name = get<std::string>(node, "name", ctx);
    if (name == "holed-square") {
      space = latent::holed_square_region();
    } else if (name == "z-shape") {
      space = latent::z_shape_region();
    } else if (name == "ring") {
      space = latent::ring_region();
    } else {
      throw ConfigError(ctx + ".name: unknown region '" + name + "' (holed-square, z-shape, ring)");
    }
  } else {
    throw ConfigError(ctx + ": unknown type '" + type + "' (torus, sphere, discrete, annulus, polygon, region)");
  }
  try {
    latent::validate(space);
  } catch (const InvalidInput& e) {
    throw ConfigError(ctx + ": " + e.what());
  }
  return space;
}

RunConfig parse_config(const YAML::Node& document, const Overrides& ov, const std::filesystem::path& base_dir) {
  YAML::Node doc = YAML::Clone(document);
  if (doc.IsMap() && doc["config"] && doc["lms_version"]) doc = YAML::Clone(doc["config"]);
  if (!doc.IsDefined() || doc.IsNull()) doc = YAML::Node(YAML::NodeType::Map);
  check_keys(doc, {"kind", "seed", "out", "threads", "simulate", "data", "embed", "select_dim", "tda", "geodesic",
                   "predict", "reproduce"},
             "");

  RunConfig cfg;
  // Subcommand, CLI flags and then the file, in that order of precedence.
  if (ov.kind && doc["kind"] && doc["kind"].as<std::string>() != *ov.kind) {
    throw ConfigError("config kind '" + doc["kind"].as<std::string>() + "' does not match subcommand '" + *ov.kind + "'");
  }
  cfg.kind = ov.kind ? *ov.kind : get_or<std::string>(doc, "kind", "", "");
  if (cfg.kind.empty()) throw ConfigError("no experiment kind: give a subcommand or a 'kind' key");
  if (std::find(kKinds.begin(), kKinds.end(), cfg.kind) == kKinds.end()) {
    throw ConfigError("unknown kind '" + cfg.kind + "'");
  }
  cfg.seed = ov.seed ? *ov.seed : get_or<std::uint64_t>(doc, "seed", 0, "");
  cfg.out = ov.out ? *ov.out : std::filesystem::path(get_or<std::string>(doc, "out", "lms-out", ""));
  if (ov.threads) {
    cfg.threads = *ov.threads;
  } else if (doc["threads"]) {
    cfg.threads = get<std::size_t>(doc, "threads", "");
  }
  if (cfg.threads && *cfg.threads == 0) throw ConfigError("threads must be >= 1");

  if (doc["simulate"]) cfg.simulate = parse_simulate(doc["simulate"], cfg.seed);
  if (doc["data"]) {
    std::filesystem::path p = get<std::string>(doc, "data", "");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    if (!std::filesystem::exists(p)) throw ConfigError("data file '" + p.string() + "' does not exist");
    cfg.data = std::filesystem::absolute(p);
  }
  if (cfg.simulate && cfg.data) throw ConfigError("give either 'simulate' or 'data', not both");

  if (const auto n = doc["embed"]) {
    check_keys(n, {"r", "centered"}, "embed");
    cfg.embed.r = get_or<Index>(n, "r", cfg.embed.r, "embed");
    cfg.embed.centered = get_or<bool>(n, "centered", false, "embed");
  }
  if (const auto n = doc["select_dim"]) {
    check_keys(n, {"r_max", "full_sweep", "shuffle"}, "select_dim");
    if (n["r_max"]) cfg.select_dim.r_max = get<Index>(n, "r_max", "select_dim");
    cfg.select_dim.full_sweep = get_or<bool>(n, "full_sweep", false, "select_dim");
    cfg.select_dim.shuffle = get_or<bool>(n, "shuffle", false, "select_dim");
  }
  if (const auto n = doc["tda"]) {
    const std::string c = "tda";
    check_keys(n, {"r", "max_scale", "cutoff", "max_dim", "cap", "subsample", "latent"}, c);
    auto& t = cfg.tda;
    t.r = get_or<Index>(n, "r", t.r, c);
    t.max_scale = get_or<double>(n, "max_scale", t.max_scale, c);
    t.cutoff = get_or<double>(n, "cutoff", t.cutoff, c);
    t.max_dim = get_or<int>(n, "max_dim", t.max_dim, c);
    t.cap = get_or<Index>(n, "cap", t.cap, c);
    t.subsample = get_or<Index>(n, "subsample", 0, c);
    t.latent = get_or<bool>(n, "latent", true, c);
    if (!(t.max_scale > 0.0)) throw ConfigError("tda.max_scale must be positive");
    if (!(t.cutoff >= 0.0)) throw ConfigError("tda.cutoff must be >= 0");
    if (t.max_dim != 0 && t.max_dim != 1) throw ConfigError("tda.max_dim must be 0 or 1");
  }
  if (const auto n = doc["geodesic"]) {
    const std::string c = "geodesic";
    check_keys(n, {"r", "graph", "k", "q", "fallback", "pairs"}, c);
    auto& g = cfg.geodesic;
    g.r = get_or<Index>(n, "r", g.r, c);
    const auto graph = get_or<std::string>(n, "graph", "knn", c);
    if (graph == "knn") {
      g.graph = geometry::Knn{get_or<Index>(n, "k", 5, c)};
    } else if (graph == "eps_quantile") {
      g.graph = geometry::EpsQuantile{get_or<double>(n, "q", 0.05, c)};
    } else {
      throw ConfigError("geodesic.graph must be knn or eps_quantile");
    }
    const auto fb = get_or<std::string>(n, "fallback", "euclidean", c);
    if (fb == "euclidean") {
      g.fallback = geometry::Fallback::EuclideanFallback;
    } else if (fb == "infinite") {
      g.fallback = geometry::Fallback::Infinite;
    } else {
      throw ConfigError("geodesic.fallback must be euclidean or infinite");
    }
    g.pairs = get_or<bool>(n, "pairs", true, c);
  }
  if (const auto n = doc["predict"]) {
    const std::string c = "predict";
    check_keys(n, {"task", "targets", "r_grid", "splits", "train_fraction", "k", "scores", "centered"}, c);
    auto& p = cfg.predict;
    p.task = get_or<std::string>(n, "task", p.task, c);
    if (p.task != "regression" && p.task != "classification") {
      throw ConfigError("predict.task must be regression or classification");
    }
    p.targets = get<std::string>(n, "targets", c);
    if (p.targets != "torus-angles" && p.targets != "atoms" && p.targets != "first-pc") {
      std::filesystem::path tp = p.targets;
      if (tp.is_relative() && !base_dir.empty()) tp = base_dir / tp;
      if (!std::filesystem::exists(tp)) throw ConfigError("predict.targets file '" + tp.string() + "' does not exist");
      p.targets = std::filesystem::absolute(tp).string();
    }
    p.r_grid = get<std::vector<Index>>(n, "r_grid", c);
    p.splits = get_or<Index>(n, "splits", p.splits, c);
    p.train_fraction = get_or<double>(n, "train_fraction", p.train_fraction, c);
    p.k = get_or<Index>(n, "k", p.k, c);
    const auto scores = get_or<std::string>(n, "scores", "full", c);
    if (scores != "full" && scores != "train") throw ConfigError("predict.scores must be full or train");
    p.train_only_scores = scores == "train";
    p.centered = get_or<bool>(n, "centered", false, c);
  }
  if (const auto n = doc["reproduce"]) {
    check_keys(n, {"target", "seeds", "splits", "configs"}, "reproduce");
    cfg.reproduce.target = get_or<std::string>(n, "target", "", "reproduce");
    cfg.reproduce.seeds = get_or<Index>(n, "seeds", 0, "reproduce");
    cfg.reproduce.splits = get_or<Index>(n, "splits", 0, "reproduce");
    cfg.reproduce.configs = get_or<std::vector<int>>(n, "configs", cfg.reproduce.configs, "reproduce");
    for (int c : cfg.reproduce.configs)
      if (c < 1 || c > 4) throw ConfigError("reproduce.configs entries must lie in 1..4");
  }
  if (ov.target) cfg.reproduce.target = *ov.target;

  // Requirements per kind.
  const bool needs_data = cfg.kind != "reproduce" && cfg.kind != "simulate";
  if (cfg.kind == "simulate" && !cfg.simulate) throw ConfigError("simulate needs a 'simulate' section");
  if (needs_data && !cfg.simulate && !cfg.data) throw ConfigError(cfg.kind + " needs a 'simulate' section or 'data' path");
  if (cfg.kind == "predict" && !doc["predict"]) throw ConfigError("predict needs a 'predict' section");
  if (cfg.kind == "reproduce") {
    const auto& known = reproduce_targets();
    if (cfg.reproduce.target.empty()) throw ConfigError("reproduce needs a target");
    if (std::find(known.begin(), known.end(), cfg.reproduce.target) == known.end())
      throw ConfigError("unknown reproduce target '" + cfg.reproduce.target + "'");
  }
  if (cfg.embed.r < 1) throw ConfigError("embed.r must be >= 1");

  // Effective document: overrides folded in so the echo re-runs identically.
  doc["kind"] = cfg.kind;
  doc["seed"] = cfg.seed;
  doc["out"] = cfg.out.string();
  if (cfg.threads) doc["threads"] = *cfg.threads;
  if (cfg.data) doc["data"] = cfg.data->string();
  if (cfg.kind == "predict" && doc["predict"]) doc["predict"]["targets"] = cfg.predict.targets;
  if (cfg.kind == "reproduce") doc["reproduce"]["target"] = cfg.reproduce.target;
  cfg.echo = doc;
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file '" + path.string() + "' does not exist");
  YAML::Node doc;
  try {
    doc = YAML::LoadFile(path.string());
  } catch (const YAML::Exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return parse_config(doc, overrides, std::filesystem::absolute(path).parent_path());
}

}  // namespace lms::cli
