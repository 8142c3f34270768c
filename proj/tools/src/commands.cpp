#include "lms_cli/commands.hpp"

#include "lms/dimselect.hpp"
#include "lms/embed.hpp"
#include "lms/geometry.hpp"
#include "lms/io.hpp"
#include "lms/knn.hpp"
#include "lms/parallel.hpp"
#include "lms/rips.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace lms::cli {

namespace {

struct Dataset {
  Matrix Y;
  std::optional<latent::LatentSample> Z;
  std::optional<Matrix> phi;
};

Dataset load_data(const RunConfig& cfg) {
  if (cfg.simulate) {
    auto out = sim::simulate(*cfg.simulate);
    return {std::move(out.Y), std::move(out.Z), std::move(out.phi_Z)};
  }
  return {io::ingest(*cfg.data), std::nullopt, std::nullopt};
}

bool continuous_latent(const Dataset& d) { return d.Z && !d.Z->is_discrete(); }

Matrix scaled_scores(const Matrix& Y, Index r, bool centered = false) {
  return embed::pc_scores(Y, r, centered).scaled_scores();
}

std::vector<std::string> column_names(const std::string& prefix, Index count) {
  std::vector<std::string> names;
  for (Index j = 0; j < count; ++j) names.push_back(prefix + std::to_string(j + 1));
  return names;
}

void run_simulate(const RunConfig& cfg, RunContext& ctx) {
  const auto out = sim::simulate(*cfg.simulate);
  ctx.emit("Y.csv", [&](const auto& p) { io::write_matrix(p, out.Y); });
  ctx.emit("Z.csv", [&](const auto& p) { io::write_latents(p, out.Z); });
  if (out.phi_Z) ctx.emit("features.csv", [&](const auto& p) { io::write_csv(p, *out.phi_Z, column_names("phi", out.phi_Z->cols())); });
  if (out.X) ctx.emit("X.csv", [&](const auto& p) { io::write_matrix(p, *out.X); });
  auto& s = ctx.summary();
  s["n"] = out.Y.rows();
  s["p"] = out.Y.cols();
  s["kernel"] = kernels::describe(cfg.simulate->kernel);
  s["space"] = latent::describe(cfg.simulate->space);
  s["gp_jitter"] = out.jitter;
}

void run_embed(const RunConfig& cfg, RunContext& ctx) {
  const auto data = load_data(cfg);
  const auto emb = embed::pc_scores(data.Y, cfg.embed.r, cfg.embed.centered);
  ctx.emit("scores.csv", [&](const auto& p) { io::write_scores(p, emb.scores); });
  ctx.emit("eigenvalues.csv", [&](const auto& p) { io::write_csv(p, Matrix(emb.eigenvalues), {"eigenvalue"}); });
  auto& s = ctx.summary();
  s["r"] = emb.r;
  s["numerical_rank"] = emb.numerical_rank;
  s["rank_deficient"] = emb.rank_deficient();
  if (data.phi && data.phi->cols() <= emb.r && !cfg.embed.centered) {
    // Finite-rank features padded with zeros up to r.
    Matrix targets = Matrix::Zero(data.Y.rows(), emb.r);
    targets.leftCols(data.phi->cols()) = *data.phi;
    const auto rep = embed::align(emb, targets);
    s["uniform_error"] = rep.uniform_error;
    s["pairwise_error"] = rep.pairwise_error;
  }
}

void run_select_dim(const RunConfig& cfg, RunContext& ctx) {
  const auto data = load_data(cfg);
  const Index n = data.Y.rows(), p = data.Y.cols();
  Index r_max = dimselect::default_r_max(n, p);
  if (cfg.select_dim.full_sweep) r_max = std::min((n + 1) / 2, p);
  if (cfg.select_dim.r_max) r_max = *cfg.select_dim.r_max;
  const auto report = dimselect::wasserstein_dimension_select(data.Y, r_max, {cfg.select_dim.shuffle, cfg.seed});
  const Vector scree = embed::scree(data.Y, std::max<Index>(2, std::min(r_max, std::min(n, p))));
  const auto elbow = dimselect::elbow_select(std::vector<double>(scree.data(), scree.data() + scree.size()));
  ctx.emit("dim_curve.csv", [&](const auto& path) { io::write_dim_curve(path, report); });
  ctx.emit("scree.csv", [&](const auto& path) { io::write_csv(path, Matrix(scree), {"eigenvalue"}); });
  auto& s = ctx.summary();
  s["r_max"] = r_max;
  s["selected"] = report.selected;
  s["elbow_r"] = elbow.dimension;
  s["elbow_degenerate"] = elbow.degenerate;
}

void run_tda(const RunConfig& cfg, RunContext& ctx) {
  const auto data = load_data(cfg);
  const auto& t = cfg.tda;
  Matrix S = scaled_scores(data.Y, t.r);
  std::optional<Matrix> Z;
  if (t.latent && continuous_latent(data)) Z = data.Z->points;
  if (t.subsample > 0 && t.subsample < S.rows()) {
    const auto rows = rips::subsample_indices(S.rows(), t.subsample, cfg.seed);
    S = rips::select_rows(S, rows);
    if (Z) Z = rips::select_rows(*Z, rows);
  }
  const rips::RipsOptions opts{t.cap};
  const auto dgm = rips::rips_persistence(S, t.max_scale, t.max_dim, opts);
  ctx.emit("diagram_scores.csv", [&](const auto& p) { io::write_diagram(p, dgm); });
  auto& s = ctx.summary();
  const auto counts = rips::count_features(dgm, t.cutoff);
  s["points"] = S.rows();
  s["scores"]["beta0"] = counts.beta0;
  s["scores"]["beta1"] = counts.beta1;
  if (Z) {
    const auto dz = rips::rips_persistence(*Z, t.max_scale, t.max_dim, opts);
    ctx.emit("diagram_latent.csv", [&](const auto& p) { io::write_diagram(p, dz); });
    const auto cz = rips::count_features(dz, t.cutoff);
    s["latent"]["beta0"] = cz.beta0;
    s["latent"]["beta1"] = cz.beta1;
    s["bottleneck_h0"] = rips::bottleneck(dgm, dz, 0);
    if (t.max_dim == 1) s["bottleneck_h1"] = rips::bottleneck(dgm, dz, 1);
  }
}

void write_pairs(const std::filesystem::path& path, const Matrix& a, const Matrix& b) {
  Matrix pairs(a.rows() * (a.rows() - 1) / 2, 2);
  Index k = 0;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = i + 1; j < a.rows(); ++j, ++k) pairs.row(k) << a(i, j), b(i, j);
  }
  io::write_csv(path, pairs, {"latent", "scores"});
}

void run_geodesic(const RunConfig& cfg, RunContext& ctx) {
  const auto data = load_data(cfg);
  const auto& g = cfg.geodesic;
  const Matrix S = scaled_scores(data.Y, g.r);
  const auto gs = geometry::graph_geodesics(geometry::neighbor_graph(S, g.graph), S, g.fallback);
  ctx.emit("geodesics_scores.csv", [&](const auto& p) { io::write_matrix(p, gs); });
  if (continuous_latent(data)) {
    const auto& Z = data.Z->points;
    const auto gz = geometry::graph_geodesics(geometry::neighbor_graph(Z, g.graph), Z, g.fallback);
    ctx.emit("geodesics_latent.csv", [&](const auto& p) { io::write_matrix(p, gz); });
    if (g.pairs) ctx.emit("geodesic_pairs.csv", [&](const auto& p) { write_pairs(p, gz, gs); });
    ctx.summary()["isometry_slope"] = geometry::isometry_slope(gz, gs);
  }
}

knn::Targets prediction_targets(const RunConfig& cfg, const Dataset& data, std::vector<std::string>& names) {
  const auto& pr = cfg.predict;
  const bool classify = pr.task == "classification";
  if (pr.targets == "torus-angles") {
    if (!data.Z || !std::holds_alternative<latent::TorusR3>(data.Z->space)) {
      throw InvalidInput("predict.targets torus-angles needs a simulated torus");
    }
    if (classify) throw InvalidInput("torus-angles targets are for regression");
    const auto ang = latent::torus_angles(*data.Z);
    Matrix T(data.Y.rows(), 2);
    T.col(0) = ang.azimuth;
    T.col(1) = ang.elevation;
    names = {"azimuth", "elevation"};
    return T;
  }
  if (pr.targets == "atoms") {
    if (!data.Z || !data.Z->is_discrete()) throw InvalidInput("predict.targets atoms needs a simulated discrete space");
    if (!classify) throw InvalidInput("atoms targets are for classification");
    knn::Labels labels(static_cast<std::size_t>(data.Y.rows()));
    for (Index i = 0; i < data.Y.rows(); ++i) labels[i] = data.Z->atom(i);
    return labels;
  }
  if (pr.targets == "first-pc") {
    if (classify) throw InvalidInput("first-pc targets are for regression");
    names = {"pc1"};
    return Matrix(embed::pc_scores(data.Y, 1, pr.centered).scores);
  }
  const auto table = io::read_csv(pr.targets);
  if (table.values.rows() != data.Y.rows()) throw InvalidInput("predict.targets: row count differs from the data");
  if (classify) {
    knn::Labels labels(static_cast<std::size_t>(table.values.rows()));
    for (Index i = 0; i < table.values.rows(); ++i) {
      const double v = table.values(i, 0);
      if (v != std::round(v)) throw InvalidInput("predict.targets: class labels must be integers");
      labels[i] = static_cast<int>(v);
    }
    return labels;
  }
  names = table.header.empty() ? column_names("target", table.values.cols()) : table.header;
  return table.values;
}

void run_predict(const RunConfig& cfg, RunContext& ctx) {
  const auto data = load_data(cfg);
  const auto& pr = cfg.predict;
  knn::CurveOptions opt;
  const auto targets = prediction_targets(cfg, data, opt.target_names);
  opt.r_grid = pr.r_grid;
  opt.n_splits = pr.splits;
  opt.train_fraction = pr.train_fraction;
  opt.k = pr.k;
  opt.seed = cfg.seed;
  opt.centered = pr.centered;
  opt.train_only_scores = pr.train_only_scores;
  const auto curve = knn::error_curve(data.Y, targets, opt);
  const Index top = *std::max_element(pr.r_grid.begin(), pr.r_grid.end());
  const Vector scree = embed::scree(data.Y, top);
  ctx.emit("error_curve.csv", [&](const auto& p) { io::write_error_curve(p, curve); });
  ctx.emit("scree.csv", [&](const auto& p) { io::write_csv(p, Matrix(scree), {"eigenvalue"}); });
  ctx.summary()["rows"] = static_cast<Index>(curve.rows.size());
}

void run_ingest(const RunConfig& cfg, RunContext& ctx) {
  const auto table = io::read_csv(*cfg.data);
  const Matrix Y = io::ingest(*cfg.data);
  ctx.emit("Y.csv", [&](const auto& p) { io::write_matrix(p, Y); });
  auto& s = ctx.summary();
  s["n"] = Y.rows();
  s["p"] = Y.cols();
  s["header"] = !table.header.empty();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_manifest(const RunConfig& cfg, RunContext& ctx, const std::string& started, double wall) {
  YAML::Node m;
  m["lms_version"] = version();
  m["kind"] = cfg.kind;
  m["seed"] = cfg.seed;
  m["threads"] = thread_count();
  m["started"] = started;
  m["wall_time_seconds"] = wall;
  for (const auto& name : ctx.outputs()) m["outputs"].push_back(name);
  m["summary"] = ctx.summary();
  m["config"] = cfg.echo;
  YAML::Emitter em;
  em.SetDoublePrecision(17);
  em << m;
  const auto path = ctx.artifact("manifest.yaml");
  std::ofstream out(path);
  out << em.c_str() << '\n';
  if (!out) throw NumericalError("cannot write " + path.string());
}

}  // namespace

std::string version() { return LMS_VERSION; }

void execute(const RunConfig& cfg, RunContext& ctx) {
  if (cfg.kind == "simulate") return run_simulate(cfg, ctx);
  if (cfg.kind == "embed") return run_embed(cfg, ctx);
  if (cfg.kind == "select-dim") return run_select_dim(cfg, ctx);
  if (cfg.kind == "tda") return run_tda(cfg, ctx);
  if (cfg.kind == "geodesic") return run_geodesic(cfg, ctx);
  if (cfg.kind == "predict") return run_predict(cfg, ctx);
  if (cfg.kind == "ingest") return run_ingest(cfg, ctx);
  if (cfg.kind == "reproduce") return reproduce(cfg, ctx);
  throw ConfigError("unknown kind '" + cfg.kind + "'");
}

int run(const RunConfig& cfg, std::ostream& log) {
  const auto started = utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.threads) set_thread_count(*cfg.threads);
  std::optional<RunContext> ctx;
  try {
    ctx.emplace(cfg.out);
    execute(cfg, *ctx);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(cfg, *ctx, started, wall);
    log << "lms " << cfg.kind << ": wrote " << ctx->outputs().size() << " files to " << cfg.out.string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    if (ctx) ctx->discard();
    return kExitConfig;
  } catch (const InvalidInput& e) {
    log << "invalid input: " << e.what() << '\n';
    if (ctx) ctx->discard();
    return kExitConfig;
  } catch (const YAML::Exception& e) {
    log << "config error: " << e.what() << '\n';
    if (ctx) ctx->discard();
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << '\n';
    if (ctx) ctx->discard();
    return kExitNumerical;
  }
}

}  // namespace lms::cli
