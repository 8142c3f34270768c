#include "lms_cli/commands.hpp"

#include "lms/dimselect.hpp"
#include "lms/embed.hpp"
#include "lms/experiments.hpp"
#include "lms/geometry.hpp"
#include "lms/io.hpp"
#include "lms/knn.hpp"
#include "lms/linalg.hpp"
#include "lms/random.hpp"
#include "lms/rips.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace lms::cli {

namespace {

namespace ex = experiments;

Index seeds_or(const RunConfig& cfg, Index fallback) { return cfg.reproduce.seeds > 0 ? cfg.reproduce.seeds : fallback; }
Index splits_or(const RunConfig& cfg, Index fallback) { return cfg.reproduce.splits > 0 ? cfg.reproduce.splits : fallback; }

std::uint64_t replicate_seed(std::uint64_t seed, Index k) { return stream_id(seed, static_cast<std::uint64_t>(k)); }

void fig4(const RunConfig& cfg, RunContext& ctx) {
  const Index seeds = seeds_or(cfg, 20);
  auto mean_error = [&](Index n, Index p) {
    double total = 0.0;
    for (Index k = 0; k < seeds; ++k) total += ex::mixture_pairwise_error(n, p, replicate_seed(cfg.seed, k));
    return total / static_cast<double>(seeds);
  };
  std::vector<std::array<double, 3>> grid, fixed;
  for (Index n : {100, 200, 400}) {
    for (Index p : {200, 1000, 5000}) grid.push_back({double(n), double(p), mean_error(n, p)});
  }
  for (Index n : {500, 1000, 2000}) fixed.push_back({double(n), 200.0, mean_error(n, 200)});
  auto write = [](const std::filesystem::path& path, const std::vector<std::array<double, 3>>& rows) {
    Matrix M(static_cast<Index>(rows.size()), 3);
    for (std::size_t i = 0; i < rows.size(); ++i) M.row(static_cast<Index>(i)) << rows[i][0], rows[i][1], rows[i][2];
    io::write_csv(path, M, {"n", "p", "mean_pairwise_error"});
  };
  ctx.emit("fig4_grid.csv", [&](const auto& p) { write(p, grid); });
  ctx.emit("fig4_fixed_p.csv", [&](const auto& p) { write(p, fixed); });
  ctx.summary()["replicates"] = seeds;
}

void fig5(const RunConfig& cfg, RunContext& ctx) {
  std::vector<std::pair<Index, Index>> settings = {{200, 200}, {200, 1000}, {200, 5000}, {500, 200}, {1000, 200}, {2000, 200}};
  std::vector<std::array<double, 6>> score_rows, centre_rows;
  for (const auto& [n, p] : settings) {
    const auto out = sim::simulate(ex::mixture3_config(n, p, cfg.seed));
    const auto emb = embed::pc_scores(out.Y, 3);
    const auto rep = embed::align(emb, *out.phi_Z);
    const Matrix aligned = emb.scaled_scores() * rep.Q;
    for (Index i = 0; i < n; ++i) {
      score_rows.push_back({double(n), double(p), double(out.Z.atom(i)), aligned(i, 0), aligned(i, 1), aligned(i, 2)});
    }
    const auto fm = kernels::FeatureMap::discrete(ex::mixture3_covariance(), {1.0 / 3, 1.0 / 3, 1.0 / 3}, 3);
    for (Index k = 0; k < 3; ++k) {
      const auto& a = fm.atom_vectors();
      centre_rows.push_back({double(n), double(p), double(k), a(k, 0), a(k, 1), a(k, 2)});
    }
  }
  auto write = [](const std::filesystem::path& path, const std::vector<std::array<double, 6>>& rows,
                  const std::vector<std::string>& header) {
    Matrix M(static_cast<Index>(rows.size()), 6);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (int j = 0; j < 6; ++j) M(static_cast<Index>(i), j) = rows[i][j];
    }
    io::write_csv(path, M, header);
  };
  ctx.emit("fig5_scores.csv", [&](const auto& p) { write(p, score_rows, {"n", "p", "atom", "pc1", "pc2", "pc3"}); });
  ctx.emit("fig5_centres.csv", [&](const auto& p) { write(p, centre_rows, {"n", "p", "atom", "phi1", "phi2", "phi3"}); });
}

struct TorusRun {
  sim::SimOutput out;
  Matrix scores;  // p^{-1/2} zeta, r = 20
};

TorusRun torus_run(const RunConfig& cfg) {
  auto out = sim::simulate(ex::torus_config(400, 500, 0.0, cfg.seed));
  Matrix S = embed::pc_scores(out.Y, 20).scaled_scores();
  return {std::move(out), std::move(S)};
}

void fig7(const RunConfig& cfg, RunContext& ctx) {
  const auto run = torus_run(cfg);
  const auto ang = latent::torus_angles(run.out.Z);
  Matrix M(run.scores.rows(), 11);
  M.col(0) = ang.azimuth;
  M.col(1) = ang.elevation;
  M.rightCols(9) = run.scores.leftCols(9);
  std::vector<std::string> header = {"azimuth", "elevation"};
  for (int j = 1; j <= 9; ++j) header.push_back("pc" + std::to_string(j));
  ctx.emit("fig7_scores.csv", [&](const auto& p) { io::write_csv(p, M, header); });
}

void fig8(const RunConfig& cfg, RunContext& ctx) {
  const auto run = torus_run(cfg);
  auto analyse = [&](const std::string& tag, const Matrix& pts) {
    const auto dgm = rips::rips_persistence(pts, ex::kTorusMaxScale, 1);
    ctx.emit("fig8_diagram_" + tag + ".csv", [&](const auto& p) { io::write_diagram(p, dgm); });
    const auto c = rips::count_features(dgm, ex::kFeatureCutoff);
    ctx.summary()[tag]["beta0"] = c.beta0;
    ctx.summary()[tag]["beta1"] = c.beta1;
  };
  analyse("latent", run.out.Z.points);
  analyse("r3", run.scores.leftCols(3));
  analyse("r20", run.scores);
}

void fig9(const RunConfig& cfg, RunContext& ctx) {
  const auto run = torus_run(cfg);
  const auto& Z = run.out.Z.points;
  const auto fb = geometry::Fallback::EuclideanFallback;
  const auto gz = geometry::graph_geodesics(geometry::neighbor_graph(Z, geometry::Knn{5}), Z, fb);
  const auto gs = geometry::graph_geodesics(geometry::neighbor_graph(run.scores, geometry::Knn{5}), run.scores, fb);
  Matrix pairs(Z.rows() * (Z.rows() - 1) / 2, 2);
  Index k = 0;
  for (Index i = 0; i < Z.rows(); ++i) {
    for (Index j = i + 1; j < Z.rows(); ++j, ++k) pairs.row(k) << gz(i, j), gs(i, j);
  }
  ctx.emit("fig9_pairs.csv", [&](const auto& p) { io::write_csv(p, pairs, {"latent", "scores"}); });
  ctx.summary()["isometry_slope"] = geometry::isometry_slope(gz, gs);
  ctx.summary()["theoretical_slope"] = std::sqrt(2.0);
}

void emit_curve(RunContext& ctx, const std::string& stem, const Matrix& Y, const knn::Targets& targets,
                const knn::CurveOptions& opt) {
  const auto curve = knn::error_curve(Y, targets, opt);
  const Vector scree = embed::scree(Y, *std::max_element(opt.r_grid.begin(), opt.r_grid.end()));
  ctx.emit(stem + "_error_curve.csv", [&](const auto& p) { io::write_error_curve(p, curve); });
  ctx.emit(stem + "_scree.csv", [&](const auto& p) { io::write_csv(p, Matrix(scree), {"eigenvalue"}); });
}

void fig10(const RunConfig& cfg, RunContext& ctx) {
  const auto out = sim::simulate(ex::torus_config(1000, 500, 1.0, cfg.seed));
  const auto ang = latent::torus_angles(out.Z);
  Matrix T(out.Y.rows(), 2);
  T.col(0) = ang.azimuth;
  T.col(1) = ang.elevation;
  knn::CurveOptions opt;
  opt.r_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 20, 25, 30, 40, 50, 75, 100, 150, 200};
  opt.n_splits = splits_or(cfg, 50);
  opt.seed = cfg.seed;
  opt.target_names = {"azimuth", "elevation"};
  emit_curve(ctx, "fig10", out.Y, T, opt);
}

void fig11(const RunConfig& cfg, RunContext& ctx) {
  const auto out = sim::simulate(ex::mixture10_config(cfg.seed));
  knn::Labels labels(static_cast<std::size_t>(out.Y.rows()));
  for (Index i = 0; i < out.Y.rows(); ++i) labels[i] = out.Z.atom(i);
  knn::CurveOptions opt;
  opt.r_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 14, 16, 18, 20, 25, 30, 40, 50, 75, 100, 150, 200};
  opt.n_splits = splits_or(cfg, 50);
  opt.seed = cfg.seed;
  emit_curve(ctx, "fig11", out.Y, labels, opt);
}

// One dimension-selection configuration. With `curve_only` just the
// fig12c curve is written.
void fig12_config(const RunConfig& cfg, RunContext& ctx, int c, bool curve_only) {
  const std::string tag = "config" + std::to_string(c);
  const auto out = sim::simulate(ex::dimselect_config(c, 1.0, cfg.seed));
  const Index r_max = dimselect::default_r_max(out.Y.rows(), out.Y.cols());
  const auto report = dimselect::wasserstein_dimension_select(out.Y, r_max);
  const Vector scree = embed::scree(out.Y, r_max);
  const auto elbow = dimselect::elbow_select(std::vector<double>(scree.data(), scree.data() + scree.size()));

  Matrix curve(r_max, 3);
  for (Index r = 0; r < r_max; ++r) curve.row(r) << double(report.curve[r].r), report.curve[r].d, double(elbow.dimension);
  ctx.emit("fig12c_" + tag + ".csv", [&](const auto& p) { io::write_csv(p, curve, {"r", "d_wasserstein", "elbow_r"}); });
  auto node = ctx.summary()[tag];
  node["selected"] = report.selected;
  node["elbow_r"] = elbow.dimension;
  if (curve_only) return;

  ctx.emit("fig12a_" + tag + "_latents.csv", [&](const auto& p) { io::write_latents(p, out.Z); });
  const auto emb = embed::pc_scores(out.Y, std::max<Index>(3, report.selected));
  const Matrix S = emb.scaled_scores();
  ctx.emit("fig12b_" + tag + "_scores.csv", [&](const auto& p) { io::write_scores(p, S.leftCols(3)); });

  const Matrix Sr = S.leftCols(report.selected);
  // Full filtration: the scale runs to the diameter of the cloud.
  const auto dgm = rips::rips_persistence(Sr, linalg::pairwise_distances(Sr).maxCoeff(), 1);
  ctx.emit("fig12e_" + tag + "_diagram.csv", [&](const auto& p) { io::write_diagram(p, dgm); });
  const auto counts = rips::count_features(dgm, ex::kFeatureCutoff);
  node["beta0"] = counts.beta0;
  node["beta1"] = counts.beta1;
}

void fig12c(const RunConfig& cfg, RunContext& ctx) {
  for (int c : cfg.reproduce.configs) fig12_config(cfg, ctx, c, true);
}

void fig12(const RunConfig& cfg, RunContext& ctx) {
  for (int c : cfg.reproduce.configs) fig12_config(cfg, ctx, c, false);
  // Noise sweep on the RBF configuration.
  const Index seeds = seeds_or(cfg, 10);
  const std::vector<double> sigmas = {0.25, 1.0, 4.0};
  Matrix sweep(static_cast<Index>(sigmas.size()) * seeds, 3);
  Index row = 0;
  for (double sigma : sigmas) {
    for (Index k = 0; k < seeds; ++k, ++row) {
      const auto out = sim::simulate(ex::dimselect_config(4, sigma, replicate_seed(cfg.seed, k)));
      const auto rep = dimselect::wasserstein_dimension_select(out.Y, dimselect::default_r_max(out.Y.rows(), out.Y.cols()));
      sweep.row(row) << sigma, double(k), double(rep.selected);
    }
  }
  ctx.emit("fig12_sigma_sweep.csv", [&](const auto& p) { io::write_csv(p, sweep, {"sigma", "replicate", "r_hat"}); });
}

}  // namespace

const std::vector<std::string>& reproduce_targets() {
  static const std::vector<std::string> targets = {"fig4", "fig5", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12", "fig12c"};
  return targets;
}

void reproduce(const RunConfig& cfg, RunContext& ctx) {
  const auto& t = cfg.reproduce.target;
  ctx.summary()["target"] = t;
  if (t == "fig4") return fig4(cfg, ctx);
  if (t == "fig5") return fig5(cfg, ctx);
  if (t == "fig7") return fig7(cfg, ctx);
  if (t == "fig8") return fig8(cfg, ctx);
  if (t == "fig9") return fig9(cfg, ctx);
  if (t == "fig10") return fig10(cfg, ctx);
  if (t == "fig11") return fig11(cfg, ctx);
  if (t == "fig12") return fig12(cfg, ctx);
  if (t == "fig12c") return fig12c(cfg, ctx);
  throw ConfigError("unknown reproduce target '" + t + "' (fig4, fig5, fig7, fig8, fig9, fig10, fig11, fig12, fig12c)");
}

}  // namespace lms::cli
