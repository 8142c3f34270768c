#include "lms/knn.hpp"

#include "lms/embed.hpp"
#include "lms/parallel.hpp"
#include "lms/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace lms::knn {

namespace {

constexpr std::uint64_t kSplitStream = 0x4B4E4E53;  // "KNNS"

// Indices of the k nearest training rows to `x`, ties by index.
void nearest(const Matrix& train, const Eigen::Ref<const Eigen::RowVectorXd>& x, Index k,
             std::vector<std::pair<double, Index>>& scratch, std::vector<Index>& out) {
  scratch.resize(static_cast<std::size_t>(train.rows()));
  for (Index i = 0; i < train.rows(); ++i) scratch[i] = {(train.row(i) - x).squaredNorm(), i};
  std::partial_sort(scratch.begin(), scratch.begin() + k, scratch.end());
  out.resize(static_cast<std::size_t>(k));
  for (Index t = 0; t < k; ++t) out[t] = scratch[t].second;
}

Matrix take_rows(const Matrix& M, const std::vector<Index>& rows, Index cols) {
  Matrix out(static_cast<Index>(rows.size()), cols);
  for (std::size_t t = 0; t < rows.size(); ++t) out.row(static_cast<Index>(t)) = M.row(rows[t]).head(cols);
  return out;
}

Targets take_targets(const Targets& targets, const std::vector<Index>& rows) {
  if (const auto* m = std::get_if<Matrix>(&targets)) return take_rows(*m, rows, m->cols());
  const auto& labels = std::get<Labels>(targets);
  Labels out(rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) out[t] = labels[rows[t]];
  return out;
}

Index target_rows(const Targets& t) {
  if (const auto* m = std::get_if<Matrix>(&t)) return m->rows();
  return static_cast<Index>(std::get<Labels>(t).size());
}

}  // namespace

Task SupervisedSet::task() const {
  return std::holds_alternative<Matrix>(targets) ? Task::Regression : Task::Classification;
}

Targets knn_predict(const SupervisedSet& train, const Matrix& test_features, Index k) {
  const Index n = train.size();
  if (n == 0) throw InvalidInput("knn_predict: empty training set");
  if (target_rows(train.targets) != n) throw InvalidInput("knn_predict: feature and target rows differ");
  if (k < 1 || k > n) throw InvalidInput("knn_predict: k must lie in [1, train size]");
  if (test_features.cols() != train.features.cols()) throw InvalidInput("knn_predict: feature dimension mismatch");

  std::vector<std::pair<double, Index>> scratch;
  std::vector<Index> idx;
  if (const auto* y = std::get_if<Matrix>(&train.targets)) {
    Matrix out(test_features.rows(), y->cols());
    for (Index q = 0; q < test_features.rows(); ++q) {
      nearest(train.features, test_features.row(q), k, scratch, idx);
      Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(y->cols());
      for (Index i : idx) acc += y->row(i);
      out.row(q) = acc / static_cast<double>(k);
    }
    return out;
  }
  const auto& labels = std::get<Labels>(train.targets);
  Labels out(static_cast<std::size_t>(test_features.rows()));
  std::map<int, Index> votes;
  for (Index q = 0; q < test_features.rows(); ++q) {
    nearest(train.features, test_features.row(q), k, scratch, idx);
    votes.clear();
    for (Index i : idx) ++votes[labels[i]];
    // std::map iterates labels in increasing order, so the first maximum is the smallest label.
    int best = votes.begin()->first;
    Index best_count = 0;
    for (const auto& [label, count] : votes) {
      if (count > best_count) {
        best = label;
        best_count = count;
      }
    }
    out[q] = best;
  }
  return out;
}

double one_minus_r2(const Vector& truth, const Vector& predicted, double train_mean) {
  const double ss_res = (truth - predicted).squaredNorm();
  const double ss_tot = (truth.array() - train_mean).square().sum();
  if (ss_tot == 0.0) throw NumericalError("one_minus_r2: test targets equal the training mean");
  return ss_res / ss_tot;
}

double misclassification_rate(const Labels& truth, const Labels& predicted) {
  if (truth.size() != predicted.size() || truth.empty()) throw InvalidInput("misclassification_rate: size mismatch");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += truth[i] != predicted[i];
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidInput("percentile: empty input");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ErrorCurve error_curve(const Matrix& Y, const Targets& targets, const CurveOptions& opt) {
  const Index n = Y.rows();
  const Index max_rank = std::min(Y.rows(), Y.cols());
  if (opt.r_grid.empty()) throw InvalidInput("error_curve: empty r grid");
  for (Index r : opt.r_grid) {
    if (r < 1 || r > max_rank) throw InvalidInput("error_curve: r grid must lie in [1, min(n, p)]");
  }
  if (!(opt.train_fraction > 0.0 && opt.train_fraction < 1.0)) {
    throw InvalidInput("error_curve: train fraction must lie in (0, 1)");
  }
  if (opt.n_splits < 1) throw InvalidInput("error_curve: need at least one split");
  if (target_rows(targets) != n) throw InvalidInput("error_curve: target rows differ from data rows");
  const Index n_train = static_cast<Index>(std::floor(opt.train_fraction * static_cast<double>(n)));
  if (n_train < opt.k || n_train >= n) throw InvalidInput("error_curve: split leaves too few training or test rows");

  const bool regression = std::holds_alternative<Matrix>(targets);
  const Index t_cols = regression ? std::get<Matrix>(targets).cols() : 1;
  const Index r_top = *std::max_element(opt.r_grid.begin(), opt.r_grid.end());
  const std::size_t G = opt.r_grid.size();

  // Unsupervised step done once; prefixes of the top-r scores give every r.
  Matrix full_scores;
  if (!opt.train_only_scores) full_scores = embed::pc_scores(Y, r_top, opt.centered).scores;

  // errors[split][g * t_cols + t]
  std::vector<std::vector<double>> errors(static_cast<std::size_t>(opt.n_splits),
                                          std::vector<double>(G * static_cast<std::size_t>(t_cols)));
  parallel_for(static_cast<std::size_t>(opt.n_splits), [&](std::size_t s) {
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    Philox4x32 rng(opt.seed, stream_id(kSplitStream, s));
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Index> train_rows(perm.begin(), perm.begin() + n_train);
    std::vector<Index> test_rows(perm.begin() + n_train, perm.end());

    Matrix scores_train, scores_test;
    if (opt.train_only_scores) {
      // Fit V on the training rows and project the test rows onto it.
      const Matrix Ytr = take_rows(Y, train_rows, Y.cols());
      const Matrix Yte = take_rows(Y, test_rows, Y.cols());
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(Y.cols());
      if (opt.centered) mean = Ytr.colwise().mean();
      const Matrix Ctr = Ytr.rowwise() - mean;
      const Index r_fit = std::min(r_top, std::min(Ctr.rows(), Ctr.cols()));
      const auto emb = embed::pc_scores(Ytr, r_fit, opt.centered);
      // V = Ctr^T scores diag(1/|scores_col|^2) recovers the loading vectors.
      Matrix V = Ctr.transpose() * emb.scores;
      for (Index c = 0; c < V.cols(); ++c) {
        const double nrm = V.col(c).norm();
        if (nrm > 0.0) V.col(c) /= nrm;
      }
      scores_train = Matrix::Zero(Ytr.rows(), r_top);
      scores_test = Matrix::Zero(Yte.rows(), r_top);
      scores_train.leftCols(r_fit) = Ctr * V;
      scores_test.leftCols(r_fit) = (Yte.rowwise() - mean) * V;
    } else {
      scores_train = take_rows(full_scores, train_rows, r_top);
      scores_test = take_rows(full_scores, test_rows, r_top);
    }
    const Targets train_t = take_targets(targets, train_rows);
    const Targets test_t = take_targets(targets, test_rows);

    for (std::size_t g = 0; g < G; ++g) {
      const Index r = opt.r_grid[g];
      const SupervisedSet train{scores_train.leftCols(r), train_t};
      const auto pred = knn_predict(train, scores_test.leftCols(r), opt.k);
      if (regression) {
        const auto& ytr = std::get<Matrix>(train_t);
        const auto& yte = std::get<Matrix>(test_t);
        const auto& yhat = std::get<Matrix>(pred);
        for (Index t = 0; t < t_cols; ++t) {
          errors[s][g * t_cols + t] = one_minus_r2(yte.col(t), yhat.col(t), ytr.col(t).mean());
        }
      } else {
        errors[s][g] = misclassification_rate(std::get<Labels>(test_t), std::get<Labels>(pred));
      }
    }
  });

  ErrorCurve curve;
  curve.metric = regression ? Metric::OneMinusR2 : Metric::MisclassificationRate;
  for (std::size_t g = 0; g < G; ++g) {
    for (Index t = 0; t < t_cols; ++t) {
      std::vector<double> vals(static_cast<std::size_t>(opt.n_splits));
      for (Index s = 0; s < opt.n_splits; ++s) vals[s] = errors[s][g * t_cols + t];
      ErrorRow row;
      row.r = opt.r_grid[g];
      row.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
      row.p5 = percentile(vals, 0.05);
      row.p95 = percentile(vals, 0.95);
      if (regression) {
        row.target = t < static_cast<Index>(opt.target_names.size()) ? opt.target_names[t]
                                                                     : "target" + std::to_string(t);
      }
      curve.rows.push_back(std::move(row));
    }
  }
  return curve;
}

}  // namespace lms::knn
