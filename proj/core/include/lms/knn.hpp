#pragma once

// Brute-force kNN regression and classification on PC scores, and the
// repeated train/test error curve over embedding dimensions.

#include "lms/types.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace lms::knn {

enum class Task { Regression, Classification };

using Labels = std::vector<int>;
using Targets = std::variant<Matrix, Labels>;  // n x t regression targets, or n labels

struct SupervisedSet {
  Matrix features;
  Targets targets;
  Task task() const;
  Index size() const { return features.rows(); }
};

/// Predictions for each test row: an m x t matrix for regression, m labels
/// for classification.
Targets knn_predict(const SupervisedSet& train, const Matrix& test_features, Index k);

enum class Metric { OneMinusR2, MisclassificationRate };

struct ErrorRow {
  Index r = 0;
  double mean = 0.0;
  double p5 = 0.0;
  double p95 = 0.0;
  std::string target;  // regression column name; empty for classification
};

struct ErrorCurve {
  Metric metric = Metric::OneMinusR2;
  std::vector<ErrorRow> rows;
};

struct CurveOptions {
  std::vector<Index> r_grid;
  Index n_splits = 200;
  double train_fraction = 0.7;
  Index k = 5;
  std::uint64_t seed = 0;
  bool centered = false;
  bool train_only_scores = false;       // fit the embedding on the training rows of each split
  std::vector<std::string> target_names;
};

/// Test-set 1 - R^2 with SS_tot centred at the training-target mean.
double one_minus_r2(const Vector& truth, const Vector& predicted, double train_mean);

double misclassification_rate(const Labels& truth, const Labels& predicted);

/// Type-7 percentile of `values` (copied).
double percentile(std::vector<double> values, double q);

/// For each split (seed-keyed permutation, floor(train_fraction * n) training
/// rows) and each r, fits kNN on PC scores and records the test error.
ErrorCurve error_curve(const Matrix& Y, const Targets& targets, const CurveOptions& options);

}  // namespace lms::knn
