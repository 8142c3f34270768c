#pragma once

// PCA dimension selection: split-half Wasserstein curve and an elbow baseline.

#include "lms/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace lms::dimselect {

enum class Method { Wasserstein, Elbow };

struct CurvePoint {
  Index r = 0;
  double d = 0.0;
};

struct DimSelectReport {
  std::vector<CurvePoint> curve;
  Index selected = 0;
  Method method = Method::Wasserstein;
  std::vector<Index> r_grid;
  bool degenerate = false;  // elbow only: flat spectrum
};

struct SplitOptions {
  bool shuffle = false;  // seed-keyed row shuffle before the split
  std::uint64_t seed = 0;
};

/// Default sweep cap min(50, ceil(n/2), p).
Index default_r_max(Index n, Index p);

/// Split-half selection. Rows [0, ceil(n/2)) form the first half; the first
/// half is projected onto its own top-r principal subspace and compared with
/// the second half by exact W1 in R^p, for r = 1..r_max.
DimSelectReport wasserstein_dimension_select(const Matrix& Y, Index r_max, const SplitOptions& options = {});

/// d_r for one r computed without the incremental cost update (reference path).
double split_half_distance(const Matrix& Y1, const Matrix& Y2, Index r);

struct ElbowResult {
  Index dimension = 1;
  bool degenerate = false;
};

/// Two-segment Gaussian profile likelihood: the split q in [1, k-1] that
/// maximizes the likelihood, i.e. minimizes the pooled within-segment sum of
/// squares. First maximizer wins. A flat spectrum returns 1, degenerate.
ElbowResult elbow_select(const std::vector<double>& eigenvalues);

/// Elbow pick with the per-split SS as its curve.
DimSelectReport elbow_report(const std::vector<double>& eigenvalues);

}  // namespace lms::dimselect
