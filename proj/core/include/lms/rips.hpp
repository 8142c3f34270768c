#pragma once

// Vietoris-Rips persistence in dimensions 0 and 1, bottleneck distance and
// persistence-threshold feature counts.

#include "lms/types.hpp"

#include <cstdint>
#include <vector>

namespace lms::rips {

struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;
  int dim = 0;
  bool flagged = false;  // alive at max_scale; death recorded as max_scale
  double persistence() const { return death - birth; }
};

struct PersistenceDiagram {
  std::vector<DiagramPoint> points;
  double max_scale = 0.0;

  std::vector<DiagramPoint> dimension(int dim) const;
};

inline constexpr Index kDefaultCap = 512;

struct RipsOptions {
  Index cap = kDefaultCap;  // largest n accepted when max_dim = 1
};

/// Rips persistence of the rows of `points` up to scale `max_scale`.
/// Zero-persistence pairs are omitted. Points are sorted by (dim, birth, death), unflagged first.
PersistenceDiagram rips_persistence(const Matrix& points, double max_scale, int max_dim,
                                    const RipsOptions& options = {});

/// Same, from a precomputed symmetric distance matrix.
PersistenceDiagram rips_persistence_from_distances(const Matrix& distances, double max_scale, int max_dim,
                                                   const RipsOptions& options = {});

/// Exact bottleneck distance between the dimension-`dim` parts of two diagrams.
/// Flagged points are matched as finite points with death = max_scale.
double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim);

/// Same, on raw (birth, death) lists.
double bottleneck(const std::vector<DiagramPoint>& a, const std::vector<DiagramPoint>& b);

struct FeatureCounts {
  Index beta0 = 0;
  Index beta1 = 0;
};

/// Points with death - birth > cutoff, per dimension.
FeatureCounts count_features(const PersistenceDiagram& diagram, double cutoff);

/// m distinct row indices out of n, sorted, chosen by a seed-keyed shuffle.
std::vector<Index> subsample_indices(Index n, Index m, std::uint64_t seed);

Matrix select_rows(const Matrix& points, const std::vector<Index>& rows);

}  // namespace lms::rips
