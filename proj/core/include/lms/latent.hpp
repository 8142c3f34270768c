#pragma once

// Latent space descriptors and i.i.d. samplers for the latent law mu.

#include "lms/types.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace lms::latent {

/// Finite space {0, ..., m-1} with the given atom probabilities.
struct Discrete {
  std::vector<double> probs;
  Index size() const { return static_cast<Index>(probs.size()); }
};

/// Ring torus in R^3: distance `major_radius` from the z-axis to the tube
/// centre, tube radius `minor_radius`.
struct TorusR3 {
  double major_radius = 2.0;
  double minor_radius = 1.0;
};

/// Unit sphere in R^ambient_dim.
struct Sphere {
  Index ambient_dim = 3;
};

/// Simple polygon (counter-clockwise or clockwise vertices) with optional
/// polygonal holes. Membership uses the even-odd rule.
struct Polygon {
  std::vector<Eigen::Vector2d> outer;
  std::vector<std::vector<Eigen::Vector2d>> holes;
};

struct Annulus {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double inner_radius = 0.5;
  double outer_radius = 1.0;
};

/// Planar region sampled uniformly by rejection from its bounding box.
struct PlanarRegion {
  std::variant<Annulus, Polygon> shape;
};

using LatentSpace = std::variant<Discrete, TorusR3, Sphere, PlanarRegion>;

/// Throws InvalidInput unless the descriptor satisfies its invariants.
void validate(const LatentSpace& space);

/// Ambient coordinate dimension (1 for Discrete, holding the atom index).
Index ambient_dim(const LatentSpace& space);

std::string describe(const LatentSpace& space);

/// n latent points, one per row of `points`. Discrete atoms are stored as
/// their (exactly representable) index in a single column.
struct LatentSample {
  Matrix points;
  LatentSpace space;
  std::uint64_t seed = 0;

  Index size() const { return points.rows(); }
  bool is_discrete() const { return std::holds_alternative<Discrete>(space); }
  int atom(Index i) const { return static_cast<int>(points(i, 0)); }
};

/// i.i.d. draws from mu on `space`; uniform (area measure) for continuous spaces.
LatentSample sample(const LatentSpace& space, Index n, std::uint64_t seed);

/// Largest violation of the space's defining constraint over the sample
/// (torus implicit equation, unit norm, atom range, region membership).
double constraint_residual(const LatentSample& sample);

struct TorusAngles {
  Vector azimuth;    // angle around the z-axis, in (-pi, pi]
  Vector elevation;  // angle around the tube, in (-pi, pi]
};

/// Azimuth and elevation of each point of a torus sample.
TorusAngles torus_angles(const LatentSample& sample);

/// Inverse of torus_angles.
Matrix torus_point(const TorusR3& torus, const Vector& azimuth, const Vector& elevation);

/// 0 when the atoms coincide, 1 otherwise.
inline double discrete_metric(int i, int j) { return i == j ? 0.0 : 1.0; }

bool contains(const PlanarRegion& region, const Eigen::Vector2d& z);

/// Fixed planar regions used by the dimension-selection experiments.
PlanarRegion holed_square_region();  // square with eight square holes
PlanarRegion z_shape_region();       // block letter 'Z'
PlanarRegion ring_region();          // annulus (one hole)

}  // namespace lms::latent
