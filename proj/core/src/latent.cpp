#include "lms/latent.hpp"

#include "lms/random.hpp"
#include "lms/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace lms::latent {

namespace {

constexpr std::uint64_t kLatentStream = 0x4C41544Eull;  // "LATN"
constexpr int kMaxRejectionTries = 1'000'000;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool in_polygon(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& z) {
  bool inside = false;
  const std::size_t m = poly.size();
  for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a.y() > z.y()) != (b.y() > z.y())) {
      const double x_cross = (b.x() - a.x()) * (z.y() - a.y()) / (b.y() - a.y()) + a.x();
      if (z.x() < x_cross) inside = !inside;
    }
  }
  return inside;
}

double signed_area(const std::vector<Eigen::Vector2d>& poly) {
  double area = 0.0;
  const std::size_t m = poly.size();
  for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
    area += poly[j].x() * poly[i].y() - poly[i].x() * poly[j].y();
  }
  return 0.5 * area;
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> bounding_box(const PlanarRegion& region) {
  return std::visit(
      overloaded{
          [](const Annulus& a) {
            const Eigen::Vector2d r(a.outer_radius, a.outer_radius);
            return std::pair{Eigen::Vector2d(a.center - r), Eigen::Vector2d(a.center + r)};
          },
          [](const Polygon& p) {
            Eigen::Vector2d lo = p.outer.front(), hi = p.outer.front();
            for (const auto& v : p.outer) {
              lo = lo.cwiseMin(v);
              hi = hi.cwiseMax(v);
            }
            return std::pair{lo, hi};
          }},
      region.shape);
}

std::vector<Eigen::Vector2d> rect(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

}  // namespace

void validate(const LatentSpace& space) {
  std::visit(
      overloaded{
          [](const Discrete& d) {
            if (d.probs.empty()) throw InvalidInput("Discrete space needs at least one atom");
            double total = 0.0;
            for (double p : d.probs) {
              if (!(p >= 0.0)) throw InvalidInput("Discrete probabilities must be non-negative");
              total += p;
            }
            if (std::abs(total - 1.0) > tol::kSimplex * static_cast<double>(d.probs.size())) {
              throw InvalidInput("Discrete probabilities must sum to 1");
            }
          },
          [](const TorusR3& t) {
            if (!(t.major_radius > 0.0) || !(t.minor_radius > 0.0)) {
              throw InvalidInput("torus radii must be positive");
            }
          },
          [](const Sphere& s) {
            if (s.ambient_dim < 1) throw InvalidInput("sphere ambient dimension must be >= 1");
          },
          [](const PlanarRegion& r) {
            std::visit(overloaded{[](const Annulus& a) {
                                    if (!(a.inner_radius >= 0.0) ||
                                        !(a.outer_radius > a.inner_radius)) {
                                      throw InvalidInput("annulus needs 0 <= inner < outer");
                                    }
                                  },
                                  [](const Polygon& p) {
                                    if (p.outer.size() < 3 ||
                                        std::abs(signed_area(p.outer)) < 1e-12) {
                                      throw InvalidInput("polygon is degenerate");
                                    }
                                    for (const auto& h : p.holes) {
                                      if (h.size() < 3 || std::abs(signed_area(h)) < 1e-12) {
                                        throw InvalidInput("polygon hole is degenerate");
                                      }
                                    }
                                  }},
                       r.shape);
          }},
      space);
}

Index ambient_dim(const LatentSpace& space) {
  return std::visit(overloaded{[](const Discrete&) -> Index { return 1; },
                               [](const TorusR3&) -> Index { return 3; },
                               [](const Sphere& s) -> Index { return s.ambient_dim; },
                               [](const PlanarRegion&) -> Index { return 2; }},
                    space);
}

std::string describe(const LatentSpace& space) {
  std::ostringstream os;
  std::visit(overloaded{[&](const Discrete& d) { os << "discrete(m=" << d.size() << ")"; },
                        [&](const TorusR3& t) {
                          os << "torus(R=" << t.major_radius << ", r=" << t.minor_radius << ")";
                        },
                        [&](const Sphere& s) { os << "sphere(d=" << s.ambient_dim << ")"; },
                        [&](const PlanarRegion& r) {
                          os << (std::holds_alternative<Annulus>(r.shape) ? "annulus" : "polygon");
                        }},
             space);
  return os.str();
}

bool contains(const PlanarRegion& region, const Eigen::Vector2d& z) {
  return std::visit(overloaded{[&](const Annulus& a) {
                                 const double r = (z - a.center).norm();
                                 return r >= a.inner_radius && r <= a.outer_radius;
                               },
                               [&](const Polygon& p) {
                                 if (!in_polygon(p.outer, z)) return false;
                                 for (const auto& h : p.holes) {
                                   if (in_polygon(h, z)) return false;
                                 }
                                 return true;
                               }},
                    region.shape);
}

LatentSample sample(const LatentSpace& space, Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("sample: n must be >= 1");
  validate(space);
  Philox4x32 rng(seed, kLatentStream);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LatentSample out{Matrix(n, ambient_dim(space)), space, seed};

  std::visit(
      overloaded{
          [&](const Discrete& d) {
            std::vector<double> cdf(d.probs.size());
            std::partial_sum(d.probs.begin(), d.probs.end(), cdf.begin());
            for (Index i = 0; i < n; ++i) {
              const double u = unit(rng) * cdf.back();
              auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
              if (it == cdf.end()) --it;
              out.points(i, 0) = static_cast<double>(it - cdf.begin());
            }
          },
          [&](const TorusR3& t) {
            // Surface element is r (R + r cos v) du dv, so the tube angle v
            // is accepted with probability (R + r cos v) / (R + r).
            const double R = t.major_radius, r = t.minor_radius;
            for (Index i = 0; i < n; ++i) {
              const double u = 2.0 * std::numbers::pi * unit(rng) - std::numbers::pi;
              double v = 0.0;
              for (int tries = 0;; ++tries) {
                v = 2.0 * std::numbers::pi * unit(rng) - std::numbers::pi;
                if (unit(rng) * (R + r) <= R + r * std::cos(v)) break;
                if (tries > kMaxRejectionTries) throw NumericalError("torus rejection stalled");
              }
              out.points(i, 0) = (R + r * std::cos(v)) * std::cos(u);
              out.points(i, 1) = (R + r * std::cos(v)) * std::sin(u);
              out.points(i, 2) = r * std::sin(v);
            }
          },
          [&](const Sphere& s) {
            std::normal_distribution<double> normal(0.0, 1.0);
            for (Index i = 0; i < n; ++i) {
              double norm = 0.0;
              do {
                for (Index k = 0; k < s.ambient_dim; ++k) out.points(i, k) = normal(rng);
                norm = out.points.row(i).norm();
              } while (norm < 1e-12);
              out.points.row(i) /= norm;
            }
          },
          [&](const PlanarRegion& region) {
            const auto [lo, hi] = bounding_box(region);
            for (Index i = 0; i < n; ++i) {
              for (int tries = 0;; ++tries) {
                const Eigen::Vector2d z(lo.x() + (hi.x() - lo.x()) * unit(rng),
                                        lo.y() + (hi.y() - lo.y()) * unit(rng));
                if (contains(region, z)) {
                  out.points.row(i) = z.transpose();
                  break;
                }
                if (tries > kMaxRejectionTries) throw NumericalError("region rejection stalled");
              }
            }
          }},
      space);
  return out;
}

double constraint_residual(const LatentSample& s) {
  double worst = 0.0;
  std::visit(
      overloaded{
          [&](const Discrete& d) {
            for (Index i = 0; i < s.size(); ++i) {
              const double a = s.points(i, 0);
              if (a != std::floor(a) || a < 0 || a >= static_cast<double>(d.size())) {
                worst = std::max(worst, 1.0);
              }
            }
          },
          [&](const TorusR3& t) {
            for (Index i = 0; i < s.size(); ++i) {
              const double rho = std::hypot(s.points(i, 0), s.points(i, 1));
              const double lhs = std::pow(rho - t.major_radius, 2) + std::pow(s.points(i, 2), 2);
              worst = std::max(worst, std::abs(lhs - t.minor_radius * t.minor_radius));
            }
          },
          [&](const Sphere&) {
            for (Index i = 0; i < s.size(); ++i) {
              worst = std::max(worst, std::abs(s.points.row(i).norm() - 1.0));
            }
          },
          [&](const PlanarRegion& r) {
            for (Index i = 0; i < s.size(); ++i) {
              if (!contains(r, s.points.row(i).transpose())) worst = std::max(worst, 1.0);
            }
          }},
      s.space);
  return worst;
}

TorusAngles torus_angles(const LatentSample& s) {
  const auto* torus = std::get_if<TorusR3>(&s.space);
  if (torus == nullptr) throw InvalidInput("torus_angles: sample is not on a torus");
  TorusAngles out{Vector(s.size()), Vector(s.size())};
  for (Index i = 0; i < s.size(); ++i) {
    const double x = s.points(i, 0), y = s.points(i, 1), z = s.points(i, 2);
    out.azimuth(i) = std::atan2(y, x);
    out.elevation(i) = std::atan2(z, std::hypot(x, y) - torus->major_radius);
  }
  return out;
}

Matrix torus_point(const TorusR3& t, const Vector& azimuth, const Vector& elevation) {
  if (azimuth.size() != elevation.size()) throw InvalidInput("torus_point: length mismatch");
  Matrix out(azimuth.size(), 3);
  for (Index i = 0; i < azimuth.size(); ++i) {
    const double rho = t.major_radius + t.minor_radius * std::cos(elevation(i));
    out(i, 0) = rho * std::cos(azimuth(i));
    out(i, 1) = rho * std::sin(azimuth(i));
    out(i, 2) = t.minor_radius * std::sin(elevation(i));
  }
  return out;
}

PlanarRegion holed_square_region() {
  // 1.4 x 1.4 square centred at the origin; a ring of eight 0.2 x 0.2 holes.
  Polygon p{rect(-0.7, -0.7, 0.7, 0.7), {}};
  const double c[3] = {-0.4, 0.0, 0.4};
  for (double x : c) {
    for (double y : c) {
      if (x == 0.0 && y == 0.0) continue;
      p.holes.push_back(rect(x - 0.1, y - 0.1, x + 0.1, y + 0.1));
    }
  }
  return {p};
}

PlanarRegion z_shape_region() {
  // Block 'Z' of stroke width 0.5 inside [-1.5, 1.5] x [-1.5, 1.5].
  Polygon p{{{-1.5, 1.0},
             {-1.5, 1.5},
             {1.5, 1.5},
             {1.5, 1.0},
             {-0.8, -1.0},
             {1.5, -1.0},
             {1.5, -1.5},
             {-1.5, -1.5},
             {-1.5, -1.0},
             {0.8, 1.0}},
            {}};
  return {p};
}

PlanarRegion ring_region() { return {Annulus{Eigen::Vector2d::Zero(), 1.5, 3.0}}; }

}  // namespace lms::latent
