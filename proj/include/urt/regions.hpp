#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "urt/mappings.hpp"

namespace urt {

enum class RegionSpace { Sinr, Rate };

/// A region query: which mapping, which power constraint (absent means
/// the unconstrained region, which is open), and which space the query
/// vectors live in. Rates use natural logarithms throughout.
struct RegionQuery {
  InterferenceMapping mapping;
  std::optional<PolyhedralMonotoneNorm> norm;
  RegionSpace space = RegionSpace::Sinr;
};

enum class Membership { Interior, Boundary, Exterior };

struct MembershipResult {
  Membership status = Membership::Exterior;
  double spectral_radius = 0.0;
  /// Whether some power allocation actually attains the point. Boundary
  /// points of the unconstrained region are not achievable (that region
  /// is open); constrained boundary points are.
  bool achievable = false;
};

/// A point on the weak Pareto boundary of the constrained region,
/// carrying the power allocation that attains it (||power|| = 1), its
/// SINR and rate coordinates, and the recomputed scaled radius
/// (radius_check == 1 up to solver tolerance).
struct BoundaryPoint {
  Vector power;
  Vector sinr;
  Vector rate;
  double radius_check = 0.0;
};

struct RadialBoundaryResult {
  double t_star = 0.0;  // boundary scale along the queried direction
  Vector sinr;
  Vector rate;
  double radius_check = 0.0;
  std::optional<Vector> power;  // absent for unconstrained queries
};

struct ConvexityProbeReport {
  int trials = 0;
  int violations = 0;        // midpoints classified exterior
  double worst_margin = 0.0; // max over trials of rho(midpoint) - 1
};

/// Classifies an SINR vector s > 0 against the region boundary via the
/// scaled spectral radius. tol is the classification band around 1.
MembershipResult sinr_membership(const RegionQuery& query, const Vector& s,
                                 double tol = 1e-9);

/// Rate-space counterpart; maps r to SINR via expm1 (natural log rates).
/// Components above 700 are rejected (expm1 would overflow).
MembershipResult rate_membership(const RegionQuery& query, const Vector& r,
                                 double tol = 1e-9);

/// The boundary point attained by a strictly positive power vector with
/// ||p|| = 1 (enforced to 1e-12): sinr_n = p_n / t_n(p).
BoundaryPoint pareto_point_from_power(const InterferenceMapping& T,
                                      const PolyhedralMonotoneNorm& norm,
                                      const Vector& p);

/// Scales a strictly positive direction to the region boundary.
/// SINR space solves t* = 1 / rho(d) directly by homogeneity; rate
/// space brackets and bisects on the scaled radius (bracket grown
/// geometrically from t = 1, bisection until width <= tol * t*).
RadialBoundaryResult radial_boundary(const RegionQuery& query, const Vector& direction,
                                     double tol = 1e-10);

/// Samples `count` boundary points from uniform (0,1]^N power draws
/// rescaled to ||p|| = 1. Point i uses the substream seed ^ i, so the
/// output is independent of the thread partition; count = 0 yields an
/// empty cloud.
std::vector<BoundaryPoint> sample_pareto_cloud(const InterferenceMapping& T,
                                               const PolyhedralMonotoneNorm& norm,
                                               int count, std::uint64_t seed,
                                               int threads = 0);

/// Draws pairs of interior points (radial boundary points scaled by
/// uniform(0,1)) and classifies their midpoints, counting exterior
/// midpoints. worst_margin is the largest rho(midpoint) - 1 observed;
/// a convex region keeps violations at 0.
ConvexityProbeReport midpoint_convexity_probe(const RegionQuery& query, int trials,
                                              std::uint64_t seed, double tol = 1e-9,
                                              int threads = 0);

namespace detail {

/// Boundary scale along a strictly positive rate direction (the inner
/// bisection of radial_boundary, shared with the sum-rate solver).
double rate_boundary_scale(const RegionQuery& query, const Vector& d, double tol);

}  // namespace detail

}  // namespace urt
