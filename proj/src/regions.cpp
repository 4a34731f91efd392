#include "urt/regions.hpp"

#include <cmath>
#include <stdexcept>

#include "urt/parallel.hpp"
#include "urt/rng.hpp"
#include "urt/spectral.hpp"

namespace urt {

namespace {

constexpr double kRateCap = 700.0;  // expm1 overflows past this

void check_query(const RegionQuery& query) {
  if (query.norm && query.norm->dimension() != query.mapping.dimension()) {
    throw std::invalid_argument("region: mapping/norm dimension mismatch");
  }
}

/// Scaled radius of the queried region's defining map: the constrained
/// region uses the norm-augmented radius, the unconstrained one the
/// asymptotic radius.
double region_radius(const RegionQuery& query, const Vector& s) {
  if (query.norm) return spectral_radius_scaled(query.mapping, *query.norm, s);
  // Zero coordinates delete themselves here too.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) < 0.0) throw std::invalid_argument("region: s must be nonnegative");
    if (s(i) > 0.0) keep.push_back(i);
  }
  if (keep.empty()) return 0.0;
  if (static_cast<Eigen::Index>(keep.size()) == s.size()) {
    return asymptotic_radius(query.mapping.scaled(s));
  }
  Vector sub(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) sub(static_cast<Eigen::Index>(i)) = s(keep[i]);
  return asymptotic_radius(query.mapping.restricted(keep).scaled(sub));
}

MembershipResult classify(const RegionQuery& query, double rho, double tol) {
  MembershipResult out;
  out.spectral_radius = rho;
  if (rho < 1.0 - tol) {
    out.status = Membership::Interior;
    out.achievable = true;
  } else if (std::abs(rho - 1.0) <= tol) {
    out.status = Membership::Boundary;
    // The unconstrained region is open: its boundary is approached but
    // never attained by a finite allocation.
    out.achievable = query.norm.has_value();
  } else {
    out.status = Membership::Exterior;
    out.achievable = false;
  }
  return out;
}

Vector expm1_vec(const Vector& r) {
  Vector s(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) s(i) = std::expm1(r(i));
  return s;
}

Vector log1p_vec(const Vector& s) {
  Vector r(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) r(i) = std::log1p(s(i));
  return r;
}

}  // namespace

namespace detail {

/// Boundary scale along a rate direction: the unique t with
/// rho(expm1(t d)) = 1, found by geometric bracketing from t = 1 and
/// bisection to relative width tol. radius must be monotone in t.
double rate_boundary_scale(const RegionQuery& query, const Vector& d, double tol) {
  const double dmax = d.maxCoeff();
  const auto radius_at = [&](double t) {
    if (t * dmax > kRateCap) {
      throw std::invalid_argument("region: rate component exceeds 700 while bracketing");
    }
    return region_radius(query, expm1_vec(t * d));
  };
  double lo = 0.0, hi = 1.0;
  double f_hi = radius_at(hi);
  if (f_hi < 1.0) {
    while (f_hi < 1.0) {
      lo = hi;
      hi *= 2.0;
      f_hi = radius_at(hi);
    }
  } else {
    while (radius_at(lo = hi / 2.0) >= 1.0) hi = lo;
  }
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (radius_at(mid) >= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

MembershipResult sinr_membership(const RegionQuery& query, const Vector& s, double tol) {
  check_query(query);
  if (s.size() != query.mapping.dimension()) {
    throw std::invalid_argument("region: s dimension mismatch");
  }
  return classify(query, region_radius(query, s), tol);
}

MembershipResult rate_membership(const RegionQuery& query, const Vector& r, double tol) {
  check_query(query);
  if (r.size() != query.mapping.dimension()) {
    throw std::invalid_argument("region: r dimension mismatch");
  }
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (r(i) < 0.0) throw std::invalid_argument("region: rates must be nonnegative");
    if (r(i) > kRateCap) {
      throw std::invalid_argument("region: rate component exceeds 700 (not representable)");
    }
  }
  return classify(query, region_radius(query, expm1_vec(r)), tol);
}

BoundaryPoint pareto_point_from_power(const InterferenceMapping& T,
                                      const PolyhedralMonotoneNorm& norm, const Vector& p) {
  if (p.size() != T.dimension()) {
    throw std::invalid_argument("pareto point: power dimension mismatch");
  }
  if ((p.array() <= 0.0).any()) {
    throw std::invalid_argument("pareto point: power must be strictly positive");
  }
  const double np = norm.evaluate(p);
  if (std::abs(np - 1.0) > 1e-12) {
    throw std::invalid_argument("pareto point: ||power|| must equal 1 (got " +
                                std::to_string(np) + ")");
  }
  BoundaryPoint point;
  point.power = p;
  point.sinr = p.cwiseQuotient(T.evaluate(p));
  point.rate = log1p_vec(point.sinr);
  point.radius_check = spectral_radius_scaled(T, norm, point.sinr);
  return point;
}

RadialBoundaryResult radial_boundary(const RegionQuery& query, const Vector& direction,
                                     double tol) {
  check_query(query);
  if (direction.size() != query.mapping.dimension()) {
    throw std::invalid_argument("region: direction dimension mismatch");
  }
  if ((direction.array() <= 0.0).any()) {
    throw std::invalid_argument("region: direction must be strictly positive");
  }

  RadialBoundaryResult out;
  if (query.space == RegionSpace::Sinr) {
    // Homogeneity: rho(t d) = t rho(d), so the boundary scale is exact.
    const double rho_d = region_radius(query, direction);
    if (rho_d <= 0.0) {
      throw std::invalid_argument("region: direction has unbounded boundary scale");
    }
    out.t_star = 1.0 / rho_d;
    out.sinr = out.t_star * direction;
    out.rate = log1p_vec(out.sinr);
  } else {
    out.t_star = detail::rate_boundary_scale(query, direction, tol);
    out.rate = out.t_star * direction;
    out.sinr = expm1_vec(out.rate);
  }

  if (query.norm) {
    const auto eig = conditional_eigenpair(query.mapping.scaled(out.sinr), *query.norm);
    out.power = eig.vector;
    // Recompute the coordinates the attained power actually delivers.
    out.sinr = eig.vector.cwiseQuotient(query.mapping.evaluate(eig.vector));
    out.rate = log1p_vec(out.sinr);
  }
  out.radius_check = region_radius(query, out.sinr);
  return out;
}

std::vector<BoundaryPoint> sample_pareto_cloud(const InterferenceMapping& T,
                                               const PolyhedralMonotoneNorm& norm,
                                               int count, std::uint64_t seed, int threads) {
  if (count < 0) throw std::invalid_argument("cloud: count must be nonnegative");
  if (T.dimension() != norm.dimension()) {
    throw std::invalid_argument("cloud: mapping/norm dimension mismatch");
  }
  const Eigen::Index n = T.dimension();
  std::vector<BoundaryPoint> cloud(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   Rng rng = Rng::substream(seed, i);
                   Vector p(n);
                   for (Eigen::Index j = 0; j < n; ++j) p(j) = rng.uniform_open01();
                   p /= norm.evaluate(p);
                   cloud[i] = pareto_point_from_power(T, norm, p);
                 }
               });
  return cloud;
}

ConvexityProbeReport midpoint_convexity_probe(const RegionQuery& query, int trials,
                                              std::uint64_t seed, double tol, int threads) {
  check_query(query);
  if (trials < 0) throw std::invalid_argument("probe: trials must be nonnegative");
  const Eigen::Index n = query.mapping.dimension();

  std::vector<double> margins(static_cast<std::size_t>(trials), 0.0);
  std::vector<char> exterior(static_cast<std::size_t>(trials), 0);
  parallel_for(static_cast<std::size_t>(trials), threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   Rng rng = Rng::substream(seed, i);
                   const auto interior_point = [&]() {
                     Vector d(n);
                     for (Eigen::Index j = 0; j < n; ++j) d(j) = rng.uniform_open01();
                     double scale = rng.uniform01();
                     if (scale == 0.0) scale = 0.5;
                     double t;
                     if (query.space == RegionSpace::Sinr) {
                       const double rho_d = region_radius(query, d);
                       if (rho_d <= 0.0) {
                         throw std::invalid_argument(
                             "probe: direction has unbounded boundary scale");
                       }
                       t = 1.0 / rho_d;
                     } else {
                       t = detail::rate_boundary_scale(query, d, 1e-10);
                     }
                     return Vector(scale * t * d);
                   };
                   const Vector x1 = interior_point();
                   const Vector x2 = interior_point();
                   const Vector mid = 0.5 * (x1 + x2);
                   const MembershipResult m = query.space == RegionSpace::Sinr
                                                  ? sinr_membership(query, mid, tol)
                                                  : rate_membership(query, mid, tol);
                   margins[i] = m.spectral_radius - 1.0;
                   exterior[i] = m.status == Membership::Exterior ? 1 : 0;
                 }
               });

  ConvexityProbeReport report;
  report.trials = trials;
  for (std::size_t i = 0; i < margins.size(); ++i) {
    report.violations += exterior[i];
    if (i == 0 || margins[i] > report.worst_margin) report.worst_margin = margins[i];
  }
  return report;
}

}  // namespace urt
