#include "urt/sumrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "urt/certificates.hpp"
#include "urt/regions.hpp"
#include "urt/rng.hpp"
#include "urt/spectral.hpp"

namespace urt {

namespace {

constexpr double kRateCap = 700.0;
constexpr double kDirectionFloor = 1e-9;

Vector expm1_vec(const Vector& r) {
  Vector s(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) s(i) = std::expm1(r(i));
  return s;
}

/// Boundary-scale evaluator for the rate region with warm starts: the
/// previous eigenvector seeds the next normalized iteration and the
/// previous scale seeds the next bracket, which keeps the inner loops
/// short while ascending smoothly varying directions.
class BoundaryScale {
 public:
  BoundaryScale(const InterferenceMapping& T, const PolyhedralMonotoneNorm& norm,
                double bisect_rtol)
      : T_(T), norm_(norm), rtol_(bisect_rtol) {}

  double radius(const Vector& s) {
    const auto eig = conditional_eigenpair(T_.scaled(s), norm_, 1e-10, kMaxIter, warm_);
    warm_ = eig.vector;
    return eig.value;
  }

  /// t with radius(expm1(t d)) = 1 for a strictly positive direction d.
  double scale(const Vector& d, double rtol_override = 0.0) {
    const double rtol = rtol_override > 0.0 ? rtol_override : rtol_;
    const double dmax = d.maxCoeff();
    const auto f = [&](double t) {
      if (t * dmax > kRateCap) {
        throw std::invalid_argument("sumrate: rate component exceeds 700 while bracketing");
      }
      return radius(expm1_vec(t * d));
    };
    double lo, hi;
    if (t_prev_ > 0.0) {
      lo = 0.5 * t_prev_;
      hi = 2.0 * t_prev_;
    } else {
      lo = 0.5;
      hi = 1.0;
    }
    while (f(hi) < 1.0) {
      lo = hi;
      hi *= 2.0;
    }
    while (f(lo) >= 1.0) {
      hi = lo;
      lo *= 0.5;
    }
    while (hi - lo > rtol * hi) {
      const double mid = 0.5 * (lo + hi);
      if (f(mid) >= 1.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    t_prev_ = 0.5 * (lo + hi);
    return t_prev_;
  }

 private:
  const InterferenceMapping& T_;
  const PolyhedralMonotoneNorm& norm_;
  double rtol_;
  std::optional<Vector> warm_;
  double t_prev_ = 0.0;
};

/// Softmax over (z, 0) with a positivity floor, so directions stay in
/// the open simplex and boundary scales remain well defined.
Vector direction_from(const Vector& z) {
  const Eigen::Index n = z.size() + 1;
  Vector d(n);
  const double zmax = std::max(0.0, z.size() > 0 ? z.maxCoeff() : 0.0);
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    d(i) = std::exp(z(i) - zmax);
    sum += d(i);
  }
  d(n - 1) = std::exp(-zmax);
  sum += d(n - 1);
  d /= sum;
  for (Eigen::Index i = 0; i < n; ++i) d(i) = std::max(d(i), kDirectionFloor);
  return d / d.sum();
}

bool lexicographically_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

struct Candidate {
  double value = 0.0;
  Vector direction;
};

SumRateSolution finalize(const InterferenceMapping& T, const PolyhedralMonotoneNorm& norm,
                         const Vector& weights, const Vector& direction, bool certified) {
  BoundaryScale evaluator(T, norm, 1e-13);
  const double t_star = evaluator.scale(direction);
  SumRateSolution solution;
  solution.rates = t_star * direction;
  solution.value = weights.dot(solution.rates);
  solution.boundary_residual =
      std::abs(spectral_radius_scaled(T, norm, expm1_vec(solution.rates)) - 1.0);
  solution.certified_convex = certified;
  solution.power = recover_power(T, norm, solution.rates);
  return solution;
}

}  // namespace

SumRateSolution maximize_weighted_sumrate(const AffineInterferenceModel& model,
                                          const PolyhedralMonotoneNorm& norm,
                                          const Vector& weights,
                                          const SumRateOptions& options) {
  model.validate();
  const Eigen::Index n = model.dimension();
  if (norm.dimension() != n || weights.size() != n) {
    throw std::invalid_argument("sumrate: dimension mismatch");
  }
  if ((weights.array() < 0.0).any() || weights.maxCoeff() <= 0.0) {
    throw std::invalid_argument("sumrate: weights must be nonnegative with a positive entry");
  }

  const InterferenceMapping T = InterferenceMapping::affine(model);
  const bool certified =
      zcompat_certificate(model, norm).overall == CertificateVerdict::ZCompatibleConstrained;

  if (n == 1) {
    return finalize(T, norm, weights, Vector::Ones(1), certified);
  }

  const auto run_start = [&](const Vector& z0, Rng poll_rng) {
    // The finite-difference gradient divides objective noise by h, so
    // the boundary evaluations must be resolved well below h times the
    // gradient magnitudes that still matter near the optimum.
    BoundaryScale evaluator(T, norm, 1e-13);
    const auto objective = [&](const Vector& z) {
      const Vector d = direction_from(z);
      return evaluator.scale(d) * weights.dot(d);
    };

    Vector z = z0;
    double value = objective(z);
    double step = 0.5;
    double creep = 1e-3;
    int stall = 0;
    const double h = 1e-5;

    // The boundary scale is a minimum over constraint sheets, so the
    // objective kinks along the seams where the active budget switches.
    // There the two-sided difference gradient averages the sheets and can
    // point into the descending wedge. Polling recovers: axis moves first,
    // then random directions, redrawn at every scale so the ascending
    // wedge is sampled densely no matter how narrow it is.
    const auto try_move = [&](const Vector& zt) {
      const double vt = objective(zt);
      if (vt > value) {
        z = zt;
        value = vt;
        return true;
      }
      return false;
    };
    const auto poll_move = [&](double step_len) {
      for (Eigen::Index k = 0; k < z.size(); ++k) {
        for (const double sgn : {1.0, -1.0}) {
          Vector zt = z;
          zt(k) += sgn * step_len;
          if (try_move(zt)) return true;
        }
      }
      const int draws = 2 * static_cast<int>(z.size());
      for (int t = 0; t < draws; ++t) {
        Vector dir(z.size());
        for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = poll_rng.normal();
        const double len = dir.norm();
        if (len < 1e-12) continue;
        dir /= len;
        for (const double sgn : {1.0, -1.0}) {
          if (try_move(z + sgn * step_len * dir)) return true;
        }
      }
      return false;
    };

    for (int it = 0; it < options.max_ascent_iterations && stall < 2; ++it) {
      Vector grad(z.size());
      for (Eigen::Index k = 0; k < z.size(); ++k) {
        Vector zp = z, zm = z;
        zp(k) += h;
        zm(k) -= h;
        grad(k) = (objective(zp) - objective(zm)) / (2.0 * h);
      }
      const double gnorm = grad.norm();

      bool improved = false;
      if (gnorm >= 1e-14) {
        double trial_step = step;
        for (int back = 0; back < 25; ++back) {
          const Vector zt = z + (trial_step / gnorm) * grad;
          const double vt = objective(zt);
          if (vt > value) {
            const double gain = (vt - value) / std::max(std::abs(value), 1e-300);
            z = zt;
            value = vt;
            step = std::min(trial_step * 1.5, 4.0);
            stall = gain < options.objective_tol ? stall + 1 : 0;
            improved = true;
            break;
          }
          trial_step *= 0.5;
          if (trial_step < 1e-10) break;
        }
      }
      if (!improved) {
        bool polled = false;
        while (creep >= 1e-9 && !polled) {
          polled = poll_move(creep);
          if (!polled) creep *= 0.5;
        }
        if (!polled) break;
        creep = std::min(creep * 1.5, 1e-2);
      }
    }
    return Candidate{value, direction_from(z)};
  };

  std::vector<Candidate> candidates;
  candidates.push_back(run_start(Vector::Zero(n - 1), Rng::substream(options.seed, 0)));
  for (int k = 1; k < std::max(options.starts, 1); ++k) {
    Rng rng = Rng::substream(options.seed, static_cast<std::uint64_t>(k));
    Vector z0(n - 1);
    for (Eigen::Index i = 0; i < z0.size(); ++i) z0(i) = rng.uniform(-2.0, 2.0);
    candidates.push_back(run_start(z0, rng));
  }

  double best = candidates.front().value;
  for (const auto& c : candidates) best = std::max(best, c.value);
  const double band = options.agreement_rtol * std::max(std::abs(best), 1.0);
  int agree = 0;
  const Candidate* pick = nullptr;
  for (const auto& c : candidates) {
    if (best - c.value <= band) {
      ++agree;
      // Ties resolve toward the lexicographically smallest rate vector;
      // directions order the same way since the scale is shared.
      if (pick == nullptr || lexicographically_less(c.direction, pick->direction)) pick = &c;
    }
  }

  // On a certified-convex region every local optimum is global, but the
  // global label is only trusted once enough starts confirm it.
  return finalize(T, norm, weights, pick->direction, certified && agree >= 3);
}

SumRateSolution brute_force_oracle(const AffineInterferenceModel& model,
                                   const PolyhedralMonotoneNorm& norm,
                                   const Vector& weights, int resolution) {
  model.validate();
  const Eigen::Index n = model.dimension();
  if (norm.dimension() != n || weights.size() != n) {
    throw std::invalid_argument("oracle: dimension mismatch");
  }
  if (n > 3) throw std::invalid_argument("oracle: only N <= 3 supported");
  if (resolution < 16) throw std::invalid_argument("oracle: resolution must be >= 16");

  const InterferenceMapping T = InterferenceMapping::affine(model);
  const bool certified =
      zcompat_certificate(model, norm).overall == CertificateVerdict::ZCompatibleConstrained;

  const auto clamp_direction = [&](Vector d) {
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::max(d(i), kDirectionFloor);
    return Vector(d / d.sum());
  };

  std::vector<Vector> grid;
  if (n == 1) {
    grid.push_back(Vector::Ones(1));
  } else if (n == 2) {
    for (int i = 0; i <= resolution; ++i) {
      Vector d(2);
      d << static_cast<double>(i), static_cast<double>(resolution - i);
      grid.push_back(clamp_direction(d / resolution));
    }
  } else {
    for (int i = 0; i <= resolution; ++i) {
      for (int j = 0; j + i <= resolution; ++j) {
        Vector d(3);
        d << static_cast<double>(i), static_cast<double>(j),
            static_cast<double>(resolution - i - j);
        grid.push_back(clamp_direction(d / resolution));
      }
    }
  }

  BoundaryScale evaluator(T, norm, 1e-10);
  double best_value = -1.0;
  Vector best_rates;
  for (const auto& d : grid) {
    const double t = evaluator.scale(d);
    const Vector rates = t * d;
    const double value = weights.dot(rates);
    const bool tie = std::abs(value - best_value) <= 1e-12 * std::max(std::abs(best_value), 1.0);
    if (best_value < 0.0 || (tie && lexicographically_less(rates, best_rates)) ||
        (!tie && value > best_value)) {
      best_value = value;
      best_rates = rates;
    }
  }

  SumRateSolution solution;
  solution.rates = best_rates;
  solution.value = best_value;
  solution.boundary_residual =
      std::abs(spectral_radius_scaled(T, norm, expm1_vec(best_rates)) - 1.0);
  solution.certified_convex = certified;
  solution.power = recover_power(T, norm, best_rates);
  return solution;
}

Vector recover_power(const InterferenceMapping& T, const PolyhedralMonotoneNorm& norm,
                     const Vector& rates, double tol) {
  if (rates.size() != T.dimension() || norm.dimension() != T.dimension()) {
    throw std::invalid_argument("recover: dimension mismatch");
  }
  if ((rates.array() <= 0.0).any()) {
    throw std::invalid_argument("recover: rates must be strictly positive");
  }
  if ((rates.array() > kRateCap).any()) {
    throw std::invalid_argument("recover: rate component exceeds 700 (not representable)");
  }
  const InterferenceMapping scaled = T.scaled(expm1_vec(rates));
  // The iteration's terminal error is roughly (stop threshold) * q/(1-q)
  // for contraction rate q, so spend a tighter threshold when q is close
  // to 1 to keep the recovered point accurate near the boundary.
  const double q = asymptotic_radius(scaled);
  const double slack = q < 1.0 ? std::clamp((1.0 - q) / std::max(q, 0.1), 1e-4, 1.0) : 1.0;
  const auto fp = fixed_point(scaled, std::max(kIterTol * slack, 1e-15));
  if (!fp.power) {
    throw std::invalid_argument(
        "recover: rates lie outside the feasible region (asymptotic radius " +
        std::to_string(fp.asymptotic_radius) + ")");
  }
  const double p_norm = norm.evaluate(*fp.power);
  if (p_norm > 1.0 + tol) {
    throw std::invalid_argument("recover: recovered power violates the constraint (norm " +
                                std::to_string(p_norm) + ")");
  }
  return *fp.power;
}

}  // namespace urt
