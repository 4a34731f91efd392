#pragma once

#include <cstdint>
#include <optional>

#include "urt/mappings.hpp"

namespace urt {

struct SumRateSolution {
  Vector rates;                  // strictly positive, on the boundary
  double value = 0.0;            // weights . rates
  std::optional<Vector> power;   // recovered allocation, ||power|| <= 1 + tol
  double boundary_residual = 0.0;
  bool certified_convex = false; // convexity certificate for the region
};

struct SumRateOptions {
  int starts = 8;                 // deterministic multi-start count
  std::uint64_t seed = 0x7573756d72617465ULL;
  int max_ascent_iterations = 400;
  double objective_tol = 1e-11;   // ascent termination (relative)
  double agreement_rtol = 1e-6;   // multi-start agreement band
};

/// Maximizes weights . r over the rate region by ascending the boundary
/// parametrization r(d) = t*(d) d over strictly positive simplex
/// directions (softmax coordinates, numerical gradients, backtracking
/// line search, deterministic multi-starts). When the region certifies
/// convex and at least 3 starts agree, the best local optimum is the
/// global one; otherwise the best found is returned with
/// certified_convex = false. Value ties resolve to the
/// lexicographically smallest rate vector.
SumRateSolution maximize_weighted_sumrate(const AffineInterferenceModel& model,
                                          const PolyhedralMonotoneNorm& norm,
                                          const Vector& weights,
                                          const SumRateOptions& options = {});

/// Exhaustive reference: enumerates simplex directions on a regular
/// grid (resolution >= 16) and returns the best boundary value. Only
/// N <= 3 is supported; zero grid components are floored at 1e-9.
SumRateSolution brute_force_oracle(const AffineInterferenceModel& model,
                                   const PolyhedralMonotoneNorm& norm,
                                   const Vector& weights, int resolution);

/// Recovers the power allocation attaining strictly positive rates r:
/// the fixed point of diag(expm1(r)) T. Throws std::invalid_argument
/// when no fixed point exists or its norm exceeds 1 + tol (the rates do
/// not belong to the constrained region). The default slack admits
/// rates that are boundary-accurate only up to a boundary solver's
/// bisection tolerance; it is a sanity guard, not a membership test.
Vector recover_power(const InterferenceMapping& T, const PolyhedralMonotoneNorm& norm,
                     const Vector& rates, double tol = 1e-6);

}  // namespace urt
