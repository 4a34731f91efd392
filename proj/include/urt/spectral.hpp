#pragma once

#include <optional>

#include "urt/mappings.hpp"

namespace urt {

/// Result of the normalized fixed-point (conditional eigenpair)
/// iteration: T(vector) = value * vector with ||vector|| = 1.
struct EigenResult {
  Vector vector;
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;  // sup-norm of T(x)/value - x at acceptance
};

enum class Feasibility { FeasibleInterior, FeasibleBoundary, Infeasible };

struct FeasibilityVerdict {
  Feasibility status = Feasibility::Infeasible;
  double spectral_radius = 0.0;
  std::optional<Vector> power;  // fixed point when one exists; ||power|| <= 1 + tol
};

struct FixedPointResult {
  std::optional<Vector> power;  // empty <=> infeasible
  double asymptotic_radius = 0.0;
  int iterations = 0;
};

inline constexpr double kIterTol = 1e-10;
inline constexpr int kMaxIter = 100000;
inline constexpr double kClassifyTol = 1e-9;

/// Normalized fixed-point iteration x <- T(x) / ||T(x)|| from the scaled
/// all-ones vector (or `start`, which must be nonnegative, nonzero).
/// Stops once the sup-norm of T(x)/lambda - x drops to tol; throws
/// NonConvergence (with the last iterate) past max_iter. The returned
/// value is the conditional eigenvalue, equal to the spectral radius of
/// the norm-augmented mapping.
EigenResult conditional_eigenpair(const InterferenceMapping& T,
                                  const PolyhedralMonotoneNorm& norm,
                                  double tol = kIterTol, int max_iter = kMaxIter,
                                  const std::optional<Vector>& start = std::nullopt);

/// Spectral radius of diag(s) applied to the norm-augmented mapping,
/// for s >= 0. Zero coordinates are deleted (the value only depends on
/// the surviving sub-system); s = 0 returns 0.
double spectral_radius_scaled(const InterferenceMapping& T,
                              const PolyhedralMonotoneNorm& norm, const Vector& s,
                              double tol = kIterTol, int max_iter = kMaxIter);

/// Classical spectral radius of a dense matrix (largest eigenvalue
/// modulus). This is the independent linear route; it is never called
/// by the iterative route above.
double spectral_radius_linear(const Matrix& A);

/// Spectral radius of the asymptotic mapping. Affine models use the
/// dense linear route on M exactly; inf-families are evaluated through
/// an epsilon-regularized conditional eigenvalue (a tight upper bound,
/// epsilon = 1e-12) because their asymptote has no linear form.
double asymptotic_radius(const InterferenceMapping& T);

/// Fixed-point iteration p <- T(p) from p0 = T(0). Runs only when the
/// asymptotic radius clears 1 - classification_tol (otherwise no fixed
/// point exists and the result is infeasible, radius attached). Stops
/// on relative sup-norm change <= tol; throws NonConvergence past
/// max_iter -- which is a solver failure, not infeasibility.
FixedPointResult fixed_point(const InterferenceMapping& T, double tol = kIterTol,
                             int max_iter = kMaxIter,
                             double classification_tol = kClassifyTol);

/// Classifies the scaled radius rho = spectral_radius_scaled(T, norm, s)
/// against 1: interior (rho < 1 - tol), boundary (|rho - 1| <= tol),
/// else infeasible. For feasible verdicts the fixed point of diag(s)T is
/// attached when it exists; its norm is at most 1 + tol.
FeasibilityVerdict feasible_under_constraint(const InterferenceMapping& T,
                                             const PolyhedralMonotoneNorm& norm,
                                             const Vector& s,
                                             double classification_tol = kClassifyTol,
                                             double tol = kIterTol,
                                             int max_iter = kMaxIter);

}  // namespace urt
