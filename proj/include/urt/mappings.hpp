#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

namespace urt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Monotone norm with polyhedral unit ball, evaluated as
///   ||x|| = max_k a_k . |x|
/// over a finite set of nonnegative generator rows a_k. Covers the
/// max-norm, the 1-norm, and per-user power budgets (generators e_n / P_n).
///
/// Construction validates: at least one generator, all entries
/// nonnegative, every generator carrying a strictly positive entry, and
/// every coordinate covered by some generator (otherwise the formula is
/// not positive definite). Instances are immutable.
class PolyhedralMonotoneNorm {
 public:
  /// generators: K x N matrix, one generator per row.
  explicit PolyhedralMonotoneNorm(Matrix generators);

  /// Max-norm on R^n (generators e_1 .. e_n).
  static PolyhedralMonotoneNorm linf(Eigen::Index n);

  /// 1-norm on R^n (single all-ones generator).
  static PolyhedralMonotoneNorm l1(Eigen::Index n);

  /// Per-coordinate budget norm max_n |x_n| / budget_n; budgets > 0.
  static PolyhedralMonotoneNorm weighted_linf(const Vector& budgets);

  double evaluate(const Vector& x) const;

  Eigen::Index dimension() const { return generators_.cols(); }
  Eigen::Index generator_count() const { return generators_.rows(); }
  const Matrix& generators() const { return generators_; }

  /// Norm of the sub-vector on the kept coordinates (used when a scaled
  /// evaluation deletes zero coordinates). Generators are restricted
  /// columnwise; generators that become identically zero are dropped.
  PolyhedralMonotoneNorm restricted(const std::vector<Eigen::Index>& keep) const;

 private:
  Matrix generators_;  // K x N, rows a_k >= 0
};

/// Linear-plus-noise interference model T(p) = M p + u with nonnegative
/// coupling matrix M and strictly positive noise offsets u. Optionally
/// carries the raw per-user reduction coefficients it was derived from
/// (useful-signal b, interference columns C, noise sigma).
struct AffineInterferenceModel {
  Matrix M;  // nonnegative, N x N
  Vector u;  // strictly positive, length N

  // Raw reduction coefficients; present when built from a scenario.
  std::optional<Vector> b;
  std::optional<Matrix> C;  // column n holds user n's coefficient vector
  std::optional<Vector> sigma;

  Eigen::Index dimension() const { return u.size(); }

  /// Throws std::invalid_argument when shapes or sign constraints fail.
  void validate() const;
};

/// One affine piece of an inf-family coordinate map:
/// contributes (c . p + sigma) / b to the pointwise minimum.
struct InfFamilyPiece {
  Vector c;      // nonnegative, length N
  double sigma;  // > 0
  double b;      // > 0
};

/// Standard interference mapping: either an affine model or a
/// coordinate-wise finite minimum of affine pieces,
///   t_n(p) = min_y (c_y . p + sigma_y) / b_y.
/// Both kinds are positive, monotone, and scalable; evaluation is pure.
class InterferenceMapping {
 public:
  static InterferenceMapping affine(AffineInterferenceModel model);
  static InterferenceMapping inf_family(std::vector<std::vector<InfFamilyPiece>> pieces);

  Eigen::Index dimension() const;

  /// T(p) for p >= 0.
  Vector evaluate(const Vector& p) const;

  /// The positively homogeneous asymptote: for affine maps exactly M x;
  /// for inf-families the minimum of the homogeneous parts.
  Vector evaluate_asymptotic(const Vector& x) const;

  /// Norm-augmented evaluation: the noise offsets are multiplied by
  /// ||x||, making the map positively homogeneous while agreeing with
  /// evaluate() on the unit sphere.
  Vector evaluate_norm_augmented(const Vector& x, const PolyhedralMonotoneNorm& norm) const;

  bool is_affine() const { return affine_.has_value(); }
  const AffineInterferenceModel& affine_model() const;
  const std::vector<std::vector<InfFamilyPiece>>& pieces() const { return pieces_; }

  /// diag(s) T for strictly positive s (still a standard mapping).
  InterferenceMapping scaled(const Vector& s) const;

  /// Sub-mapping on the kept coordinates, with deleted input
  /// coordinates held at zero.
  InterferenceMapping restricted(const std::vector<Eigen::Index>& keep) const;

 private:
  InterferenceMapping() = default;

  std::optional<AffineInterferenceModel> affine_;
  std::vector<std::vector<InfFamilyPiece>> pieces_;  // empty when affine
};

/// Handle pairing a mapping with a norm; evaluates the homogeneous
/// norm-augmented form.
struct NormAugmentedMapping {
  InterferenceMapping base;
  PolyhedralMonotoneNorm norm;

  Vector evaluate(const Vector& x) const { return base.evaluate_norm_augmented(x, norm); }
};

/// Handle evaluating the asymptote of a mapping.
struct AsymptoticMapping {
  InterferenceMapping base;

  Vector evaluate(const Vector& x) const { return base.evaluate_asymptotic(x); }
};

// Free-function spellings of the module operations.
double norm_eval(const PolyhedralMonotoneNorm& norm, const Vector& x);
Vector eval_standard(const InterferenceMapping& T, const Vector& p);
Vector eval_norm_augmented(const InterferenceMapping& T, const PolyhedralMonotoneNorm& norm,
                           const Vector& x);
AsymptoticMapping asymptotic(const InterferenceMapping& T);

}  // namespace urt
