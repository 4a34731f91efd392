#include "urt/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "urt/errors.hpp"

namespace urt {

namespace {

// Standard mappings are strictly positive on the nonnegative orthant,
// so iterates never leave the open cone and normalization is safe.
Vector initial_iterate(Eigen::Index n, const PolyhedralMonotoneNorm& norm,
                       const std::optional<Vector>& start) {
  Vector x = start.value_or(Vector::Ones(n));
  if (x.size() != n) throw std::invalid_argument("eigenpair: start dimension mismatch");
  if ((x.array() < 0.0).any() || x.maxCoeff() <= 0.0) {
    throw std::invalid_argument("eigenpair: start must be nonnegative and nonzero");
  }
  return x / norm.evaluate(x);
}

std::vector<Eigen::Index> positive_support(const Vector& s) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) < 0.0) throw std::invalid_argument("scaled radius: s must be nonnegative");
    if (s(i) > 0.0) keep.push_back(i);
  }
  return keep;
}

Vector gather(const Vector& v, const std::vector<Eigen::Index>& keep) {
  Vector out(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(keep[i]);
  return out;
}

}  // namespace

EigenResult conditional_eigenpair(const InterferenceMapping& T,
                                  const PolyhedralMonotoneNorm& norm, double tol,
                                  int max_iter, const std::optional<Vector>& start) {
  if (T.dimension() != norm.dimension()) {
    throw std::invalid_argument("eigenpair: mapping/norm dimension mismatch");
  }
  Vector x = initial_iterate(T.dimension(), norm, start);
  double lambda = 0.0;
  double residual = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const Vector y = T.evaluate(x);
    lambda = norm.evaluate(y);
    const Vector next = y / lambda;
    residual = (next - x).cwiseAbs().maxCoeff();
    if (residual <= tol) {
      // Pair the returned value with the returned vector.
      EigenResult out;
      out.vector = next;
      out.value = norm.evaluate(T.evaluate(next));
      out.iterations = it;
      out.residual = residual;
      return out;
    }
    x = next;
  }
  throw NonConvergence("eigenpair: no convergence within iteration budget", residual,
                       max_iter, x);
}

double spectral_radius_scaled(const InterferenceMapping& T,
                              const PolyhedralMonotoneNorm& norm, const Vector& s,
                              double tol, int max_iter) {
  if (T.dimension() != norm.dimension() || s.size() != T.dimension()) {
    throw std::invalid_argument("scaled radius: dimension mismatch");
  }
  const auto keep = positive_support(s);
  if (keep.empty()) return 0.0;
  if (static_cast<Eigen::Index>(keep.size()) == s.size()) {
    return conditional_eigenpair(T.scaled(s), norm, tol, max_iter).value;
  }
  // Zero coordinates delete themselves from the system: the surviving
  // sub-mapping sees zeros at the deleted inputs and the norm restricts
  // to the surviving coordinates.
  const InterferenceMapping sub = T.restricted(keep);
  const PolyhedralMonotoneNorm sub_norm = norm.restricted(keep);
  return conditional_eigenpair(sub.scaled(gather(s, keep)), sub_norm, tol, max_iter).value;
}

double spectral_radius_linear(const Matrix& A) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw std::invalid_argument("spectral radius: square matrix required");
  }
  Eigen::EigenSolver<Matrix> solver(A, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectral radius: dense eigensolver failed");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double asymptotic_radius(const InterferenceMapping& T) {
  if (T.is_affine()) return spectral_radius_linear(T.affine_model().M);
  // No linear form exists; regularize the asymptote into a standard
  // mapping and take its conditional eigenvalue under the max-norm.
  // The result upper-bounds the true radius and tightens as eps -> 0.
  constexpr double kEps = 1e-12;
  std::vector<std::vector<InfFamilyPiece>> pieces = T.pieces();
  for (auto& coord : pieces) {
    for (auto& piece : coord) piece.sigma = kEps * piece.b;
  }
  const auto regularized = InterferenceMapping::inf_family(std::move(pieces));
  return conditional_eigenpair(regularized, PolyhedralMonotoneNorm::linf(T.dimension()))
      .value;
}

FixedPointResult fixed_point(const InterferenceMapping& T, double tol, int max_iter,
                             double classification_tol) {
  FixedPointResult result;
  result.asymptotic_radius = asymptotic_radius(T);
  if (result.asymptotic_radius >= 1.0 - classification_tol) return result;

  Vector p = T.evaluate(Vector::Zero(T.dimension()));
  double change = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const Vector next = T.evaluate(p);
    change = 0.0;
    for (Eigen::Index i = 0; i < next.size(); ++i) {
      const double scale = std::max(std::abs(next(i)), 1e-300);
      change = std::max(change, std::abs(next(i) - p(i)) / scale);
    }
    p = next;
    if (change <= tol) {
      result.power = p;
      result.iterations = it;
      return result;
    }
  }
  throw NonConvergence("fixed point: no convergence within iteration budget", change,
                       max_iter, p);
}

FeasibilityVerdict feasible_under_constraint(const InterferenceMapping& T,
                                             const PolyhedralMonotoneNorm& norm,
                                             const Vector& s, double classification_tol,
                                             double tol, int max_iter) {
  if ((s.array() <= 0.0).any()) {
    throw std::invalid_argument("feasibility: target s must be strictly positive");
  }
  FeasibilityVerdict verdict;
  verdict.spectral_radius = spectral_radius_scaled(T, norm, s, tol, max_iter);
  if (verdict.spectral_radius < 1.0 - classification_tol) {
    verdict.status = Feasibility::FeasibleInterior;
  } else if (std::abs(verdict.spectral_radius - 1.0) <= classification_tol) {
    verdict.status = Feasibility::FeasibleBoundary;
  } else {
    verdict.status = Feasibility::Infeasible;
    return verdict;
  }
  auto fp = fixed_point(T.scaled(s), tol, max_iter, classification_tol);
  if (fp.power) verdict.power = std::move(fp.power);
  return verdict;
}

}  // namespace urt
