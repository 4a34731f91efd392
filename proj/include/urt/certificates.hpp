#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "urt/mappings.hpp"

namespace urt {

enum class InverseZReason {
  Ok,
  ZeroDiagonal,          // a nonnegative matrix with a zero diagonal entry
  Singular,              // LU condition estimate beyond 1/tol
  PositiveOffDiagonal,   // inverse exists but is not a Z-matrix
};

struct InverseZResult {
  bool inverse_z = false;
  InverseZReason reason = InverseZReason::Ok;
  /// Largest off-diagonal entry of the computed inverse; absent when the
  /// inverse was never formed (singular / zero diagonal).
  std::optional<double> off_diag_max;
};

/// Z-matrix test: all off-diagonal entries <= tol * max|A_ij|.
/// The zero matrix passes.
bool is_z_matrix(const Matrix& A, double tol = 1e-9);

/// Tests whether a nonnegative square matrix has a Z-matrix inverse
/// (equivalently, is the inverse of an M-matrix). The inverse is formed
/// by pivoted LU; singularity and the Z test fold into a false verdict
/// with a reason code. tol drives both the condition guard (estimate
/// beyond 1/tol) and the relative off-diagonal threshold.
InverseZResult inverse_z_check(const Matrix& A, double tol = 1e-9);
bool is_inverse_z(const Matrix& A, double tol = 1e-9);

/// 2x2 principal-minor screen: returns the 0-based pairs (i, j), i < j,
/// with A_ii*A_jj - A_ij*A_ji <= 0. A necessary condition: any failing
/// pair already rules out a Z-matrix inverse.
std::vector<std::pair<int, int>> det2_screen(const Matrix& A);

enum class CertificateVerdict {
  ZCompatibleUnconstrained,
  ZCompatibleConstrained,
  NotCertified,
};

struct MatrixVerdict {
  std::string label;  // "M" or "M+u*a1^t", ... (1-based generator index)
  bool inverse_z = false;
  InverseZReason reason = InverseZReason::Ok;
  std::optional<double> off_diag_max;
};

/// Convexity certificate report. failing_pairs comes from the 2x2
/// screen of M itself and is diagnostic; the overall verdict is decided
/// by the inverse-Z tests on the listed matrices.
struct CertificateReport {
  std::vector<std::string> matrices_tested;
  std::vector<MatrixVerdict> verdicts;
  std::vector<std::pair<int, int>> failing_pairs;  // 0-based user pairs
  CertificateVerdict overall = CertificateVerdict::NotCertified;
};

/// Without a norm: tests M alone (unconstrained regions are convex when
/// it passes). With a norm: tests M + u a_n^t for every generator row
/// a_n (constrained regions, both SINR and rate space).
CertificateReport zcompat_certificate(const AffineInterferenceModel& model,
                                      const std::optional<PolyhedralMonotoneNorm>& norm = std::nullopt,
                                      double tol = 1e-9);

/// Smallest alpha >= 0 such that alpha*I + M (and, with a norm, every
/// alpha*I + M + u a_n^t) passes the inverse-Z certificate. Requires
/// strictly positive off-diagonal entries in M. Adding a nonnegative
/// diagonal never breaks the certificate, so the predicate is monotone
/// and bisection applies; the bracket is capped at 1e12.
double min_self_interference_shift(const AffineInterferenceModel& model,
                                   const std::optional<PolyhedralMonotoneNorm>& norm = std::nullopt,
                                   double tol = 1e-6);

struct ConjectureReport {
  bool sym_psd = false;      // M + M^t positive semidefinite
  double lhs = 0.0;          // radius at the convex combination
  double rhs = 0.0;          // max of the endpoint radii
  bool quasiconvexity_violated = false;  // lhs > rhs + tol
};

/// Evaluates v -> rho(diag(v) M) at x1, x2 and alpha*x1 + (1-alpha)*x2
/// via the dense linear route, reporting whether quasiconvexity fails
/// even though the symmetric part of M is PSD.
ConjectureReport conjecture_check(const Matrix& M, const Vector& x1, const Vector& x2,
                                  double alpha, double tol = 1e-9);

}  // namespace urt
