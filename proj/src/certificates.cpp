#include "urt/certificates.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

#include "urt/errors.hpp"
#include "urt/spectral.hpp"

namespace urt {

namespace {

constexpr double kBracketCap = 1e12;

void require_square(const Matrix& A, const char* who) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw std::invalid_argument(std::string(who) + ": square matrix required");
  }
}

void require_nonnegative(const Matrix& A, const char* who) {
  if ((A.array() < -1e-12).any()) {
    throw std::invalid_argument(std::string(who) + ": nonnegative matrix required");
  }
}

double max_off_diagonal(const Matrix& A) {
  double out = 0.0;
  bool first = true;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (i == j) continue;
      if (first || A(i, j) > out) {
        out = A(i, j);
        first = false;
      }
    }
  }
  return first ? 0.0 : out;  // 1x1 has no off-diagonal
}

}  // namespace

bool is_z_matrix(const Matrix& A, double tol) {
  require_square(A, "z-matrix");
  const double scale = A.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return max_off_diagonal(A) <= tol * scale;
}

InverseZResult inverse_z_check(const Matrix& A, double tol) {
  require_square(A, "inverse-z");
  require_nonnegative(A, "inverse-z");
  InverseZResult result;

  // A nonnegative matrix with a Z-matrix inverse needs a strictly
  // positive diagonal; screen that before factorizing.
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    if (A(i, i) <= 0.0) {
      result.reason = InverseZReason::ZeroDiagonal;
      return result;
    }
  }

  Eigen::PartialPivLU<Matrix> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > tol)) {  // condition estimate beyond 1/tol, or NaN
    result.reason = InverseZReason::Singular;
    return result;
  }
  const Matrix inv = lu.inverse();
  const double off = max_off_diagonal(inv);
  result.off_diag_max = off;
  const double scale = inv.cwiseAbs().maxCoeff();
  if (off <= tol * scale) {
    result.inverse_z = true;
    result.reason = InverseZReason::Ok;
  } else {
    result.reason = InverseZReason::PositiveOffDiagonal;
  }
  return result;
}

bool is_inverse_z(const Matrix& A, double tol) { return inverse_z_check(A, tol).inverse_z; }

std::vector<std::pair<int, int>> det2_screen(const Matrix& A) {
  require_square(A, "det2");
  std::vector<std::pair<int, int>> failing;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < A.cols(); ++j) {
      const double det = A(i, i) * A(j, j) - A(i, j) * A(j, i);
      if (det <= 0.0) failing.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return failing;
}

CertificateReport zcompat_certificate(const AffineInterferenceModel& model,
                                      const std::optional<PolyhedralMonotoneNorm>& norm,
                                      double tol) {
  model.validate();
  if (norm && norm->dimension() != model.dimension()) {
    throw std::invalid_argument("certificate: model/norm dimension mismatch");
  }

  CertificateReport report;
  report.failing_pairs = det2_screen(model.M);

  const auto test = [&](std::string label, const Matrix& A) {
    MatrixVerdict verdict;
    verdict.label = std::move(label);
    const InverseZResult r = inverse_z_check(A, tol);
    verdict.inverse_z = r.inverse_z;
    verdict.reason = r.reason;
    verdict.off_diag_max = r.off_diag_max;
    report.matrices_tested.push_back(verdict.label);
    report.verdicts.push_back(std::move(verdict));
  };

  if (!norm) {
    test("M", model.M);
  } else {
    const Matrix& G = norm->generators();
    for (Eigen::Index k = 0; k < G.rows(); ++k) {
      test("M+u*a" + std::to_string(k + 1) + "^t",
           model.M + model.u * G.row(k));
    }
  }

  bool all_pass = true;
  for (const auto& v : report.verdicts) all_pass = all_pass && v.inverse_z;
  if (!all_pass) {
    report.overall = CertificateVerdict::NotCertified;
  } else {
    report.overall = norm ? CertificateVerdict::ZCompatibleConstrained
                          : CertificateVerdict::ZCompatibleUnconstrained;
  }
  return report;
}

double min_self_interference_shift(const AffineInterferenceModel& model,
                                   const std::optional<PolyhedralMonotoneNorm>& norm,
                                   double tol) {
  model.validate();
  if (norm && norm->dimension() != model.dimension()) {
    throw std::invalid_argument("shift: model/norm dimension mismatch");
  }
  const Eigen::Index n = model.dimension();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && model.M(i, j) <= 0.0) {
        throw std::invalid_argument(
            "shift: strictly positive off-diagonal entries required");
      }
    }
  }

  const auto certified = [&](double alpha) {
    const Matrix shifted = alpha * Matrix::Identity(n, n) + model.M;
    if (!is_inverse_z(shifted)) return false;
    if (norm) {
      const Matrix& G = norm->generators();
      for (Eigen::Index k = 0; k < G.rows(); ++k) {
        if (!is_inverse_z(shifted + model.u * G.row(k))) return false;
      }
    }
    return true;
  };

  if (certified(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (!certified(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > kBracketCap) {
      throw NonConvergence("shift: no certificate below the bracket cap", hi, 0, Vector());
    }
  }
  // Adding a nonnegative diagonal preserves the certificate, so the
  // predicate is monotone in alpha and bisection is exact.
  while (hi - lo > tol * std::max(hi, 1.0)) {
    const double mid = 0.5 * (lo + hi);
    if (certified(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

ConjectureReport conjecture_check(const Matrix& M, const Vector& x1, const Vector& x2,
                                  double alpha, double tol) {
  require_square(M, "conjecture");
  if (x1.size() != M.rows() || x2.size() != M.rows()) {
    throw std::invalid_argument("conjecture: vector dimension mismatch");
  }
  if ((x1.array() < 0.0).any() || (x2.array() < 0.0).any()) {
    throw std::invalid_argument("conjecture: vectors must be nonnegative");
  }
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("conjecture: alpha must lie in [0, 1]");
  }

  ConjectureReport report;
  Eigen::SelfAdjointEigenSolver<Matrix> sym(0.5 * (M + M.transpose()));
  report.sym_psd = sym.eigenvalues().minCoeff() >= -tol;

  const Vector xc = alpha * x1 + (1.0 - alpha) * x2;
  report.lhs = spectral_radius_linear(xc.asDiagonal() * M);
  report.rhs = std::max(spectral_radius_linear(x1.asDiagonal() * M),
                        spectral_radius_linear(x2.asDiagonal() * M));
  report.quasiconvexity_violated = report.lhs > report.rhs + tol;
  return report;
}

}  // namespace urt
