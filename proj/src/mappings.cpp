#include "urt/mappings.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace urt {

namespace {

constexpr double kSignTol = 1e-12;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

// ---------------------------------------------------------------------------
// PolyhedralMonotoneNorm
// ---------------------------------------------------------------------------

PolyhedralMonotoneNorm::PolyhedralMonotoneNorm(Matrix generators)
    : generators_(std::move(generators)) {
  require(generators_.rows() > 0, "norm: at least one generator required");
  require(generators_.cols() > 0, "norm: generators must have positive dimension");
  require((generators_.array() >= -kSignTol).all(),
          "norm: generator entries must be nonnegative");
  for (Eigen::Index k = 0; k < generators_.rows(); ++k) {
    require(generators_.row(k).maxCoeff() > kSignTol,
            "norm: generator " + std::to_string(k + 1) +
                " has no strictly positive entry");
  }
  for (Eigen::Index j = 0; j < generators_.cols(); ++j) {
    require(generators_.col(j).maxCoeff() > kSignTol,
            "norm: coordinate " + std::to_string(j + 1) +
                " is not covered by any generator (not positive definite)");
  }
}

PolyhedralMonotoneNorm PolyhedralMonotoneNorm::linf(Eigen::Index n) {
  return PolyhedralMonotoneNorm(Matrix::Identity(n, n));
}

PolyhedralMonotoneNorm PolyhedralMonotoneNorm::l1(Eigen::Index n) {
  return PolyhedralMonotoneNorm(Matrix::Ones(1, n));
}

PolyhedralMonotoneNorm PolyhedralMonotoneNorm::weighted_linf(const Vector& budgets) {
  require((budgets.array() > 0.0).all(), "norm: budgets must be strictly positive");
  Matrix g = Matrix::Zero(budgets.size(), budgets.size());
  for (Eigen::Index i = 0; i < budgets.size(); ++i) g(i, i) = 1.0 / budgets(i);
  return PolyhedralMonotoneNorm(std::move(g));
}

double PolyhedralMonotoneNorm::evaluate(const Vector& x) const {
  require(x.size() == generators_.cols(), "norm: dimension mismatch");
  return (generators_ * x.cwiseAbs()).maxCoeff();
}

PolyhedralMonotoneNorm PolyhedralMonotoneNorm::restricted(
    const std::vector<Eigen::Index>& keep) const {
  require(!keep.empty(), "norm: cannot restrict to zero coordinates");
  Matrix sub(generators_.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    require(keep[j] >= 0 && keep[j] < generators_.cols(), "norm: restrict index out of range");
    sub.col(static_cast<Eigen::Index>(j)) = generators_.col(keep[j]);
  }
  // Generators supported only on deleted coordinates vanish; drop them.
  std::vector<Eigen::Index> rows;
  for (Eigen::Index k = 0; k < sub.rows(); ++k) {
    if (sub.row(k).maxCoeff() > kSignTol) rows.push_back(k);
  }
  require(!rows.empty(), "norm: restriction is not positive definite");
  Matrix out(static_cast<Eigen::Index>(rows.size()), sub.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = sub.row(rows[k]);
  return PolyhedralMonotoneNorm(std::move(out));
}

// ---------------------------------------------------------------------------
// AffineInterferenceModel
// ---------------------------------------------------------------------------

void AffineInterferenceModel::validate() const {
  const Eigen::Index n = u.size();
  require(n > 0, "model: empty");
  require(M.rows() == n && M.cols() == n, "model: M must be N x N with N = len(u)");
  require((M.array() >= -kSignTol).all(), "model: M entries must be nonnegative");
  require((u.array() > 0.0).all(), "model: u entries must be strictly positive");
  if (b) require(b->size() == n, "model: b must have length N");
  if (sigma) require(sigma->size() == n, "model: sigma must have length N");
  if (C) require(C->rows() == n && C->cols() == n, "model: C must be N x N");
}

// ---------------------------------------------------------------------------
// InterferenceMapping
// ---------------------------------------------------------------------------

InterferenceMapping InterferenceMapping::affine(AffineInterferenceModel model) {
  model.validate();
  InterferenceMapping T;
  T.affine_ = std::move(model);
  return T;
}

InterferenceMapping InterferenceMapping::inf_family(
    std::vector<std::vector<InfFamilyPiece>> pieces) {
  require(!pieces.empty(), "mapping: empty inf-family");
  const Eigen::Index n = static_cast<Eigen::Index>(pieces.size());
  for (const auto& coord : pieces) {
    require(!coord.empty(), "mapping: every coordinate needs at least one piece");
    for (const auto& piece : coord) {
      require(piece.c.size() == n, "mapping: piece dimension mismatch");
      require((piece.c.array() >= -kSignTol).all(), "mapping: piece c must be nonnegative");
      require(piece.sigma > 0.0, "mapping: piece sigma must be strictly positive");
      require(piece.b > 0.0, "mapping: piece b must be strictly positive");
    }
  }
  InterferenceMapping T;
  T.pieces_ = std::move(pieces);
  return T;
}

Eigen::Index InterferenceMapping::dimension() const {
  return affine_ ? affine_->dimension() : static_cast<Eigen::Index>(pieces_.size());
}

const AffineInterferenceModel& InterferenceMapping::affine_model() const {
  if (!affine_) throw std::logic_error("mapping: not affine");
  return *affine_;
}

Vector InterferenceMapping::evaluate(const Vector& p) const {
  require(p.size() == dimension(), "mapping: dimension mismatch");
  if (affine_) return affine_->M * p + affine_->u;
  Vector out(dimension());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& piece : pieces_[i]) {
      best = std::min(best, (piece.c.dot(p) + piece.sigma) / piece.b);
    }
    out(static_cast<Eigen::Index>(i)) = best;
  }
  return out;
}

Vector InterferenceMapping::evaluate_asymptotic(const Vector& x) const {
  require(x.size() == dimension(), "mapping: dimension mismatch");
  if (affine_) return affine_->M * x;
  Vector out(dimension());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& piece : pieces_[i]) {
      best = std::min(best, piece.c.dot(x) / piece.b);
    }
    out(static_cast<Eigen::Index>(i)) = best;
  }
  return out;
}

Vector InterferenceMapping::evaluate_norm_augmented(
    const Vector& x, const PolyhedralMonotoneNorm& norm) const {
  require(x.size() == dimension(), "mapping: dimension mismatch");
  const double nx = norm.evaluate(x);
  if (affine_) return affine_->M * x + nx * affine_->u;
  Vector out(dimension());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& piece : pieces_[i]) {
      best = std::min(best, (piece.c.dot(x) + piece.sigma * nx) / piece.b);
    }
    out(static_cast<Eigen::Index>(i)) = best;
  }
  return out;
}

InterferenceMapping InterferenceMapping::scaled(const Vector& s) const {
  require(s.size() == dimension(), "mapping: scale dimension mismatch");
  require((s.array() > 0.0).all(), "mapping: scale must be strictly positive");
  if (affine_) {
    AffineInterferenceModel m;
    m.M = s.asDiagonal() * affine_->M;
    m.u = s.cwiseProduct(affine_->u);
    return affine(std::move(m));
  }
  auto scaled_pieces = pieces_;
  for (std::size_t i = 0; i < scaled_pieces.size(); ++i) {
    for (auto& piece : scaled_pieces[i]) piece.b /= s(static_cast<Eigen::Index>(i));
  }
  return inf_family(std::move(scaled_pieces));
}

InterferenceMapping InterferenceMapping::restricted(
    const std::vector<Eigen::Index>& keep) const {
  require(!keep.empty(), "mapping: cannot restrict to zero coordinates");
  const Eigen::Index m = static_cast<Eigen::Index>(keep.size());
  if (affine_) {
    AffineInterferenceModel sub;
    sub.M.resize(m, m);
    sub.u.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      sub.u(i) = affine_->u(keep[static_cast<std::size_t>(i)]);
      for (Eigen::Index j = 0; j < m; ++j) {
        sub.M(i, j) = affine_->M(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
      }
    }
    return affine(std::move(sub));
  }
  std::vector<std::vector<InfFamilyPiece>> sub(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (const auto& piece : pieces_[static_cast<std::size_t>(keep[static_cast<std::size_t>(i)])]) {
      InfFamilyPiece q;
      q.c.resize(m);
      for (Eigen::Index j = 0; j < m; ++j) q.c(j) = piece.c(keep[static_cast<std::size_t>(j)]);
      q.sigma = piece.sigma;
      q.b = piece.b;
      sub[static_cast<std::size_t>(i)].push_back(std::move(q));
    }
  }
  return inf_family(std::move(sub));
}

// ---------------------------------------------------------------------------
// Free functions
// ---------------------------------------------------------------------------

double norm_eval(const PolyhedralMonotoneNorm& norm, const Vector& x) {
  return norm.evaluate(x);
}

Vector eval_standard(const InterferenceMapping& T, const Vector& p) {
  return T.evaluate(p);
}

Vector eval_norm_augmented(const InterferenceMapping& T, const PolyhedralMonotoneNorm& norm,
                           const Vector& x) {
  return T.evaluate_norm_augmented(x, norm);
}

AsymptoticMapping asymptotic(const InterferenceMapping& T) { return AsymptoticMapping{T}; }

}  // namespace urt
