#include "releq/subspace.hpp"

#include <algorithm>
#include <stdexcept>

namespace releq {

namespace {

Eigen::MatrixXd empty_basis(int ambient) { return Eigen::MatrixXd(ambient, 0); }

}  // namespace

Subspace::Subspace(int ambient_dim, Eigen::MatrixXd orthonormal_basis, double tol)
    : ambient_(ambient_dim), basis_(std::move(orthonormal_basis)), tol_(tol) {
  if (basis_.rows() != ambient_)
    throw std::invalid_argument("Subspace: basis rows != ambient dimension");
  if (basis_.cols() > 0) {
    const double err = (basis_.transpose() * basis_ -
                        Eigen::MatrixXd::Identity(basis_.cols(), basis_.cols()))
                           .norm();
    if (err > tol::sub)
      throw std::invalid_argument("Subspace: basis is not orthonormal");
  }
}

Subspace Subspace::span_of(const Eigen::MatrixXd& generators, double tol_rel,
                           double abs_floor) {
  const int n = static_cast<int>(generators.rows());
  if (generators.cols() == 0) return zero(n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(generators, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cut =
      sv.size() > 0 ? std::max(tol_rel * sv(0), abs_floor) : abs_floor;
  int r = 0;
  while (r < sv.size() && sv(r) > cut && sv(r) > 0.0) ++r;
  return Subspace(n, svd.matrixU().leftCols(r), tol_rel);
}

Subspace Subspace::full(int ambient_dim) {
  return Subspace(ambient_dim, Eigen::MatrixXd::Identity(ambient_dim, ambient_dim),
                  tol::rank_rel);
}

Subspace Subspace::zero(int ambient_dim) {
  return Subspace(ambient_dim, empty_basis(ambient_dim), tol::rank_rel);
}

Eigen::VectorXd Subspace::project(const Eigen::VectorXd& v) const {
  if (dim() == 0) return Eigen::VectorXd::Zero(ambient_);
  return basis_ * (basis_.transpose() * v);
}

double Subspace::residual(const Eigen::VectorXd& v) const {
  return (v - project(v)).norm();
}

bool Subspace::contains_vector(const Eigen::VectorXd& v) const {
  return residual(v) <= tol::sub * (1.0 + v.norm());
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_ != ambient_)
    throw std::invalid_argument("Subspace::contains: ambient mismatch");
  for (int j = 0; j < other.dim(); ++j)
    if (residual(other.basis_.col(j)) >= tol::sub) return false;
  return true;
}

Subspace Subspace::intersect(const Subspace& other) const {
  if (other.ambient_ != ambient_)
    throw std::invalid_argument("Subspace::intersect: ambient mismatch");
  if (dim() == 0 || other.dim() == 0) return zero(ambient_);
  // x = A u = B w  <=>  [A -B][u;w] = 0; map the u-part back through A.
  Eigen::MatrixXd stacked(ambient_, dim() + other.dim());
  stacked << basis_, -other.basis_;
  Subspace ker = null_space(stacked, std::max(tol_, other.tol_));
  if (ker.dim() == 0) return zero(ambient_);
  Eigen::MatrixXd reps = basis_ * ker.basis().topRows(dim());
  return span_of(reps, std::max(tol_, other.tol_));
}

Subspace Subspace::sum(const Subspace& other) const {
  if (other.ambient_ != ambient_)
    throw std::invalid_argument("Subspace::sum: ambient mismatch");
  Eigen::MatrixXd stacked(ambient_, dim() + other.dim());
  stacked << basis_, other.basis_;
  return span_of(stacked, std::max(tol_, other.tol_));
}

Subspace Subspace::perp() const {
  if (dim() == 0) return full(ambient_);
  if (dim() == ambient_) return zero(ambient_);
  return null_space(basis_.transpose(), tol_);
}

int numerical_rank(const Eigen::MatrixXd& a, double tol_rel, double abs_floor) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  const double cut = std::max(tol_rel * sv(0), abs_floor);
  int r = 0;
  while (r < sv.size() && sv(r) > cut && sv(r) > 0.0) ++r;
  return r;
}

Subspace null_space(const Eigen::MatrixXd& a, double tol_rel, double abs_floor) {
  const int n = static_cast<int>(a.cols());
  if (a.rows() == 0 || n == 0) return Subspace::full(n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut =
      sv.size() > 0 ? std::max(tol_rel * sv(0), abs_floor) : abs_floor;
  int r = 0;
  while (r < sv.size() && sv(r) > cut && sv(r) > 0.0) ++r;
  return Subspace(n, svd.matrixV().rightCols(n - r), tol_rel);
}

int rank_with_gap(const Eigen::MatrixXd& a, double tol_rel, double abs_floor) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  if (sv(0) <= abs_floor) return 0;
  const double cut = std::max(tol_rel * sv(0), abs_floor);
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  if (r == sv.size()) return r;
  if (sv(r) <= abs_floor || sv(r) == 0.0) return r;
  const double last_kept = r > 0 ? sv(r - 1) : sv(0);
  return (last_kept / sv(r) >= tol::rank_gap) ? r : -1;
}

double containment_gap(const Subspace& inner, const Subspace& outer) {
  double worst = 0.0;
  for (int j = 0; j < inner.dim(); ++j)
    worst = std::max(worst, outer.residual(inner.basis().col(j)));
  return std::min(worst, 1.0);
}

double subspace_angle(const Subspace& a, const Subspace& b) {
  return std::max(containment_gap(a, b), containment_gap(b, a));
}

}  // namespace releq
