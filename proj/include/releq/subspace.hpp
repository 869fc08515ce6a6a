#ifndef RELEQ_SUBSPACE_HPP
#define RELEQ_SUBSPACE_HPP

#include <Eigen/Dense>

#include "releq/tolerances.hpp"

namespace releq {

/// A linear subspace of R^n held as an orthonormal column basis.
/// The basis may have zero columns (the trivial subspace).
class Subspace {
 public:
  Subspace() = default;
  Subspace(int ambient_dim, Eigen::MatrixXd orthonormal_basis, double tol);

  /// Orthonormalizes the columns of `generators` by rank-revealing SVD.
  /// Singular values <= max(tol_rel * sigma_max, abs_floor) are dropped;
  /// the absolute floor guards matrices that are pure roundoff noise.
  static Subspace span_of(const Eigen::MatrixXd& generators,
                          double tol_rel = tol::rank_rel,
                          double abs_floor = 0.0);

  /// The full ambient space R^n.
  static Subspace full(int ambient_dim);

  /// The trivial subspace of R^n.
  static Subspace zero(int ambient_dim);

  int ambient_dim() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  double tol() const { return tol_; }

  /// Orthogonal projection of v onto the subspace.
  Eigen::VectorXd project(const Eigen::VectorXd& v) const;

  /// |v - project(v)|.
  double residual(const Eigen::VectorXd& v) const;

  /// True iff v lies in the subspace up to tol::sub * (1 + |v|).
  bool contains_vector(const Eigen::VectorXd& v) const;

  bool contains(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;
  Subspace sum(const Subspace& other) const;
  Subspace perp() const;

 private:
  int ambient_ = 0;
  Eigen::MatrixXd basis_;  // ambient_ x dim, orthonormal columns
  double tol_ = tol::rank_rel;
};

/// Numerical rank of A: singular values > max(tol_rel * sigma_max, abs_floor).
int numerical_rank(const Eigen::MatrixXd& a, double tol_rel = tol::rank_rel,
                   double abs_floor = 0.0);

/// Right null space of A as a Subspace of R^cols.
Subspace null_space(const Eigen::MatrixXd& a, double tol_rel = tol::rank_rel,
                    double abs_floor = 0.0);

/// Rank of A, requiring a spectral gap sigma_r/sigma_{r+1} >= tol::rank_gap
/// at the cut (waived when the first dropped value is below the absolute
/// floor). Returns -1 when the decision is ambiguous.
int rank_with_gap(const Eigen::MatrixXd& a, double tol_rel = tol::rank_rel,
                  double abs_floor = 0.0);

/// sin of the largest principal angle by which `inner` sticks out of
/// `outer`: max over an orthonormal basis of inner of |(I - P_outer) u|.
/// Zero-dimensional `inner` gives 0.
double containment_gap(const Subspace& inner, const Subspace& outer);

/// sin of the largest principal angle between two subspaces of equal
/// dimension (symmetric distance; 0 iff equal).
double subspace_angle(const Subspace& a, const Subspace& b);

}  // namespace releq

#endif
