#ifndef RELEQ_LIE_ALGEBRA_HPP
#define RELEQ_LIE_ALGEBRA_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "releq/subspace.hpp"

namespace releq {

// Conventions used throughout the library
// ---------------------------------------
// Vectors in the algebra g are coordinate vectors in a fixed basis (e_i).
// Covectors in g* are stored by their pairing values against that basis,
// so <mu, y> is the plain dot product of coordinate vectors.
//
// The coadjoint representation is fixed by
//     <coad_xi mu, eta> = -<mu, [xi, eta]>      (coad_xi = -ad(xi)^T),
// which makes coad a genuine Lie algebra representation; on so(3) it is
// the cross product xi x mu.
//
// Every constructor produces a basis that is orthonormal for the invariant
// inner product (-Killing/2 on each semisimple factor, the Euclidean
// product on torus factors). Consequently the stored inner product matrix
// is the identity, ad(x) is antisymmetric, adjoint group matrices are
// orthogonal, and dualization is an exact involution.

/// Element of the Lie algebra g.
struct AlgVector {
  Eigen::VectorXd coords;
};

/// Element of the dual g*.
struct CoVector {
  Eigen::VectorXd coords;
};

/// A direct factor of a compact Lie algebra (bookkeeping for presets/tests).
struct AlgebraFactor {
  std::string name;
  int offset = 0;
  int dim = 0;
  bool abelian = false;
};

/// Finite-dimensional compact Lie algebra given by structure constants.
class LieAlgebra {
 public:
  /// `ad_generators[i]` is the matrix of ad_{e_i}: (ad_i)(k,j) = c[i][j][k].
  LieAlgebra(std::string name, std::vector<Eigen::MatrixXd> ad_generators,
             std::vector<AlgebraFactor> factors);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int rank() const { return rank_; }
  const Eigen::MatrixXd& inner_product() const { return inner_; }
  const std::vector<AlgebraFactor>& factors() const { return factors_; }

  /// Structure constant c[i][j][k] with [e_i, e_j] = sum_k c[i][j][k] e_k.
  double structure_constant(int i, int j, int k) const {
    return ad_[i](k, j);
  }

  /// Matrix of ad_x: y -> [x, y].
  Eigen::MatrixXd ad_matrix(const Eigen::VectorXd& x) const;

  /// Matrix of coad_xi = -ad(xi)^T acting on dual coordinates.
  Eigen::MatrixXd coad_matrix(const Eigen::VectorXd& xi) const;

  /// Matrix of eta -> coad_eta mu (columns are coad_{e_j} mu).
  Eigen::MatrixXd coad_by_generator(const Eigen::VectorXd& mu) const;

  /// Largest Jacobi-identity residual over all basis triples.
  double jacobi_residual() const;

  /// Operator norm bound of x -> ad_x over unit x; the natural magnitude
  /// scale of bracket-derived matrices (used as an absolute rank floor so
  /// roundoff shadows of exact zeros are not counted as rank).
  double bracket_scale() const { return bracket_scale_; }

 private:
  std::string name_;
  int dim_ = 0;
  std::vector<Eigen::MatrixXd> ad_;
  Eigen::MatrixXd inner_;
  std::vector<AlgebraFactor> factors_;
  int rank_ = 0;
  double bracket_scale_ = 0.0;
};

/// Parses an algebra descriptor: "so(n)" (n <= 4), "su(n)" (n <= 3),
/// "torus(k)", or sums of these joined with '+'. Throws on anything else.
LieAlgebra build_algebra(const std::string& descriptor);

LieAlgebra direct_sum(const std::vector<LieAlgebra>& parts);

AlgVector bracket(const LieAlgebra& g, const AlgVector& x, const AlgVector& y);
CoVector coad(const LieAlgebra& g, const AlgVector& xi, const CoVector& mu);

CoVector dualize(const LieAlgebra& g, const AlgVector& x);
AlgVector dualize(const LieAlgebra& g, const CoVector& mu);

/// Isotropy subalgebra g_xi = ker ad_xi.
Subspace stabilizer(const LieAlgebra& g, const AlgVector& xi);
/// Isotropy subalgebra g_mu = ker(eta -> coad_eta mu).
Subspace stabilizer(const LieAlgebra& g, const CoVector& mu);

bool is_subalgebra(const LieAlgebra& g, const Subspace& k);

/// Center z(k) = {x in k : [x, k] = 0}. Requires k closed under the
/// bracket to tolerance tol::alg; throws otherwise.
Subspace center_of(const LieAlgebra& g, const Subspace& k);

/// Dimension of the derived space [k, k].
int derived_dim(const LieAlgebra& g, const Subspace& k);

/// Rank of the subalgebra k: dimension of the centralizer in k of a
/// generic element (minimum over seeded retries; see rank notes in the
/// implementation).
int rank_of(const LieAlgebra& g, const Subspace& k, unsigned seed = 20240229u);

/// Adjoint group matrix Ad_{exp(t x)} = expm(t ad_x).
Eigen::MatrixXd group_adjoint(const LieAlgebra& g, const Eigen::VectorXd& x,
                              double t);

/// exp(t ad_x) applied to an algebra element.
AlgVector conjugate(const LieAlgebra& g, const AlgVector& x, double t,
                    const AlgVector& target);
/// Coadjoint transport of a covector by exp(t x): expm(-t ad(x)^T).
CoVector conjugate(const LieAlgebra& g, const AlgVector& x, double t,
                   const CoVector& target);

}  // namespace releq

#endif
