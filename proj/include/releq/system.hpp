#ifndef RELEQ_SYSTEM_HPP
#define RELEQ_SYSTEM_HPP

#include <cstdint>

#include "releq/lie_algebra.hpp"

namespace releq {

// Cotangent bundle of a compact group in left trivialization. A phase
// point is (attitude, body momentum); the attitude is carried as the
// adjoint matrix of a movable chart base times exponential coordinates.
// Tangent vectors at a point are written in the left-trivialized frame
// (eta, nu) in g + g*, covectors as (alpha, beta) in g* + g with pairing
// alpha.eta + beta.nu. All evaluation-bundle matrices use that frame.
//
// The Hamiltonian is the invariant kinetic energy H = 1/2 m.Minv m, the
// group acts by (cotangent-lifted) left multiplication, and the momentum
// map is the spatially transported body momentum J = Ad-transport of m.

/// Chart-based phase point: attitude frame (adjoint matrix of the chart
/// base, orthogonal), exponential group coordinates, body momentum.
struct PhasePoint {
  Eigen::MatrixXd frame;     // n x n adjoint matrix of the chart base
  Eigen::VectorXd group;     // exponential coordinates around the base
  Eigen::VectorXd momentum;  // body momentum (dual coordinates)

  Eigen::VectorXd coords() const {
    Eigen::VectorXd c(group.size() + momentum.size());
    c << group, momentum;
    return c;
  }
};

/// Everything the solver and the linear analysis need at one point.
struct EvalBundle {
  double H = 0.0;
  Eigen::VectorXd dH;         // 2n, cotangent coordinates
  Eigen::VectorXd X_H;        // 2n, tangent coordinates
  Eigen::VectorXd J;          // n, spatial momentum
  Eigen::MatrixXd dJ;         // n x 2n
  Eigen::MatrixXd omega;      // 2n x 2n, antisymmetric, invertible
  Eigen::MatrixXd generator;  // 2n x n, columns are xi.p for basis xi
  Eigen::MatrixXd ad_point;   // n x n adjoint matrix at the point
};

class CotangentGroupSystem {
 public:
  /// mass_matrix is the positive-definite quadratic form M with
  /// H(m) = 1/2 m . M^{-1} m (the inertia tensor for the rigid body).
  CotangentGroupSystem(LieAlgebra algebra, Eigen::MatrixXd mass_matrix);

  const LieAlgebra& algebra() const { return algebra_; }
  int phase_dim() const { return 2 * algebra_.dim(); }
  const Eigen::MatrixXd& mass_matrix() const { return mass_; }
  const Eigen::MatrixXd& mass_inverse() const { return mass_inv_; }
  double chart_radius() const { return 0.5; }

  /// Point at the group identity with the given body momentum.
  PhasePoint point_at_identity(const Eigen::VectorXd& momentum) const;

  /// Throws when the group coordinates leave the chart.
  EvalBundle eval(const PhasePoint& p) const;

  /// Frame matrix of the linearization of X_H - xi-generator at p.
  /// Intrinsic (frame-independent) exactly at relative equilibria.
  Eigen::MatrixXd linearization(const PhasePoint& p,
                                const Eigen::VectorXd& xi) const;

  /// Moves p by the trivialized displacement (eta, nu) and re-centers the
  /// chart (group coordinates return to zero; the base absorbs exp(eta)).
  PhasePoint retract(const PhasePoint& p, const Eigen::VectorXd& eta,
                     const Eigen::VectorXd& nu) const;

  /// Absorbs nonzero group coordinates into the chart base.
  PhasePoint recenter(const PhasePoint& p) const;

  /// Action of exp(t x): left translation of the attitude.
  PhasePoint transform(const PhasePoint& p, const Eigen::VectorXd& x,
                       double t) const;

  /// Trivialized displacement from a to b (valid for nearby points):
  /// (log of the relative attitude, momentum difference). The attitude
  /// part is recovered from the adjoint representation, on which central
  /// directions act trivially; displacement along torus factors of the
  /// group therefore reads as zero.
  Eigen::VectorXd displacement(const PhasePoint& a, const PhasePoint& b) const;

 private:
  Eigen::MatrixXd ad_at(const PhasePoint& p) const;

  LieAlgebra algebra_;
  Eigen::MatrixXd mass_;
  Eigen::MatrixXd mass_inv_;
};

/// Free rigid body: so(3) with inertia diag(i1, i2, i3).
CotangentGroupSystem make_rigid_body(double i1 = 1.0, double i2 = 2.0,
                                     double i3 = 3.0);

/// Rigid body carrying three rotors: so(3)+torus(3) with a coupled
/// positive-definite mass matrix [[diag(2,3,4), c R],[c R^T, I]],
/// R a fixed generic 3x3 matrix drawn from the seed.
CotangentGroupSystem make_rigid_body_rotors(double coupling = 0.3,
                                            std::uint64_t seed = 42);

/// Generic cotangent-group system with an explicit mass matrix.
CotangentGroupSystem make_cotangent_group_system(const LieAlgebra& g,
                                                 Eigen::MatrixXd mass_matrix);

}  // namespace releq

#endif
