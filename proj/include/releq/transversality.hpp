#ifndef RELEQ_TRANSVERSALITY_HPP
#define RELEQ_TRANSVERSALITY_HPP

#include "releq/solver.hpp"

namespace releq {

// Linear analysis at a relative equilibrium p_e with generator xi_e and
// momentum mu_e. The phase tangent space splits as
//
//     T_{p_e}P = T0 + N1 + N0 + T1
//
// with T0 = g_mu.p_e, T1 = (g_mu-orthogonal-complement).p_e,
// N1 a complement of T0 inside ker dJ (chosen symplectically canonical:
// the omega-annihilator of N0 within ker dJ), and N0 a complement of the
// orbit + kernel sheared so that dJ maps it exactly onto g*_mu. In this
// frame the linearization of X_H - xi_e-generator is block triangular
// with diagonal (-ad_{xi_e}|g_mu, dX_red, -coad_{xi_e}|g*_mu,
// -ad_{xi_e}|g_mu-perp); the coupling block C (N0 -> N1), its transpose
// block Cstar (N1 -> T0) and the drift block D (N0 -> T0) fill the upper
// triangle, and D is symmetric in the duality pairing.

/// Adapted frame at a relative equilibrium. Block coordinates for T0, N0
/// and T1 are coefficients in the orthonormal bases `gmu_basis` /
/// `gmu_perp_basis` of the momentum isotropy subalgebra and its invariant
/// complement; N1 carries its own orthonormal columns.
struct AdaptedFrame {
  Eigen::MatrixXd t0;  // 2n x k   columns are images of gmu_basis
  Eigen::MatrixXd n1;  // 2n x (n-k)
  Eigen::MatrixXd n0;  // 2n x k   dJ maps columns onto gmu_basis exactly
  Eigen::MatrixXd t1;  // 2n x (n-k)
  Eigen::MatrixXd gmu_basis;       // n x k
  Eigen::MatrixXd gmu_perp_basis;  // n x (n-k)

  int dim_t0() const { return static_cast<int>(t0.cols()); }
  int dim_n1() const { return static_cast<int>(n1.cols()); }
  int dim_n0() const { return static_cast<int>(n0.cols()); }
  int dim_t1() const { return static_cast<int>(t1.cols()); }

  /// [t0 | n1 | n0 | t1] as an invertible 2n x 2n matrix.
  Eigen::MatrixXd full() const;
};

/// Blocks of the linearization in the adapted frame, with the residuals of
/// the structure relations they satisfy.
struct NormalFormBlocks {
  Eigen::MatrixXd dx_red;  // N1 -> N1 reduced linearization
  Eigen::MatrixXd c;       // N0 -> N1 coupling
  Eigen::MatrixXd cstar;   // N1 -> T0
  Eigen::MatrixXd d;       // N0 -> T0 drift (symmetric)
  Eigen::MatrixXd b_t0;    // T0 -> T0, equals -ad_{xi_e}|g_mu
  Eigen::MatrixXd b_n0;    // N0 -> N0, equals -coad_{xi_e}|g*_mu
  Eigen::MatrixXd b_t1;    // T1 -> T1, equals -ad_{xi_e}|g_mu-perp
  Eigen::VectorXcd dx_red_spectrum;

  // Residuals, all relative to the linearization norm.
  double forbidden_block_residual = 0.0;  // zero pattern of the frame form
  double structure_residual_c = 0.0;      // dx_red C - C b_n0
  double structure_residual_cstar = 0.0;  // Cstar dx_red - b_t0 Cstar
  double structure_residual_d = 0.0;      // b_t0 D - D b_n0
  double d_symmetry_residual = 0.0;       // D - D^T
  double diagonal_residual = 0.0;         // extracted diagonal vs operators
};

/// Builds the adapted frame. Throws on rank deficiencies (action not free
/// or the input not a relative equilibrium).
AdaptedFrame adapted_frame(const CotangentGroupSystem& sys,
                           const RelativeEquilibrium& re);

/// Extracts the normal-form blocks. When the spectra of dx_red and b_n0
/// are disjoint the coupling block is removed by a Sylvester shear of N0
/// along N1 (then |C| < tol::nf); the frame is updated in place.
NormalFormBlocks normal_form_blocks(const CotangentGroupSystem& sys,
                                    const RelativeEquilibrium& re,
                                    AdaptedFrame& frame);

struct DirectVerdict {
  bool transversal = false;
  double gap = 0.0;        // sin of the largest principal angle of
                           // ker dJ against the admissible image
  double threshold = 0.0;  // gap below this means transversal
};

/// Decides transversality by pure linear algebra: the kernel of dJ must be
/// contained in {dX_{H_xi}(p)v - eta.p} over pairs (v, eta) with
/// (dJ v, eta) tangent to the momentum-generator stratum.
DirectVerdict check_transversal_direct(const CotangentGroupSystem& sys,
                                       const RelativeEquilibrium& re);

struct NormalFormVerdict {
  bool transversal = false;
  bool zero_semisimple = false;   // condition 1 (vacuous when nondegenerate)
  bool c_onto_kernel = false;     // condition 2
  bool drift_spans = false;       // condition 3
  bool nondegenerate = false;     // dx_red invertible (or N1 empty)
  bool dbar_surjective = false;   // nondegenerate shortcut
};

/// Decides transversality from the extracted blocks.
NormalFormVerdict check_transversal_normalform(const CotangentGroupSystem& sys,
                                               const RelativeEquilibrium& re,
                                               const AdaptedFrame& frame,
                                               const NormalFormBlocks& blocks);

/// 2 dim z >= dim k, necessary for transversality.
bool necessary_inequality(const TypeFingerprint& fp);

/// True iff the zero eigenvalue of `a` is semisimple (or absent), decided
/// by rank(a) == rank(a^2); avoids eigenvector conditioning issues.
bool zero_eigenvalue_semisimple(const Eigen::MatrixXd& a);

/// Tangent space at p_e of the manifold of relative equilibria with the
/// same orbit type, in phase coordinates. Requires a transversal input.
Subspace tangent_space_E(const CotangentGroupSystem& sys,
                         const RelativeEquilibrium& re,
                         const AdaptedFrame& frame,
                         const NormalFormBlocks& blocks);

/// First-order variation of the generator along a tangent direction of
/// the relative-equilibrium manifold (v a phase vector in
/// the span of tangent_space_E). The returned eta makes
/// dX_{H_xi}(p)v - eta.p = 0 to tol::nf.
AlgVector generator_variation(const CotangentGroupSystem& sys,
                              const RelativeEquilibrium& re,
                              const AdaptedFrame& frame,
                              const NormalFormBlocks& blocks,
                              const Eigen::VectorXd& v);

struct SymplecticityRecord {
  int measured_rank = 0;
  int tangent_dim = 0;
  bool is_symplectic = false;  // measured_rank == tangent_dim
  bool predicted = false;      // nondegenerate and G_mu a maximal torus
};

/// Rank of omega restricted to tangent_space_E against the prediction of
/// the maximal-torus criterion. Requires a transversal input.
SymplecticityRecord symplecticity_check(const CotangentGroupSystem& sys,
                                        const RelativeEquilibrium& re,
                                        const AdaptedFrame& frame,
                                        const NormalFormBlocks& blocks);

struct SingularityDescriptor {
  int dim_l = 0;   // dim k - dim z
  int rank_l = 0;  // rank k - dim z
  bool smooth_point = false;
  int cone_dim = 0;  // dim of the generic stratum of the local cone model
  std::string label;
};

/// Local cone model transverse to the stratum: the commuting variety of
/// l = k/z. dim_l = 0 is a smooth point; dim 3 / rank 1 is the commuting
/// variety of so(3) with cone dimension 4.
SingularityDescriptor singularity_model(const TypeFingerprint& fp);

/// Local dimension of the solution set of the stratified equations at a
/// transversal relative equilibrium: dim {v : exists eta with
/// dX_{H_xi}(p)v = eta.p and (dJ v, eta) tangent to the stratum}.
/// Equals dim G + 2 dim z - dim k. Throws on non-transversal inputs.
int manifold_dim(const CotangentGroupSystem& sys, const RelativeEquilibrium& re);

}  // namespace releq

#endif
