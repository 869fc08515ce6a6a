#ifndef RELEQ_SOLVER_HPP
#define RELEQ_SOLVER_HPP

#include <vector>

#include "releq/commuting.hpp"
#include "releq/system.hpp"

namespace releq {

/// A solved relative equilibrium: the flow through `point` is the
/// one-parameter group motion generated by `generator`.
struct RelativeEquilibrium {
  PhasePoint point;
  AlgVector generator;       // spatial generator xi
  CoVector momentum;         // mu = J(point)
  TypeFingerprint fingerprint;
  double residual_norm = 0.0;
};

/// psi is the tangent-space residual X_H - xi.p, psi_o the cotangent
/// residual dH - dJ_xi; they satisfy psi_o = omega-flat(psi).
struct ResidualPair {
  Eigen::VectorXd psi;
  Eigen::VectorXd psi_o;
};

ResidualPair residual(const CotangentGroupSystem& sys, const PhasePoint& p,
                      const Eigen::VectorXd& xi);

struct SolveOptions {
  int max_iter = 80;
  double svd_truncation = 1e-8;  // relative cut for the pseudo-inverse
  int max_backtracks = 20;       // Armijo halvings on |psi|^2
};

struct SolveOutcome {
  bool converged = false;
  RelativeEquilibrium re;    // valid only when converged
  int iterations = 0;
  double last_residual = 0.0;
};

/// Validates and classifies an exactly known relative equilibrium.
/// Throws if the residual exceeds the acceptance tolerance.
RelativeEquilibrium make_relative_equilibrium(const CotangentGroupSystem& sys,
                                              const PhasePoint& p,
                                              const Eigen::VectorXd& xi);

/// Gauss-Newton least squares on (p, xi) -> psi(p, xi) with a
/// truncated-SVD pseudo-inverse step (the group-orbit and generator-shift
/// null directions are rank-deficient by construction and harmless) and
/// Armijo backtracking. An exact guess is accepted with zero iterations.
SolveOutcome solve_re(const CotangentGroupSystem& sys, const PhasePoint& guess,
                      const Eigen::VectorXd& guess_xi,
                      const SolveOptions& opts = {});

/// Applies exp(t x) to a relative equilibrium, transporting point,
/// generator and momentum consistently; the fingerprint is recomputed.
RelativeEquilibrium transform_re(const CotangentGroupSystem& sys,
                                 const RelativeEquilibrium& re,
                                 const Eigen::VectorXd& x, double t);

enum class BranchStatus { kCompleted, kFingerprintChange, kCorrectorFailure };

struct BranchResult {
  std::vector<RelativeEquilibrium> points;  // starts with the seed RE
  BranchStatus status = BranchStatus::kCompleted;
};

/// Predictor-corrector continuation of the solution branch through `re`.
/// The predictor direction is the projection of `direction_hint` (a
/// trivialized phase displacement) onto the kernel of the linearized
/// equations; a fingerprint change ends the branch with an explicit event.
BranchResult continue_branch(const CotangentGroupSystem& sys,
                             const RelativeEquilibrium& re,
                             const Eigen::VectorXd& direction_hint, int steps,
                             double step_size,
                             const SolveOptions& opts = {});

/// Random multistart driver: draws attitudes and momenta from the seed,
/// solves, and returns the converged relative equilibria.
std::vector<RelativeEquilibrium> multistart_solve(
    const CotangentGroupSystem& sys, int starts, std::uint64_t seed,
    double momentum_scale = 1.0, const SolveOptions& opts = {});

}  // namespace releq

#endif
