#include "releq/solver.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace releq {

namespace {

Eigen::VectorXd random_normal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

double residual_scale(const EvalBundle& b) { return 1.0 + b.X_H.norm(); }

RelativeEquilibrium assemble(const CotangentGroupSystem& sys,
                             const PhasePoint& p, const Eigen::VectorXd& xi,
                             const EvalBundle& b, double res) {
  RelativeEquilibrium re;
  re.point = p;
  re.generator = AlgVector{xi};
  re.momentum = CoVector{b.J};
  re.residual_norm = res;
  CommutingPair pair{re.momentum, re.generator, &sys.algebra()};
  re.fingerprint = classify_pair(pair);
  return re;
}

}  // namespace

ResidualPair residual(const CotangentGroupSystem& sys, const PhasePoint& p,
                      const Eigen::VectorXd& xi) {
  const EvalBundle b = sys.eval(p);
  ResidualPair r;
  r.psi = b.X_H - b.generator * xi;
  // dJ_xi is the differential of the momentum component <J, xi>.
  r.psi_o = b.dH - b.dJ.transpose() * xi;
  return r;
}

RelativeEquilibrium make_relative_equilibrium(const CotangentGroupSystem& sys,
                                              const PhasePoint& p,
                                              const Eigen::VectorXd& xi) {
  const EvalBundle b = sys.eval(p);
  const double res = (b.X_H - b.generator * xi).norm();
  if (res >= tol::re_rel * residual_scale(b))
    throw std::invalid_argument(
        "make_relative_equilibrium: residual exceeds tolerance");
  return assemble(sys, p, xi, b, res);
}

SolveOutcome solve_re(const CotangentGroupSystem& sys, const PhasePoint& guess,
                      const Eigen::VectorXd& guess_xi,
                      const SolveOptions& opts) {
  const int n = sys.algebra().dim();
  PhasePoint p = sys.recenter(guess);
  Eigen::VectorXd xi = guess_xi;

  SolveOutcome out;
  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    const EvalBundle b = sys.eval(p);
    const Eigen::VectorXd psi = b.X_H - b.generator * xi;
    out.iterations = iter;
    out.last_residual = psi.norm();
    if (psi.norm() < tol::re_rel * residual_scale(b)) {
      out.converged = true;
      out.re = assemble(sys, p, xi, b, psi.norm());
      return out;
    }
    if (iter == opts.max_iter) break;

    // Augment with a no-radial-drift gauge row: the residual is quadratic
    // along the momentum scaling, so the unconstrained min-norm step slides
    // toward the zero-momentum cone point instead of the nearby branch.
    // Group-orbit and generator-shift null directions are left to the
    // truncation.
    const double m_norm = p.momentum.norm();
    const bool gauge = m_norm > 1e-12 * (1.0 + psi.norm());
    Eigen::MatrixXd jac(2 * n + (gauge ? 1 : 0), 3 * n);
    jac.topLeftCorner(2 * n, 2 * n) = sys.linearization(p, xi);
    jac.topRightCorner(2 * n, n) = -b.generator;
    Eigen::VectorXd rhs(jac.rows());
    rhs.head(2 * n) = -psi;
    if (gauge) {
      jac.row(2 * n).setZero();
      jac.row(2 * n).segment(n, n) = p.momentum.transpose() / m_norm;
      rhs(2 * n) = 0.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(opts.svd_truncation);
    const Eigen::VectorXd step = svd.solve(rhs);

    // Armijo backtracking on |psi|^2; plain Gauss-Newton can overshoot
    // near saddle-type equilibria.
    const double f0 = psi.squaredNorm();
    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
      PhasePoint cand =
          sys.retract(p, alpha * step.head(n), alpha * step.segment(n, n));
      const Eigen::VectorXd cand_xi = xi + alpha * step.tail(n);
      const EvalBundle cb = sys.eval(cand);
      const double f1 = (cb.X_H - cb.generator * cand_xi).squaredNorm();
      if (f1 <= f0 * (1.0 - 1e-4 * alpha)) {
        p = cand;
        xi = cand_xi;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // stalled line search: report diagnostics
  }
  return out;
}

RelativeEquilibrium transform_re(const CotangentGroupSystem& sys,
                                 const RelativeEquilibrium& re,
                                 const Eigen::VectorXd& x, double t) {
  const PhasePoint moved = sys.transform(re.point, x, t);
  const Eigen::VectorXd xi =
      group_adjoint(sys.algebra(), x, t) * re.generator.coords;
  return make_relative_equilibrium(sys, moved, xi);
}

BranchResult continue_branch(const CotangentGroupSystem& sys,
                             const RelativeEquilibrium& re,
                             const Eigen::VectorXd& direction_hint, int steps,
                             double step_size, const SolveOptions& opts) {
  const int n = sys.algebra().dim();
  if (direction_hint.size() != 2 * n)
    throw std::invalid_argument("continue_branch: hint must be a phase vector");

  BranchResult result;
  result.points.push_back(re);

  Eigen::VectorXd hint = direction_hint;
  for (int s = 0; s < steps; ++s) {
    const RelativeEquilibrium& cur = result.points.back();

    // Kernel of the linearized equations at (p, xi): tangent directions of
    // the solution set, paired with their generator variations.
    Eigen::MatrixXd jac(2 * n, 3 * n);
    jac.leftCols(2 * n) = sys.linearization(cur.point, cur.generator.coords);
    jac.rightCols(n) = -sys.eval(cur.point).generator;
    const Subspace kernel = null_space(jac);

    // Project the hint into the kernel's phase part.
    Eigen::VectorXd best = Eigen::VectorXd::Zero(3 * n);
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(3 * n);
    padded.head(2 * n) = hint;
    best = kernel.project(padded);
    if (best.head(2 * n).norm() < 1e-12) {
      result.status = BranchStatus::kCorrectorFailure;
      return result;
    }
    best *= step_size / best.head(2 * n).norm();

    const PhasePoint pred =
        sys.retract(cur.point, best.head(n), best.segment(n, n));
    const Eigen::VectorXd pred_xi = cur.generator.coords + best.tail(n);
    SolveOutcome corrected = solve_re(sys, pred, pred_xi, opts);
    if (!corrected.converged) {
      result.status = BranchStatus::kCorrectorFailure;
      return result;
    }
    if (!(corrected.re.fingerprint == cur.fingerprint)) {
      // Stratum crossings are reported, not silently refined away.
      result.status = BranchStatus::kFingerprintChange;
      return result;
    }
    hint = sys.displacement(cur.point, corrected.re.point);
    result.points.push_back(std::move(corrected.re));
  }
  return result;
}

std::vector<RelativeEquilibrium> multistart_solve(
    const CotangentGroupSystem& sys, int starts, std::uint64_t seed,
    double momentum_scale, const SolveOptions& opts) {
  const int n = sys.algebra().dim();
  std::mt19937_64 rng(seed);
  std::vector<RelativeEquilibrium> found;
  for (int s = 0; s < starts; ++s) {
    PhasePoint p = sys.point_at_identity(momentum_scale * random_normal(n, rng));
    p = sys.transform(p, random_normal(n, rng), 0.7);
    const EvalBundle b = sys.eval(p);
    const Eigen::VectorXd xi0 = b.ad_point * (sys.mass_inverse() * p.momentum);
    SolveOutcome out = solve_re(sys, p, xi0, opts);
    if (out.converged) found.push_back(std::move(out.re));
  }
  return found;
}

}  // namespace releq
