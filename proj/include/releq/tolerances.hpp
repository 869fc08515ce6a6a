#ifndef RELEQ_TOLERANCES_HPP
#define RELEQ_TOLERANCES_HPP

// One knob per class of test, shared across the library so that verdicts
// produced by different routes are mutually consistent.

namespace releq {
namespace tol {

// Structure-constant identities (Jacobi, invariance, bracket closure).
inline constexpr double alg = 1e-10;

// Orthonormality / subspace membership residuals.
inline constexpr double sub = 1e-9;

// Relative singular-value threshold for numerical rank decisions.
inline constexpr double rank_rel = 1e-8;

// Relative tolerance for membership in the commuting-pair variety,
// scaled by (1 + |mu||xi|).
inline constexpr double pair_rel = 1e-9;

// Phase-space identities (omega-flat o X_H = dH, momentum equivariance).
inline constexpr double sys = 1e-8;

// Relative residual for accepting a relative equilibrium,
// scaled by (1 + |X_H|).
inline constexpr double re_rel = 1e-10;

// Normal-form residuals (block pattern, structure relations, D symmetry).
inline constexpr double nf = 1e-8;

// Sine of the largest principal angle admitted by subspace-containment
// verdicts (transversality checks).
inline constexpr double containment = 1e-6;

// Minimum spectral gap sigma_r / sigma_{r+1} demanded of a clean rank
// decision when sampling; draws violating it are retried.
inline constexpr double rank_gap = 1e4;

}  // namespace tol
}  // namespace releq

#endif
