#ifndef RELEQ_COMMUTING_HPP
#define RELEQ_COMMUTING_HPP

#include <cstdint>
#include <vector>

#include "releq/lie_algebra.hpp"

namespace releq {

// The commuting-pair variety of g is the set of (mu, xi) in g* + g with
// coad_xi mu = 0. It is invariant under the product of the coadjoint and
// adjoint actions, and its points are classified here by a numerical
// fingerprint of the isotropy subalgebra k = g_mu cap g_xi. Pairs in
// g* + g are flattened to R^{2n} in the order [mu; xi].

struct CommutingPair {
  CoVector mu;
  AlgVector xi;
  const LieAlgebra* algebra = nullptr;
};

/// Numerical invariants identifying the orbit type of a commuting pair.
struct TypeFingerprint {
  int dim_k = 0;        // dim (g_mu cap g_xi)
  int dim_z = 0;        // dim of the center of k
  int rank_k = 0;       // rank of k
  int dim_derived = 0;  // dim [k, k]

  friend bool operator==(const TypeFingerprint&, const TypeFingerprint&) = default;
};

struct StratumInfo {
  TypeFingerprint fingerprint;
  int dim_stratum = 0;    // dim G + 2 dim z - dim k
  int dim_quotient = 0;   // 2 dim z - dim k
  bool transversal_possible = false;  // dim_quotient >= 0
};

/// ||coad_xi mu|| < tol::pair_rel * (1 + |mu||xi|).
bool verify_commuting(const CommutingPair& pair);

/// Residual of the membership test (for reporting).
double commuting_residual(const CommutingPair& pair);

/// Isotropy subalgebra k = stabilizer(mu) cap stabilizer(xi).
Subspace isotropy_subalgebra(const CommutingPair& pair);

/// Fingerprint of the pair's orbit type. Throws if the pair does not
/// satisfy verify_commuting.
TypeFingerprint classify_pair(const CommutingPair& pair);

/// Stratum dimensions for a fingerprint. Throws unless fp.rank_k equals
/// the rank of g (every commuting-pair isotropy contains a maximal torus).
StratumInfo stratum_info(const LieAlgebra& g, const TypeFingerprint& fp);

/// Tangent space at `pair` of its orbit-type stratum inside g* + g:
/// the orbit directions {(coad_eta mu, [eta, xi])} together with z* + z,
/// z the center of the isotropy subalgebra. Dimension must equal
/// stratum_info(...).dim_stratum.
Subspace stratum_tangent(const CommutingPair& pair);

/// Splits a subalgebra k as l + z with z = center(k) and l the orthogonal
/// complement of z inside k (so l is isomorphic to k/z as a K-space).
struct SigmaSplit {
  Subspace l_part;
  Subspace z_part;
};
SigmaSplit split_sigma(const LieAlgebra& g, const Subspace& k);

enum class SampleStrategy { kGeneric, kThroughSubalgebra, kOrigin };

/// Draws n pairs in the commuting variety. kGeneric draws xi at random
/// and mu from the dual of stabilizer(xi); kThroughSubalgebra draws both
/// from the center of `through` and conjugates by a random group element;
/// kOrigin returns (0, 0). Deterministic for a fixed seed; near-degenerate
/// rank decisions are redrawn.
std::vector<CommutingPair> sample_pairs(const LieAlgebra& g,
                                        SampleStrategy strategy, int n,
                                        std::uint64_t seed,
                                        const Subspace* through = nullptr);

/// Report of the slice local-model check at a base pair: perturbations
/// (nu, eta) drawn in k* + k within radius 0.1 (1 + |(mu,xi)|) must land in
/// the ambient commuting variety exactly when (nu, eta) commutes inside k.
struct LocalModelReport {
  int samples = 0;
  int agreements = 0;
  int disagreements = 0;
  int members = 0;            // perturbations landing inside both varieties
  double max_residual_in = 0.0;   // largest ambient residual among members
  double max_residual_gap = 0.0;  // largest |ambient - slice| residual gap
};
LocalModelReport local_model_check(const CommutingPair& pair, int n,
                                   std::uint64_t seed,
                                   double residual_threshold = 1e-9);

}  // namespace releq

#endif
