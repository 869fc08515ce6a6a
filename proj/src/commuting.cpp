#include "releq/commuting.hpp"

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

const LieAlgebra& algebra_of(const CommutingPair& pair) {
  if (pair.algebra == nullptr)
    throw std::invalid_argument("CommutingPair: missing algebra");
  return *pair.algebra;
}

// Gap-checked isotropy subalgebra; returns an empty optional-like flag via
// dim = -1 sentinel when any rank decision is ambiguous.
bool clean_isotropy(const CommutingPair& pair, Subspace* out) {
  const LieAlgebra& g = algebra_of(pair);
  const Eigen::MatrixXd smu = g.coad_by_generator(pair.mu.coords);
  const Eigen::MatrixXd sxi = g.ad_matrix(pair.xi.coords);
  const double fmu = tol::rank_rel * g.bracket_scale() * pair.mu.coords.norm();
  const double fxi = tol::rank_rel * g.bracket_scale() * pair.xi.coords.norm();
  if (rank_with_gap(smu, tol::rank_rel, fmu) < 0 ||
      rank_with_gap(sxi, tol::rank_rel, fxi) < 0)
    return false;
  Eigen::MatrixXd stacked(2 * g.dim(), g.dim());
  stacked << smu, sxi;
  if (rank_with_gap(stacked, tol::rank_rel, std::max(fmu, fxi)) < 0) return false;
  *out = null_space(stacked, tol::rank_rel, std::max(fmu, fxi));
  return true;
}

}  // namespace

double commuting_residual(const CommutingPair& pair) {
  const LieAlgebra& g = algebra_of(pair);
  return (g.coad_matrix(pair.xi.coords) * pair.mu.coords).norm();
}

bool verify_commuting(const CommutingPair& pair) {
  const double scale =
      1.0 + pair.mu.coords.norm() * pair.xi.coords.norm();
  return commuting_residual(pair) < tol::pair_rel * scale;
}

Subspace isotropy_subalgebra(const CommutingPair& pair) {
  const LieAlgebra& g = algebra_of(pair);
  Eigen::MatrixXd stacked(2 * g.dim(), g.dim());
  stacked << g.coad_by_generator(pair.mu.coords), g.ad_matrix(pair.xi.coords);
  const double floor = tol::rank_rel * g.bracket_scale() *
                       (pair.mu.coords.norm() + pair.xi.coords.norm());
  return null_space(stacked, tol::rank_rel, floor);
}

TypeFingerprint classify_pair(const CommutingPair& pair) {
  if (!verify_commuting(pair))
    throw std::invalid_argument("classify_pair: pair is not commuting");
  const LieAlgebra& g = algebra_of(pair);
  const Subspace k = isotropy_subalgebra(pair);
  TypeFingerprint fp;
  fp.dim_k = k.dim();
  fp.dim_z = center_of(g, k).dim();
  fp.rank_k = rank_of(g, k);
  fp.dim_derived = derived_dim(g, k);
  return fp;
}

StratumInfo stratum_info(const LieAlgebra& g, const TypeFingerprint& fp) {
  if (fp.rank_k != g.rank())
    throw std::invalid_argument(
        "stratum_info: fingerprint rank differs from rank of g (not a "
        "commuting-pair type)");
  StratumInfo info;
  info.fingerprint = fp;
  info.dim_stratum = g.dim() + 2 * fp.dim_z - fp.dim_k;
  info.dim_quotient = 2 * fp.dim_z - fp.dim_k;
  info.transversal_possible = info.dim_quotient >= 0;
  return info;
}

Subspace stratum_tangent(const CommutingPair& pair) {
  if (!verify_commuting(pair))
    throw std::invalid_argument("stratum_tangent: pair is not commuting");
  const LieAlgebra& g = algebra_of(pair);
  const int n = g.dim();
  const Subspace k = isotropy_subalgebra(pair);
  const Subspace z = center_of(g, k);

  // Orbit directions (coad_eta mu, [eta, xi]) plus the fixed-space
  // directions z* + z of the slice model.
  Eigen::MatrixXd gens(2 * n, n + 2 * z.dim());
  gens.setZero();
  const Eigen::MatrixXd coad_cols = g.coad_by_generator(pair.mu.coords);
  for (int j = 0; j < n; ++j) {
    gens.col(j).head(n) = coad_cols.col(j);
    gens.col(j).tail(n) =
        g.ad_matrix(Eigen::VectorXd::Unit(n, j)) * pair.xi.coords;
  }
  for (int j = 0; j < z.dim(); ++j) {
    gens.col(n + j).head(n) = z.basis().col(j);
    gens.col(n + z.dim() + j).tail(n) = z.basis().col(j);
  }
  // Columns are directions; equalize their scales so the rank decision does
  // not depend on |(mu, xi)|. Columns that are roundoff shadows of exact
  // zeros stay tiny and fall below the absolute floor.
  const double noise = tol::rank_rel * g.bracket_scale() *
                       (pair.mu.coords.norm() + pair.xi.coords.norm());
  for (int j = 0; j < gens.cols(); ++j) {
    const double len = gens.col(j).norm();
    if (len > noise) gens.col(j) /= len;
  }
  return Subspace::span_of(gens, tol::rank_rel, tol::rank_rel);
}

SigmaSplit split_sigma(const LieAlgebra& g, const Subspace& k) {
  if (!is_subalgebra(g, k))
    throw std::invalid_argument("split_sigma: k is not a subalgebra");
  SigmaSplit split;
  split.z_part = center_of(g, k);
  if (split.z_part.dim() == 0) {
    split.l_part = k;
    return split;
  }
  // l = orthogonal complement of z within k (invariant inner product).
  const Eigen::MatrixXd zb = split.z_part.basis();
  Eigen::MatrixXd projected =
      k.basis() - zb * (zb.transpose() * k.basis());
  split.l_part = Subspace::span_of(projected);
  return split;
}

std::vector<CommutingPair> sample_pairs(const LieAlgebra& g,
                                        SampleStrategy strategy, int n,
                                        std::uint64_t seed,
                                        const Subspace* through) {
  if (n < 1) throw std::invalid_argument("sample_pairs: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<CommutingPair> out;
  out.reserve(n);

  const int d = g.dim();
  switch (strategy) {
    case SampleStrategy::kOrigin: {
      for (int i = 0; i < n; ++i)
        out.push_back({CoVector{Eigen::VectorXd::Zero(d)},
                       AlgVector{Eigen::VectorXd::Zero(d)}, &g});
      break;
    }
    case SampleStrategy::kGeneric: {
      while (static_cast<int>(out.size()) < n) {
        const Eigen::VectorXd xi = random_normal(d, rng);
        const Eigen::MatrixXd ad_xi = g.ad_matrix(xi);
        if (rank_with_gap(ad_xi) < 0) continue;  // redraw degenerate xi
        const Subspace stab = null_space(ad_xi);
        // The dual of the stabilizer: same coordinates under the
        // orthonormal-basis identification of g with g*.
        const Eigen::VectorXd mu = stab.basis() * random_normal(stab.dim(), rng);
        CommutingPair pair{CoVector{mu}, AlgVector{xi}, &g};
        Subspace k;
        if (!clean_isotropy(pair, &k)) continue;
        out.push_back(std::move(pair));
      }
      break;
    }
    case SampleStrategy::kThroughSubalgebra: {
      if (through == nullptr)
        throw std::invalid_argument(
            "sample_pairs: through_subalgebra needs a subalgebra");
      // A centerless subalgebra admits only the origin through this route.
      const Subspace z = center_of(g, *through);
      while (static_cast<int>(out.size()) < n) {
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(d);
        Eigen::VectorXd xi = Eigen::VectorXd::Zero(d);
        if (z.dim() > 0) {
          mu = z.basis() * random_normal(z.dim(), rng);
          xi = z.basis() * random_normal(z.dim(), rng);
        }
        const Eigen::VectorXd x = random_normal(d, rng);
        CommutingPair pair{conjugate(g, {x}, 1.0, CoVector{mu}),
                           conjugate(g, {x}, 1.0, AlgVector{xi}), &g};
        Subspace k;
        if (!clean_isotropy(pair, &k)) continue;
        out.push_back(std::move(pair));
      }
      break;
    }
    default:
      throw std::invalid_argument("sample_pairs: invalid strategy");
  }
  return out;
}

LocalModelReport local_model_check(const CommutingPair& pair, int n,
                                   std::uint64_t seed,
                                   double residual_threshold) {
  if (!verify_commuting(pair))
    throw std::invalid_argument("local_model_check: pair is not commuting");
  const LieAlgebra& g = algebra_of(pair);
  const int d = g.dim();
  const Subspace k = isotropy_subalgebra(pair);

  const double pair_norm = std::hypot(pair.mu.coords.norm(), pair.xi.coords.norm());
  const double radius = 0.1 * (1.0 + pair_norm);
  // One scale for both membership tests so that borderline draws cannot
  // flip one verdict without the other.
  const double scale = 1.0 + pair_norm + radius;
  const double cut = residual_threshold * scale;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  LocalModelReport report;
  report.samples = n;

  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd nu = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(d);
    if (k.dim() > 0) {
      const int mode = i % 4;
      if (mode == 3) {
        // Commuting draw inside k: eta in k, nu from the centralizer of
        // eta within k, so both memberships should be true.
        eta = k.basis() * random_normal(k.dim(), rng);
        const Subspace cent = null_space(g.ad_matrix(eta) * k.basis());
        if (cent.dim() > 0)
          nu = k.basis() * (cent.basis() * random_normal(cent.dim(), rng));
      } else {
        nu = k.basis() * random_normal(k.dim(), rng);
        eta = k.basis() * random_normal(k.dim(), rng);
      }
      Eigen::VectorXd both(2 * d);
      both << nu, eta;
      const double len = both.norm();
      if (len > 0.0) {
        const double target = radius * std::sqrt(unif(rng));
        nu *= target / len;
        eta *= target / len;
      }
    }

    const Eigen::VectorXd shifted_mu = pair.mu.coords + nu;
    const Eigen::VectorXd shifted_xi = pair.xi.coords + eta;
    const double ambient =
        (g.coad_matrix(shifted_xi) * shifted_mu).norm();
    const double slice = (g.coad_matrix(eta) * nu).norm();

    const bool in_ambient = ambient < cut;
    const bool in_slice = slice < cut;
    if (in_ambient == in_slice)
      ++report.agreements;
    else
      ++report.disagreements;
    if (in_ambient && in_slice) {
      ++report.members;
      report.max_residual_in = std::max(report.max_residual_in, ambient);
    }
    report.max_residual_gap =
        std::max(report.max_residual_gap, std::abs(ambient - slice));
  }
  return report;
}

}  // namespace releq
