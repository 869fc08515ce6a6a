#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "releq/commuting.hpp"

using namespace releq;

namespace {

Eigen::VectorXd unit(int n, int i) { return Eigen::VectorXd::Unit(n, i); }

CommutingPair make_pair(const LieAlgebra& g, const Eigen::VectorXd& mu,
                        const Eigen::VectorXd& xi) {
  return CommutingPair{CoVector{mu}, AlgVector{xi}, &g};
}

// Subalgebra k = so(3) + span{first torus direction} in so(3)+torus(3).
Subspace rotor_block_subalgebra() {
  Eigen::MatrixXd kb = Eigen::MatrixXd::Zero(6, 4);
  kb(0, 0) = kb(1, 1) = kb(2, 2) = kb(3, 3) = 1.0;
  return Subspace::span_of(kb);
}

}  // namespace

TEST_CASE("verify_commuting on so(3): cross-product oracle") {
  LieAlgebra g = build_algebra("so(3)");
  CHECK(verify_commuting(make_pair(g, unit(3, 0), unit(3, 0))));
  CHECK(!verify_commuting(make_pair(g, unit(3, 1), unit(3, 0))));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 50; ++t) {
    Eigen::Vector3d xi(normal(rng), normal(rng), normal(rng));
    CHECK(verify_commuting(make_pair(g, Eigen::VectorXd::Zero(3), xi)));
    Eigen::Vector3d mu(normal(rng), normal(rng), normal(rng));
    const bool expected = xi.cross(mu).norm() < 1e-9 * (1 + mu.norm() * xi.norm());
    CHECK(verify_commuting(make_pair(g, mu, xi)) == expected);
  }
}

TEST_CASE("classify_pair fingerprints") {
  LieAlgebra so3 = build_algebra("so(3)");
  CHECK(classify_pair(make_pair(so3, unit(3, 0), unit(3, 0))) ==
        TypeFingerprint{1, 1, 1, 0});
  CHECK(classify_pair(make_pair(so3, Eigen::VectorXd::Zero(3),
                                Eigen::VectorXd::Zero(3))) ==
        TypeFingerprint{3, 0, 1, 3});
  CHECK_THROWS(classify_pair(make_pair(so3, unit(3, 1), unit(3, 0))));

  LieAlgebra su3 = build_algebra("su(3)");
  auto pairs = sample_pairs(su3, SampleStrategy::kGeneric, 20, 77);
  for (const auto& p : pairs)
    CHECK(classify_pair(p) == TypeFingerprint{2, 2, 2, 0});

  LieAlgebra rotor = build_algebra("so(3)+torus(3)");
  CHECK(classify_pair(make_pair(rotor, Eigen::VectorXd::Zero(6),
                                Eigen::VectorXd::Zero(6))) ==
        TypeFingerprint{6, 3, 4, 3});
}

TEST_CASE("stratum_info dimensions") {
  LieAlgebra so3 = build_algebra("so(3)");
  StratumInfo axis = stratum_info(so3, TypeFingerprint{1, 1, 1, 0});
  CHECK(axis.dim_stratum == 4);
  CHECK(axis.dim_quotient == 1);
  CHECK(axis.transversal_possible);

  StratumInfo origin = stratum_info(so3, TypeFingerprint{3, 0, 1, 3});
  CHECK(origin.dim_stratum == 0);
  CHECK(origin.dim_quotient == -3);
  CHECK(!origin.transversal_possible);

  LieAlgebra rotor = build_algebra("so(3)+torus(3)");
  StratumInfo full = stratum_info(rotor, TypeFingerprint{6, 3, 4, 3});
  CHECK(full.dim_stratum == 6);
  CHECK(full.dim_quotient == 0);
  CHECK(full.transversal_possible);

  CHECK_THROWS(stratum_info(so3, TypeFingerprint{2, 1, 2, 0}));
}

TEST_CASE("stratum_tangent dimensions match the formula") {
  LieAlgebra so3 = build_algebra("so(3)");
  CHECK(stratum_tangent(make_pair(so3, unit(3, 0), unit(3, 0))).dim() == 4);
  CHECK(stratum_tangent(make_pair(so3, Eigen::VectorXd::Zero(3),
                                  Eigen::VectorXd::Zero(3))).dim() == 0);

  LieAlgebra su3 = build_algebra("su(3)");
  for (const auto& p : sample_pairs(su3, SampleStrategy::kGeneric, 10, 5))
    CHECK(stratum_tangent(p).dim() == 10);  // 8 + 4 - 2
}

TEST_CASE("sampled pairs satisfy the rank and abelian laws") {
  // rank k = rank g for every commuting pair, and k abelian iff
  // dim k = rank g.
  for (const char* name : {"so(3)", "su(3)", "so(4)", "so(3)+torus(3)"}) {
    LieAlgebra g = build_algebra(name);
    auto pairs = sample_pairs(g, SampleStrategy::kGeneric, 60, 11);
    auto more = sample_pairs(g, SampleStrategy::kOrigin, 2, 1);
    pairs.insert(pairs.end(), more.begin(), more.end());
    for (const auto& p : pairs) {
      const TypeFingerprint fp = classify_pair(p);
      CHECK(fp.rank_k == g.rank());
      CHECK((fp.dim_derived == 0) == (fp.dim_k == g.rank()));
      CHECK(fp.dim_z <= fp.dim_k);
      CHECK(fp.dim_derived <= fp.dim_k);
      const StratumInfo info = stratum_info(g, fp);
      CHECK(stratum_tangent(p).dim() == info.dim_stratum);
    }
  }
}

TEST_CASE("fingerprints are conjugation-invariant") {
  LieAlgebra g = build_algebra("so(3)+torus(3)");
  std::mt19937_64 rng(19);
  std::normal_distribution<double> normal;
  auto pairs = sample_pairs(g, SampleStrategy::kGeneric, 5, 21);
  Subspace block = rotor_block_subalgebra();
  auto special =
      sample_pairs(g, SampleStrategy::kThroughSubalgebra, 5, 22, &block);
  pairs.insert(pairs.end(), special.begin(), special.end());
  for (const auto& p : pairs) {
    const TypeFingerprint fp = classify_pair(p);
    for (int t = 0; t < 20; ++t) {
      Eigen::VectorXd x(g.dim());
      for (int i = 0; i < g.dim(); ++i) x(i) = normal(rng);
      CommutingPair moved{conjugate(g, {x}, 1.0, p.mu),
                          conjugate(g, {x}, 1.0, p.xi), &g};
      CHECK(verify_commuting(moved));
      CHECK(classify_pair(moved) == fp);
    }
  }
}

TEST_CASE("split_sigma") {
  LieAlgebra g = build_algebra("so(3)+torus(3)");
  Subspace k = rotor_block_subalgebra();
  SigmaSplit split = split_sigma(g, k);
  CHECK(split.l_part.dim() == 3);
  CHECK(split.z_part.dim() == 1);
  CHECK(split.l_part.dim() + split.z_part.dim() == k.dim());
  // [z, k] = 0.
  for (int i = 0; i < split.z_part.dim(); ++i)
    for (int j = 0; j < k.dim(); ++j)
      CHECK((g.ad_matrix(split.z_part.basis().col(i)) * k.basis().col(j))
                .norm() < tol::alg);
  // l stays inside k and is bracket-closed modulo z (k/z is so(3) here).
  for (int i = 0; i < split.l_part.dim(); ++i)
    CHECK(k.contains_vector(split.l_part.basis().col(i)));

  LieAlgebra so3 = build_algebra("so(3)");
  SigmaSplit simple = split_sigma(so3, Subspace::full(3));
  CHECK(simple.l_part.dim() == 3);
  CHECK(simple.z_part.dim() == 0);

  LieAlgebra t3 = build_algebra("torus(3)");
  SigmaSplit abelian = split_sigma(t3, Subspace::full(3));
  CHECK(abelian.l_part.dim() == 0);
  CHECK(abelian.z_part.dim() == 3);
}

TEST_CASE("sample_pairs: strategies, determinism, validity") {
  LieAlgebra so3 = build_algebra("so(3)");
  auto a = sample_pairs(so3, SampleStrategy::kGeneric, 100, 7);
  auto b = sample_pairs(so3, SampleStrategy::kGeneric, 100, 7);
  REQUIRE(a.size() == 100);
  int axis_type = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(verify_commuting(a[i]));
    CHECK((a[i].mu.coords - b[i].mu.coords).norm() == 0.0);
    CHECK((a[i].xi.coords - b[i].xi.coords).norm() == 0.0);
    if (classify_pair(a[i]) == TypeFingerprint{1, 1, 1, 0}) ++axis_type;
  }
  CHECK(axis_type >= 95);

  auto origin = sample_pairs(so3, SampleStrategy::kOrigin, 1, 0);
  CHECK(classify_pair(origin[0]).dim_k == so3.dim());

  CHECK_THROWS(sample_pairs(so3, SampleStrategy::kGeneric, 0, 1));
  CHECK_THROWS(
      sample_pairs(so3, SampleStrategy::kThroughSubalgebra, 1, 1, nullptr));
}

TEST_CASE("local model check: membership agreement on slices") {
  LieAlgebra so3 = build_algebra("so(3)");
  CHECK_THROWS(local_model_check(make_pair(so3, unit(3, 1), unit(3, 0)), 10, 1));
  // Abelian isotropy: every slice perturbation stays commuting.
  auto rep = local_model_check(make_pair(so3, unit(3, 0), unit(3, 0)), 500, 3);
  CHECK(rep.disagreements == 0);
  CHECK(rep.members == rep.samples);
  CHECK(rep.max_residual_in < 1e-10);

  // Nonabelian isotropy (k = g at the origin): generic slice draws leave
  // both varieties together, commuting draws stay in both.
  auto rep0 = local_model_check(
      make_pair(so3, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)), 500, 4);
  CHECK(rep0.disagreements == 0);
  CHECK(rep0.members > 0);
  CHECK(rep0.members < rep0.samples);

  LieAlgebra rotor = build_algebra("so(3)+torus(3)");
  auto rep1 = local_model_check(
      make_pair(rotor, Eigen::VectorXd::Zero(6), Eigen::VectorXd::Zero(6)), 500, 5);
  CHECK(rep1.disagreements == 0);
}
