#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "releq/lie_algebra.hpp"

using namespace releq;

namespace {

Eigen::VectorXd rand_vec(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

// Independent oracle for so(3): the hat map into 3x3 antisymmetric
// matrices and the plain matrix commutator.
Eigen::Matrix3d hat(const Eigen::Vector3d& x) {
  Eigen::Matrix3d m;
  m << 0, -x(2), x(1), x(2), 0, -x(0), -x(1), x(0), 0;
  return m;
}

Eigen::Vector3d unhat(const Eigen::Matrix3d& m) {
  return Eigen::Vector3d(m(2, 1), m(0, 2), m(1, 0));
}

Eigen::Vector3d e(int i) { return Eigen::Vector3d::Unit(i); }

}  // namespace

TEST_CASE("so(3) construction: dim, rank, Jacobi") {
  LieAlgebra g = build_algebra("so(3)");
  CHECK(g.dim() == 3);
  CHECK(g.rank() == 1);
  CHECK(g.jacobi_residual() < 1e-12);
}

TEST_CASE("so(3) bracket matches the matrix-commutator oracle") {
  LieAlgebra g = build_algebra("so(3)");
  AlgVector e1{e(0)}, e2{e(1)};
  const Eigen::VectorXd b = bracket(g, e1, e2).coords;
  CHECK((b - e(2)).norm() < 1e-14);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector3d x = rand_vec(3, rng), y = rand_vec(3, rng);
    const Eigen::Vector3d expected = unhat(hat(x) * hat(y) - hat(y) * hat(x));
    const Eigen::VectorXd got = bracket(g, {x}, {y}).coords;
    CHECK((got - expected).norm() < 1e-12 * (1.0 + expected.norm()));
    CHECK(bracket(g, {x}, {x}).coords.norm() < 1e-14);
  }
}

TEST_CASE("torus brackets vanish") {
  LieAlgebra t2 = build_algebra("torus(2)");
  CHECK(t2.rank() == 2);
  CHECK(bracket(t2, {Eigen::Vector2d(1, 0)}, {Eigen::Vector2d(0, 1)})
            .coords.norm() == 0.0);
}

TEST_CASE("coad on so(3) is the cross product") {
  LieAlgebra g = build_algebra("so(3)");
  // Oracle: expand the defining pairing <coad_xi mu, eta> = -<mu,[xi,eta]>
  // over the basis.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector3d xi = rand_vec(3, rng), mu = rand_vec(3, rng);
    Eigen::Vector3d expected;
    for (int k = 0; k < 3; ++k) {
      const Eigen::VectorXd br = bracket(g, {xi}, {AlgVector{e(k)}.coords}).coords;
      expected(k) = -mu.dot(br);
    }
    const Eigen::VectorXd got = coad(g, {xi}, {mu}).coords;
    CHECK((got - expected).norm() < 1e-13 * (1.0 + expected.norm()));
    // Standard identification: coad_xi mu = xi x mu.
    CHECK((got - xi.cross(mu)).norm() < 1e-13 * (1.0 + mu.norm()));
  }
  CHECK((coad(g, {e(0)}, {e(1)}).coords - e(2)).norm() < 1e-14);
  CHECK(coad(g, {e(0)}, {CoVector{2.5 * e(0)}.coords}).coords.norm() < 1e-14);
}

TEST_CASE("coad pairing contract over random triples") {
  for (const char* name : {"so(3)", "su(3)", "so(4)", "so(3)+torus(3)"}) {
    LieAlgebra g = build_algebra(name);
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 250; ++trial) {
      Eigen::VectorXd xi = rand_vec(g.dim(), rng), mu = rand_vec(g.dim(), rng),
                      eta = rand_vec(g.dim(), rng);
      const double lhs = coad(g, {xi}, {mu}).coords.dot(eta);
      const double rhs = -mu.dot(bracket(g, {xi}, {eta}).coords);
      CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("stabilizers: dimensions and rank law") {
  LieAlgebra so3 = build_algebra("so(3)");
  Subspace s = stabilizer(so3, AlgVector{e(0)});
  CHECK(s.dim() == 1);
  CHECK(s.contains_vector(e(0)));

  CHECK(stabilizer(so3, AlgVector{Eigen::Vector3d::Zero()}).dim() == 3);

  LieAlgebra su3 = build_algebra("su(3)");
  CHECK(su3.dim() == 8);
  CHECK(su3.rank() == 2);
  std::mt19937_64 rng(31);
  int generic_hits = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXd xi = rand_vec(su3.dim(), rng);
    const int d = stabilizer(su3, AlgVector{xi}).dim();
    CHECK(d >= su3.rank());
    if (d == su3.rank()) ++generic_hits;
  }
  CHECK(generic_hits >= 950);
}

TEST_CASE("stabilizer contains the element itself") {
  for (const char* name : {"so(3)", "so(4)", "su(2)", "so(3)+torus(3)"}) {
    LieAlgebra g = build_algebra(name);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::VectorXd xi = rand_vec(g.dim(), rng);
      CHECK(stabilizer(g, AlgVector{xi}).contains_vector(xi));
    }
  }
}

TEST_CASE("direct sums: dimension and rank add") {
  LieAlgebra g = build_algebra("so(3)+torus(3)");
  CHECK(g.dim() == 6);
  CHECK(g.rank() == 4);
  CHECK(g.factors().size() == 2);

  // Cross-check against the generic-centralizer oracle.
  std::mt19937_64 rng(41);
  int best = g.dim();
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::VectorXd x = rand_vec(g.dim(), rng);
    best = std::min(best, stabilizer(g, AlgVector{x}).dim());
  }
  CHECK(best == 4);

  LieAlgebra so4 = build_algebra("so(4)");
  CHECK(so4.dim() == 6);
  CHECK(so4.rank() == 2);
}

TEST_CASE("so(2) is the one-dimensional abelian algebra") {
  LieAlgebra g = build_algebra("so(2)");
  CHECK(g.dim() == 1);
  CHECK(g.rank() == 1);
  CHECK(g.factors().front().abelian);
}

TEST_CASE("build_algebra rejects bad descriptors") {
  CHECK_THROWS(build_algebra("sp(4)"));
  CHECK_THROWS(build_algebra("torus(0)"));
  CHECK_THROWS(build_algebra("so(5)"));
  CHECK_THROWS(build_algebra("su(4)"));
  CHECK_THROWS(build_algebra(""));
  CHECK_THROWS(build_algebra("so(3)+"));
}

TEST_CASE("center of subalgebras") {
  LieAlgebra so3 = build_algebra("so(3)");
  CHECK(center_of(so3, Subspace::full(3)).dim() == 0);

  LieAlgebra g = build_algebra("so(3)+torus(3)");
  // k = so(3) + first torus direction inside so(3)+torus(3).
  Eigen::MatrixXd kb = Eigen::MatrixXd::Zero(6, 4);
  kb(0, 0) = kb(1, 1) = kb(2, 2) = kb(3, 3) = 1.0;
  Subspace k = Subspace::span_of(kb);
  Subspace z = center_of(g, k);
  CHECK(z.dim() == 1);
  CHECK(z.contains_vector(kb.col(3)));

  // An abelian subalgebra is its own center.
  Subspace cartan = Subspace::span_of(kb.col(0));
  CHECK(center_of(so3, Subspace::span_of(Eigen::Vector3d::Unit(0).eval()))
            .dim() == 1);
  (void)cartan;

  // Not a subalgebra: span{e1, e2} in so(3).
  Eigen::MatrixXd bad(3, 2);
  bad.col(0) = e(0);
  bad.col(1) = e(1);
  CHECK_THROWS(center_of(so3, Subspace::span_of(bad)));
}

TEST_CASE("rank_of on subalgebras") {
  LieAlgebra so3 = build_algebra("so(3)");
  CHECK(rank_of(so3, Subspace::full(3)) == 1);
  LieAlgebra t3 = build_algebra("torus(3)");
  CHECK(rank_of(t3, Subspace::full(3)) == 3);
  LieAlgebra su3 = build_algebra("su(3)");
  CHECK(rank_of(su3, Subspace::full(8)) == 2);
}

TEST_CASE("derived dimension") {
  LieAlgebra so3 = build_algebra("so(3)");
  CHECK(derived_dim(so3, Subspace::full(3)) == 3);
  CHECK(derived_dim(so3, Subspace::span_of(Eigen::Vector3d::Unit(0).eval())) == 0);
}

TEST_CASE("conjugation: rotation oracle, isometry, bracket preservation") {
  LieAlgebra g = build_algebra("so(3)");
  // exp((pi/2) ad_{e3}) rotates e1 to e2.
  AlgVector rotated = conjugate(g, {e(2)}, M_PI / 2.0, AlgVector{e(0)});
  CHECK((rotated.coords - e(1)).norm() < 1e-12);

  // t = 0 leaves the target unchanged.
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x = rand_vec(3, rng), y = rand_vec(3, rng), z = rand_vec(3, rng);
    CHECK((conjugate(g, {x}, 0.0, AlgVector{y}).coords - y).norm() == 0.0);

    const double t = 0.7;
    AlgVector ay = conjugate(g, {x}, t, AlgVector{y});
    AlgVector az = conjugate(g, {x}, t, AlgVector{z});
    // Isometry for the invariant inner product.
    CHECK(ay.coords.norm() == doctest::Approx(y.norm()).epsilon(1e-12));
    // Automorphism property.
    AlgVector lhs = conjugate(g, {x}, t, bracket(g, {y}, {z}));
    AlgVector rhs = bracket(g, ay, az);
    CHECK((lhs.coords - rhs.coords).norm() < 1e-10 * (1.0 + rhs.coords.norm()));
    // Stabilizer dimension is preserved.
    CHECK(stabilizer(g, ay).dim() == stabilizer(g, AlgVector{y}).dim());
  }
}

TEST_CASE("covector transport is dual to the adjoint transport") {
  for (const char* name : {"so(3)", "su(3)", "so(3)+torus(3)"}) {
    LieAlgebra g = build_algebra(name);
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
      Eigen::VectorXd x = rand_vec(g.dim(), rng), mu = rand_vec(g.dim(), rng),
                      eta = rand_vec(g.dim(), rng);
      const double t = 0.4;
      // <Coad mu, Ad eta> = <mu, eta>.
      const double lhs = conjugate(g, {x}, t, CoVector{mu})
                             .coords.dot(conjugate(g, {x}, t, AlgVector{eta}).coords);
      CHECK(lhs == doctest::Approx(mu.dot(eta)).epsilon(1e-10));
    }
  }
}

TEST_CASE("dualize is an exact involution") {
  LieAlgebra g = build_algebra("su(3)");
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd x = rand_vec(g.dim(), rng);
    AlgVector back = dualize(g, dualize(g, AlgVector{x}));
    CHECK((back.coords - x).norm() == 0.0);
  }
}

TEST_CASE("invariant inner product is Ad-invariant") {
  for (const char* name : {"so(4)", "su(3)"}) {
    LieAlgebra g = build_algebra(name);
    // <[x,y],z> + <y,[x,z]> = 0 over all basis triples.
    double worst = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j)
        for (int k = 0; k < g.dim(); ++k)
          worst = std::max(worst, std::abs(g.structure_constant(i, j, k) +
                                           g.structure_constant(i, k, j)));
    CHECK(worst < 1e-10);
  }
}
