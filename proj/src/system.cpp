#include "releq/system.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>
#include <stdexcept>

namespace releq {

namespace {

Eigen::MatrixXd orthonormalized(const Eigen::MatrixXd& a) {
  // Polar projection onto the orthogonal group; keeps adjoint frames from
  // drifting over long products of exponentials.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

void check_spd(const Eigen::MatrixXd& m, const char* who) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(who) + ": mass matrix not square");
  if ((m - m.transpose()).norm() > 1e-12 * (1.0 + m.norm()))
    throw std::invalid_argument(std::string(who) + ": mass matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument(std::string(who) + ": mass matrix not positive definite");
}

}  // namespace

CotangentGroupSystem::CotangentGroupSystem(LieAlgebra algebra,
                                           Eigen::MatrixXd mass_matrix)
    : algebra_(std::move(algebra)), mass_(std::move(mass_matrix)) {
  if (mass_.rows() != algebra_.dim())
    throw std::invalid_argument(
        "CotangentGroupSystem: mass matrix dimension mismatch");
  check_spd(mass_, "CotangentGroupSystem");
  mass_inv_ = mass_.inverse();
}

PhasePoint CotangentGroupSystem::point_at_identity(
    const Eigen::VectorXd& momentum) const {
  const int n = algebra_.dim();
  if (momentum.size() != n)
    throw std::invalid_argument("point_at_identity: momentum dimension mismatch");
  return PhasePoint{Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n),
                    momentum};
}

Eigen::MatrixXd CotangentGroupSystem::ad_at(const PhasePoint& p) const {
  if (p.group.norm() > chart_radius())
    throw std::domain_error("CotangentGroupSystem: point outside chart radius");
  if (p.group.norm() == 0.0) return p.frame;
  return p.frame * algebra_.ad_matrix(p.group).exp();
}

EvalBundle CotangentGroupSystem::eval(const PhasePoint& p) const {
  const int n = algebra_.dim();
  const Eigen::MatrixXd a = ad_at(p);
  const Eigen::VectorXd& m = p.momentum;
  const Eigen::VectorXd omega_body = mass_inv_ * m;

  EvalBundle out;
  out.ad_point = a;
  out.H = 0.5 * m.dot(omega_body);

  out.dH = Eigen::VectorXd::Zero(2 * n);
  out.dH.tail(n) = omega_body;

  // Euler-Arnold form: the momentum slot evolves by -[Omega, m].
  out.X_H = Eigen::VectorXd::Zero(2 * n);
  out.X_H.head(n) = omega_body;
  out.X_H.tail(n) = -algebra_.ad_matrix(omega_body) * m;

  // Spatial momentum: adjoint frames are orthogonal, so the inverse
  // transpose of Ad is Ad itself.
  out.J = a * m;

  out.dJ.resize(n, 2 * n);
  out.dJ.leftCols(n) = a * algebra_.coad_by_generator(m);
  out.dJ.rightCols(n) = a;

  // omega((eta1,nu1),(eta2,nu2)) = nu2.eta1 - nu1.eta2 + <m,[eta1,eta2]>.
  out.omega.setZero(2 * n, 2 * n);
  out.omega.topLeftCorner(n, n) = algebra_.coad_by_generator(m);
  out.omega.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  out.omega.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);

  out.generator.setZero(2 * n, n);
  out.generator.topRows(n) = a.transpose();
  return out;
}

Eigen::MatrixXd CotangentGroupSystem::linearization(
    const PhasePoint& p, const Eigen::VectorXd& xi) const {
  const int n = algebra_.dim();
  if (xi.size() != n)
    throw std::invalid_argument("linearization: generator dimension mismatch");
  const Eigen::MatrixXd a = ad_at(p);
  const Eigen::VectorXd body_xi = a.transpose() * xi;
  const Eigen::VectorXd omega_body = mass_inv_ * p.momentum;

  Eigen::MatrixXd lin = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  lin.topLeftCorner(n, n) = -algebra_.ad_matrix(body_xi);
  lin.topRightCorner(n, n) = mass_inv_;
  lin.bottomRightCorner(n, n) =
      algebra_.ad_matrix(p.momentum) * mass_inv_ - algebra_.ad_matrix(omega_body);
  return lin;
}

PhasePoint CotangentGroupSystem::retract(const PhasePoint& p,
                                         const Eigen::VectorXd& eta,
                                         const Eigen::VectorXd& nu) const {
  const Eigen::MatrixXd a = ad_at(p);
  PhasePoint out;
  out.frame = orthonormalized(a * algebra_.ad_matrix(eta).exp());
  out.group = Eigen::VectorXd::Zero(algebra_.dim());
  out.momentum = p.momentum + nu;
  return out;
}

PhasePoint CotangentGroupSystem::recenter(const PhasePoint& p) const {
  PhasePoint out;
  out.frame = orthonormalized(ad_at(p));
  out.group = Eigen::VectorXd::Zero(algebra_.dim());
  out.momentum = p.momentum;
  return out;
}

PhasePoint CotangentGroupSystem::transform(const PhasePoint& p,
                                           const Eigen::VectorXd& x,
                                           double t) const {
  PhasePoint out = p;
  out.frame = orthonormalized(group_adjoint(algebra_, x, t) * p.frame);
  return out;
}

Eigen::VectorXd CotangentGroupSystem::displacement(const PhasePoint& a,
                                                   const PhasePoint& b) const {
  const int n = algebra_.dim();
  const Eigen::MatrixXd rel = ad_at(a).transpose() * ad_at(b);
  const Eigen::MatrixXd log_rel = rel.log();
  // Recover the algebra element from its adjoint matrix by least squares
  // over the basis expansion (exact for semisimple factors; torus factors
  // have trivial adjoint and contribute nothing to attitude displacement).
  Eigen::MatrixXd basis_ads(n * n, n);
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXd adj = algebra_.ad_matrix(Eigen::VectorXd::Unit(n, j));
    basis_ads.col(j) = Eigen::Map<Eigen::VectorXd>(adj.data(), n * n);
  }
  Eigen::MatrixXd rhs_mat = log_rel;
  Eigen::VectorXd rhs = Eigen::Map<Eigen::VectorXd>(rhs_mat.data(), n * n);
  const Eigen::VectorXd eta =
      basis_ads.colPivHouseholderQr().solve(rhs);

  Eigen::VectorXd d(2 * n);
  d.head(n) = eta;
  d.tail(n) = b.momentum - a.momentum;
  return d;
}

CotangentGroupSystem make_rigid_body(double i1, double i2, double i3) {
  Eigen::MatrixXd inertia = Eigen::Vector3d(i1, i2, i3).asDiagonal();
  return CotangentGroupSystem(build_algebra("so(3)"), inertia);
}

CotangentGroupSystem make_rigid_body_rotors(double coupling,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = normal(rng);

  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(6, 6);
  mass.topLeftCorner(3, 3) = Eigen::Vector3d(2.0, 3.0, 4.0).asDiagonal();
  mass.topRightCorner(3, 3) = coupling * r;
  mass.bottomLeftCorner(3, 3) = coupling * r.transpose();
  mass.bottomRightCorner(3, 3) = Eigen::Matrix3d::Identity();
  return CotangentGroupSystem(build_algebra("so(3)+torus(3)"), mass);
}

CotangentGroupSystem make_cotangent_group_system(const LieAlgebra& g,
                                                 Eigen::MatrixXd mass_matrix) {
  return CotangentGroupSystem(g, std::move(mass_matrix));
}

}  // namespace releq
