#include "releq/lie_algebra.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cctype>
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

// Structure constants of so(3) in the standard basis:
// [e_i, e_j] = eps_{ijk} e_k. -Killing/2 is already the identity here.
std::vector<Eigen::MatrixXd> so3_ad() {
  std::vector<Eigen::MatrixXd> ad(3, Eigen::MatrixXd::Zero(3, 3));
  const int eps[3][3][3] = {{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
                            {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
                            {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) ad[i](k, j) = eps[i][j][k];
  return ad;
}

// Structure constants from an explicit anti-Hermitian matrix basis,
// orthonormalized for <X,Y> = -Re tr(XY), then rescaled so that
// -Killing/2 becomes the identity.
std::vector<Eigen::MatrixXd> ad_from_matrix_basis(
    std::vector<Eigen::MatrixXcd> basis) {
  const int n = static_cast<int>(basis.size());
  for (auto& x : basis) {
    const double nrm = std::sqrt(-(x * x).trace().real());
    x /= nrm;
  }
  std::vector<Eigen::MatrixXd> ad(n, Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::MatrixXcd br = basis[i] * basis[j] - basis[j] * basis[i];
      for (int k = 0; k < n; ++k) ad[i](k, j) = -(br * basis[k]).trace().real();
    }
  // Killing form in this basis; compact semisimple => -B = 2c * I.
  Eigen::MatrixXd killing(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) killing(i, j) = (ad[i] * ad[j]).trace();
  const double c = -killing(0, 0) / 2.0;
  if (c <= 0.0 ||
      (killing + 2.0 * c * Eigen::MatrixXd::Identity(n, n)).norm() > 1e-8 * c)
    throw std::runtime_error("ad_from_matrix_basis: Killing form not scalar");
  // Basis rescale e -> e / sqrt(c) divides the constants by sqrt(c).
  const double s = 1.0 / std::sqrt(c);
  for (auto& a : ad) a *= s;
  return ad;
}

std::vector<Eigen::MatrixXcd> so_n_basis(int n) {
  std::vector<Eigen::MatrixXcd> basis;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, n);
      x(a, b) = 1.0;
      x(b, a) = -1.0;
      basis.push_back(x);
    }
  return basis;
}

std::vector<Eigen::MatrixXcd> su_n_basis(int n) {
  using cd = std::complex<double>;
  std::vector<Eigen::MatrixXcd> basis;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, n);
      x(a, b) = 1.0;
      x(b, a) = -1.0;
      basis.push_back(x);
      Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
      y(a, b) = cd(0.0, 1.0);
      y(b, a) = cd(0.0, 1.0);
      basis.push_back(y);
    }
  for (int k = 1; k < n; ++k) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < k; ++i) d(i, i) = cd(0.0, 1.0);
    d(k, k) = cd(0.0, -static_cast<double>(k));
    basis.push_back(d);
  }
  return basis;
}

LieAlgebra simple_factor(const std::string& kind, int n) {
  if (kind == "so") {
    if (n < 2 || n > 4)
      throw std::invalid_argument("build_algebra: so(n) supports 2 <= n <= 4");
    if (n == 2) {
      std::vector<Eigen::MatrixXd> ad(1, Eigen::MatrixXd::Zero(1, 1));
      return LieAlgebra("so(2)", std::move(ad),
                        {AlgebraFactor{"so(2)", 0, 1, true}});
    }
    auto ad = (n == 3) ? so3_ad() : ad_from_matrix_basis(so_n_basis(n));
    const int d = static_cast<int>(ad.size());
    const std::string nm = "so(" + std::to_string(n) + ")";
    return LieAlgebra(nm, std::move(ad), {AlgebraFactor{nm, 0, d, false}});
  }
  if (kind == "su") {
    if (n < 2 || n > 3)
      throw std::invalid_argument("build_algebra: su(n) supports 2 <= n <= 3");
    auto ad = ad_from_matrix_basis(su_n_basis(n));
    const int d = static_cast<int>(ad.size());
    const std::string nm = "su(" + std::to_string(n) + ")";
    return LieAlgebra(nm, std::move(ad), {AlgebraFactor{nm, 0, d, false}});
  }
  if (kind == "torus") {
    if (n <= 0)
      throw std::invalid_argument("build_algebra: torus(k) needs k >= 1");
    std::vector<Eigen::MatrixXd> ad(n, Eigen::MatrixXd::Zero(n, n));
    const std::string nm = "torus(" + std::to_string(n) + ")";
    return LieAlgebra(nm, std::move(ad), {AlgebraFactor{nm, 0, n, true}});
  }
  throw std::invalid_argument("build_algebra: unsupported factor '" + kind + "'");
}

}  // namespace

LieAlgebra::LieAlgebra(std::string name, std::vector<Eigen::MatrixXd> ad_generators,
                       std::vector<AlgebraFactor> factors)
    : name_(std::move(name)),
      dim_(static_cast<int>(ad_generators.size())),
      ad_(std::move(ad_generators)),
      factors_(std::move(factors)) {
  if (dim_ <= 0) throw std::invalid_argument("LieAlgebra: non-positive dimension");
  for (const auto& a : ad_)
    if (a.rows() != dim_ || a.cols() != dim_)
      throw std::invalid_argument("LieAlgebra: ad generator shape mismatch");
  inner_ = Eigen::MatrixXd::Identity(dim_, dim_);

  // Antisymmetry of the bracket and invariance of the inner product
  // (the latter is antisymmetry of each ad matrix in this basis).
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        if (std::abs(ad_[i](k, j) + ad_[j](k, i)) > tol::alg)
          throw std::invalid_argument("LieAlgebra: bracket not antisymmetric");
    if ((ad_[i] + ad_[i].transpose()).norm() > tol::alg)
      throw std::invalid_argument("LieAlgebra: inner product not invariant");
  }
  if (jacobi_residual() > tol::alg)
    throw std::invalid_argument("LieAlgebra: Jacobi identity violated");

  bracket_scale_ = 1.0;  // abelian algebras still need a nonzero scale
  for (const auto& a : ad_)
    bracket_scale_ = std::max(bracket_scale_, a.norm());

  // Rank = dimension of the centralizer of a generic element. The
  // centralizer dimension is >= rank everywhere with equality off a
  // measure-zero set, so take the minimum over a few seeded draws.
  std::mt19937_64 rng(0x5eed0001u);
  int best = dim_;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const Eigen::VectorXd x = random_normal(dim_, rng);
    best = std::min(best, null_space(ad_matrix(x)).dim());
  }
  rank_ = best;
}

Eigen::MatrixXd LieAlgebra::ad_matrix(const Eigen::VectorXd& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("ad_matrix: dimension mismatch");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    if (x(i) != 0.0) m += x(i) * ad_[i];
  return m;
}

Eigen::MatrixXd LieAlgebra::coad_matrix(const Eigen::VectorXd& xi) const {
  return -ad_matrix(xi).transpose();
}

Eigen::MatrixXd LieAlgebra::coad_by_generator(const Eigen::VectorXd& mu) const {
  if (mu.size() != dim_)
    throw std::invalid_argument("coad_by_generator: dimension mismatch");
  Eigen::MatrixXd m(dim_, dim_);
  for (int j = 0; j < dim_; ++j) m.col(j) = -ad_[j].transpose() * mu;
  return m;
}

double LieAlgebra::jacobi_residual() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) {
      // [e_i, [e_j, .]] - [e_j, [e_i, .]] - ad([e_i, e_j])
      Eigen::MatrixXd lhs = ad_[i] * ad_[j] - ad_[j] * ad_[i];
      Eigen::VectorXd bij = ad_[i].col(j);
      lhs -= ad_matrix(bij);
      worst = std::max(worst, lhs.cwiseAbs().maxCoeff());
    }
  return worst;
}

LieAlgebra build_algebra(const std::string& descriptor) {
  std::vector<LieAlgebra> parts;
  std::string token;
  auto flush = [&]() {
    if (token.empty())
      throw std::invalid_argument("build_algebra: empty factor in '" +
                                  descriptor + "'");
    // Expect kind(n).
    const auto open = token.find('(');
    const auto close = token.find(')');
    if (open == std::string::npos || close != token.size() - 1 || close < open)
      throw std::invalid_argument("build_algebra: cannot parse '" + token + "'");
    const std::string kind = token.substr(0, open);
    int n = 0;
    try {
      n = std::stoi(token.substr(open + 1, close - open - 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("build_algebra: cannot parse '" + token + "'");
    }
    parts.push_back(simple_factor(kind, n));
    token.clear();
  };
  for (char ch : descriptor) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (ch == '+') {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  if (parts.size() == 1) return parts.front();
  return direct_sum(parts);
}

LieAlgebra direct_sum(const std::vector<LieAlgebra>& parts) {
  if (parts.empty()) throw std::invalid_argument("direct_sum: no factors");
  int total = 0;
  for (const auto& p : parts) total += p.dim();
  std::vector<Eigen::MatrixXd> ad(total, Eigen::MatrixXd::Zero(total, total));
  std::vector<AlgebraFactor> factors;
  std::string name;
  int offset = 0;
  for (const auto& p : parts) {
    for (int i = 0; i < p.dim(); ++i) {
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(total, total);
      // Rebuild ad_{e_i} from structure constants of the factor.
      for (int j = 0; j < p.dim(); ++j)
        for (int k = 0; k < p.dim(); ++k)
          block(offset + k, offset + j) = p.structure_constant(i, j, k);
      ad[offset + i] = block;
    }
    for (auto f : p.factors()) {
      f.offset += offset;
      factors.push_back(f);
    }
    if (!name.empty()) name += "+";
    name += p.name();
    offset += p.dim();
  }
  return LieAlgebra(name, std::move(ad), std::move(factors));
}

AlgVector bracket(const LieAlgebra& g, const AlgVector& x, const AlgVector& y) {
  if (x.coords.size() != g.dim() || y.coords.size() != g.dim())
    throw std::invalid_argument("bracket: dimension mismatch");
  return AlgVector{g.ad_matrix(x.coords) * y.coords};
}

CoVector coad(const LieAlgebra& g, const AlgVector& xi, const CoVector& mu) {
  if (xi.coords.size() != g.dim() || mu.coords.size() != g.dim())
    throw std::invalid_argument("coad: dimension mismatch");
  return CoVector{g.coad_matrix(xi.coords) * mu.coords};
}

CoVector dualize(const LieAlgebra& g, const AlgVector& x) {
  return CoVector{g.inner_product() * x.coords};
}

AlgVector dualize(const LieAlgebra& g, const CoVector& mu) {
  // Inner product is the identity by construction; the inverse is itself.
  return AlgVector{g.inner_product() * mu.coords};
}

Subspace stabilizer(const LieAlgebra& g, const AlgVector& xi) {
  if (xi.coords.size() != g.dim())
    throw std::invalid_argument("stabilizer: dimension mismatch");
  const double floor = tol::rank_rel * g.bracket_scale() * xi.coords.norm();
  return null_space(g.ad_matrix(xi.coords), tol::rank_rel, floor);
}

Subspace stabilizer(const LieAlgebra& g, const CoVector& mu) {
  if (mu.coords.size() != g.dim())
    throw std::invalid_argument("stabilizer: dimension mismatch");
  const double floor = tol::rank_rel * g.bracket_scale() * mu.coords.norm();
  return null_space(g.coad_by_generator(mu.coords), tol::rank_rel, floor);
}

bool is_subalgebra(const LieAlgebra& g, const Subspace& k) {
  if (k.ambient_dim() != g.dim())
    throw std::invalid_argument("is_subalgebra: ambient mismatch");
  for (int i = 0; i < k.dim(); ++i)
    for (int j = i + 1; j < k.dim(); ++j) {
      const Eigen::VectorXd br =
          g.ad_matrix(k.basis().col(i)) * k.basis().col(j);
      if (k.residual(br) > tol::alg * (1.0 + br.norm())) return false;
    }
  return true;
}

Subspace center_of(const LieAlgebra& g, const Subspace& k) {
  if (!is_subalgebra(g, k))
    throw std::invalid_argument("center_of: k is not a subalgebra");
  if (k.dim() == 0) return k;
  // Joint kernel within k of all ad_b|k, b over the basis of k.
  Eigen::MatrixXd constraints(g.dim() * k.dim(), k.dim());
  for (int b = 0; b < k.dim(); ++b)
    constraints.middleRows(b * g.dim(), g.dim()) =
        g.ad_matrix(k.basis().col(b)) * k.basis();
  const double floor = tol::rank_rel * g.bracket_scale();
  const Subspace coeff = null_space(constraints, tol::rank_rel, floor);
  if (coeff.dim() == 0) return Subspace::zero(g.dim());
  return Subspace::span_of(k.basis() * coeff.basis());
}

int derived_dim(const LieAlgebra& g, const Subspace& k) {
  if (k.dim() <= 1) return 0;
  Eigen::MatrixXd brackets(g.dim(), k.dim() * (k.dim() - 1) / 2);
  int col = 0;
  for (int i = 0; i < k.dim(); ++i)
    for (int j = i + 1; j < k.dim(); ++j)
      brackets.col(col++) = g.ad_matrix(k.basis().col(i)) * k.basis().col(j);
  return numerical_rank(brackets, tol::rank_rel,
                        tol::rank_rel * g.bracket_scale());
}

int rank_of(const LieAlgebra& g, const Subspace& k, unsigned seed) {
  if (k.dim() == 0) return 0;
  // dim of the centralizer in k of x in k is minimized on generic x;
  // retries guard against unlucky draws (gap-checked rank, then min).
  std::mt19937_64 rng(seed);
  int best = k.dim();
  for (int attempt = 0; attempt < 8; ++attempt) {
    const Eigen::VectorXd x = k.basis() * random_normal(k.dim(), rng);
    const Eigen::MatrixXd restricted = g.ad_matrix(x) * k.basis();
    const int r = rank_with_gap(restricted, tol::rank_rel,
                                tol::rank_rel * g.bracket_scale() * x.norm());
    if (r < 0) continue;
    best = std::min(best, k.dim() - r);
  }
  return best;
}

Eigen::MatrixXd group_adjoint(const LieAlgebra& g, const Eigen::VectorXd& x,
                              double t) {
  if (x.size() != g.dim())
    throw std::invalid_argument("group_adjoint: dimension mismatch");
  return (t * g.ad_matrix(x)).exp();
}

AlgVector conjugate(const LieAlgebra& g, const AlgVector& x, double t,
                    const AlgVector& target) {
  return AlgVector{group_adjoint(g, x.coords, t) * target.coords};
}

CoVector conjugate(const LieAlgebra& g, const AlgVector& x, double t,
                   const CoVector& target) {
  // Transport dual to Ad: expm(-t ad(x)^T); its derivative at t = 0 is coad_x.
  return CoVector{(-t * g.ad_matrix(x.coords).transpose()).exp() * target.coords};
}

}  // namespace releq
