#include "releq/transversality.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace releq {

namespace {

struct FrameIndex {
  int k = 0;  // dim T0 = dim N0
  int m = 0;  // dim N1 = dim T1
  int t0 = 0, n1 = 0, n0 = 0, t1 = 0;  // column offsets
};

FrameIndex index_of(const AdaptedFrame& f) {
  FrameIndex ix;
  ix.k = f.dim_t0();
  ix.m = f.dim_n1();
  ix.t0 = 0;
  ix.n1 = ix.k;
  ix.n0 = ix.k + ix.m;
  ix.t1 = 2 * ix.k + ix.m;
  return ix;
}

// Solve A X - X B = -C by vectorization (sizes here are tiny).
Eigen::MatrixXd solve_sylvester(const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& b,
                                const Eigen::MatrixXd& c) {
  const int m = static_cast<int>(a.rows());
  const int k = static_cast<int>(b.rows());
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(m * k, m * k);
  for (int j = 0; j < k; ++j) {
    big.block(j * m, j * m, m, m) = a;
    for (int i = 0; i < k; ++i)
      big.block(j * m, i * m, m, m) -=
          b(i, j) * Eigen::MatrixXd::Identity(m, m);
  }
  Eigen::VectorXd rhs(m * k);
  for (int j = 0; j < k; ++j) rhs.segment(j * m, m) = -c.col(j);
  const Eigen::VectorXd x = big.colPivHouseholderQr().solve(rhs);
  Eigen::MatrixXd out(m, k);
  for (int j = 0; j < k; ++j) out.col(j) = x.segment(j * m, m);
  return out;
}

bool spectra_disjoint(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() == 0 || b.rows() == 0) return true;
  Eigen::EigenSolver<Eigen::MatrixXd> ea(a, false), eb(b, false);
  const double scale =
      1.0 + std::max(ea.eigenvalues().cwiseAbs().maxCoeff(),
                     eb.eigenvalues().cwiseAbs().maxCoeff());
  for (int i = 0; i < ea.eigenvalues().size(); ++i)
    for (int j = 0; j < eb.eigenvalues().size(); ++j)
      if (std::abs(ea.eigenvalues()(i) - eb.eigenvalues()(j)) < 1e-6 * scale)
        return false;
  return true;
}

struct ExtractedBlocks {
  Eigen::MatrixXd lf;  // frame form of the linearization
  NormalFormBlocks blocks;
};

ExtractedBlocks extract(const CotangentGroupSystem& sys,
                        const RelativeEquilibrium& re,
                        const AdaptedFrame& frame) {
  const LieAlgebra& g = sys.algebra();
  const Eigen::MatrixXd lin =
      sys.linearization(re.point, re.generator.coords);
  const Eigen::MatrixXd f = frame.full();
  ExtractedBlocks out;
  out.lf = f.colPivHouseholderQr().solve(lin * f);
  const FrameIndex ix = index_of(frame);
  const int k = ix.k, m = ix.m;
  NormalFormBlocks& b = out.blocks;
  b.b_t0 = out.lf.block(ix.t0, ix.t0, k, k);
  b.dx_red = out.lf.block(ix.n1, ix.n1, m, m);
  b.b_n0 = out.lf.block(ix.n0, ix.n0, k, k);
  b.b_t1 = out.lf.block(ix.t1, ix.t1, m, m);
  b.cstar = out.lf.block(ix.t0, ix.n1, k, m);
  b.d = out.lf.block(ix.t0, ix.n0, k, k);
  b.c = out.lf.block(ix.n1, ix.n0, m, k);

  const double scale = 1.0 + lin.norm();
  double forb = 0.0;
  auto take = [&](int r, int nr, int c, int nc) {
    if (nr > 0 && nc > 0)
      forb = std::max(forb, out.lf.block(r, c, nr, nc).norm());
  };
  take(ix.n1, m, ix.t0, k);
  take(ix.n0, k, ix.t0, k);
  take(ix.t1, m, ix.t0, k);
  take(ix.n0, k, ix.n1, m);
  take(ix.t1, m, ix.n1, m);
  take(ix.t1, m, ix.n0, k);
  take(ix.t0, k, ix.t1, m);
  take(ix.n1, m, ix.t1, m);
  take(ix.n0, k, ix.t1, m);
  b.forbidden_block_residual = forb / scale;

  // The extracted diagonal must be the operators the frame promises.
  const Eigen::VectorXd& xi = re.generator.coords;
  const Eigen::MatrixXd ad_xi = g.ad_matrix(xi);
  double diag = 0.0;
  if (k > 0) {
    diag = std::max(
        diag, (b.b_t0 + frame.gmu_basis.transpose() * ad_xi * frame.gmu_basis)
                  .norm());
    diag = std::max(diag, (b.b_n0 + frame.gmu_basis.transpose() *
                                        g.coad_matrix(xi) * frame.gmu_basis)
                              .norm());
  }
  if (m > 0)
    diag = std::max(diag, (b.b_t1 + frame.gmu_perp_basis.transpose() * ad_xi *
                                        frame.gmu_perp_basis)
                              .norm());
  b.diagonal_residual = diag / scale;

  b.structure_residual_c = (b.dx_red * b.c - b.c * b.b_n0).norm() / scale;
  b.structure_residual_cstar =
      (b.cstar * b.dx_red - b.b_t0 * b.cstar).norm() / scale;
  b.structure_residual_d = (b.b_t0 * b.d - b.d * b.b_n0).norm() / scale;
  b.d_symmetry_residual = (b.d - b.d.transpose()).norm() / scale;
  if (m > 0) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(b.dx_red, false);
    b.dx_red_spectrum = es.eigenvalues();
  } else {
    b.dx_red_spectrum.resize(0);
  }
  return out;
}

double worst_structure(const NormalFormBlocks& b) {
  return std::max({b.structure_residual_c, b.structure_residual_cstar,
                   b.structure_residual_d, b.forbidden_block_residual});
}

// Subspaces of the isotropy chain expressed in gmu-basis coefficients.
struct IsotropyCoords {
  Eigen::MatrixXd k_coords;  // dim gmu x dim k
  Eigen::MatrixXd z_coords;  // dim gmu x dim z
  Eigen::MatrixXd l_coords;  // dim gmu x (dim k - dim z)
};

IsotropyCoords isotropy_coords(const CotangentGroupSystem& sys,
                               const RelativeEquilibrium& re,
                               const AdaptedFrame& frame) {
  const LieAlgebra& g = sys.algebra();
  CommutingPair pair{re.momentum, re.generator, &g};
  const Subspace k = isotropy_subalgebra(pair);
  const SigmaSplit split = split_sigma(g, k);
  IsotropyCoords out;
  out.k_coords = frame.gmu_basis.transpose() * k.basis();
  out.z_coords = frame.gmu_basis.transpose() * split.z_part.basis();
  out.l_coords = frame.gmu_basis.transpose() * split.l_part.basis();
  // k always sits inside g_mu; the coefficients must represent it exactly.
  if ((frame.gmu_basis * out.k_coords - k.basis()).norm() > 1e-8)
    throw std::runtime_error(
        "isotropy_coords: isotropy subalgebra leaves the momentum isotropy");
  return out;
}

// Admissible variations (v, eta) with (dJ v, eta) tangent to the stratum
// of the momentum-generator pair, and the image dX_{H_xi} v - eta.p.
struct AdmissibleImage {
  Subspace admissible;  // subspace of R^{3n}
  Subspace image;       // subspace of R^{2n}
  Subspace kernel_dj;   // ker dJ
};

AdmissibleImage admissible_image(const CotangentGroupSystem& sys,
                                 const RelativeEquilibrium& re) {
  const int n = sys.algebra().dim();
  const EvalBundle b = sys.eval(re.point);
  CommutingPair pair{re.momentum, re.generator, &sys.algebra()};
  const Subspace q = stratum_tangent(pair);
  const Subspace q_perp = q.perp();

  Eigen::MatrixXd bmap = Eigen::MatrixXd::Zero(2 * n, 3 * n);
  bmap.topLeftCorner(n, 2 * n) = b.dJ;
  bmap.bottomRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);

  AdmissibleImage out;
  out.admissible = null_space(q_perp.basis().transpose() * bmap);

  Eigen::MatrixXd to_phase(2 * n, 3 * n);
  to_phase.leftCols(2 * n) = sys.linearization(re.point, re.generator.coords);
  to_phase.rightCols(n) = -b.generator;
  Eigen::MatrixXd image = to_phase * out.admissible.basis();
  // Equalize column scales before the rank decision.
  for (int j = 0; j < image.cols(); ++j) {
    const double len = image.col(j).norm();
    if (len > tol::rank_rel) image.col(j) /= len;
  }
  out.image = Subspace::span_of(image, tol::rank_rel, tol::rank_rel);
  out.kernel_dj = null_space(b.dJ);
  return out;
}

}  // namespace

Eigen::MatrixXd AdaptedFrame::full() const {
  Eigen::MatrixXd f(t0.rows(), t0.cols() + n1.cols() + n0.cols() + t1.cols());
  f << t0, n1, n0, t1;
  return f;
}

AdaptedFrame adapted_frame(const CotangentGroupSystem& sys,
                           const RelativeEquilibrium& re) {
  const LieAlgebra& g = sys.algebra();
  const int n = g.dim();
  const EvalBundle b = sys.eval(re.point);
  const Eigen::MatrixXd& a = b.ad_point;

  AdaptedFrame frame;
  frame.gmu_basis = stabilizer(g, re.momentum).basis();
  const int k = static_cast<int>(frame.gmu_basis.cols());
  const int m = n - k;
  frame.gmu_perp_basis = Subspace::span_of(frame.gmu_basis).perp().basis();

  // Orbit blocks: columns are the generator images of the basis elements.
  frame.t0.resize(2 * n, k);
  frame.t0 << a.transpose() * frame.gmu_basis, Eigen::MatrixXd::Zero(n, k);
  frame.t1.resize(2 * n, m);
  frame.t1 << a.transpose() * frame.gmu_perp_basis, Eigen::MatrixXd::Zero(n, m);

  const Subspace kernel = null_space(b.dJ);
  if (kernel.dim() != n)
    throw std::runtime_error("adapted_frame: dJ is not a submersion");
  for (int j = 0; j < k; ++j)
    if (kernel.residual(frame.t0.col(j)) > 1e-8)
      throw std::runtime_error(
          "adapted_frame: momentum isotropy orbit leaves ker dJ (input is "
          "not a relative equilibrium?)");

  // N0: the orthogonal complement of orbit + kernel, sheared along T1 so
  // that dJ maps it onto g_mu exactly, with columns matched to gmu_basis.
  Eigen::MatrixXd orbit_kernel(2 * n, n + kernel.dim());
  orbit_kernel << b.generator, kernel.basis();
  const Subspace n0_raw = Subspace::span_of(orbit_kernel).perp();
  if (n0_raw.dim() != k)
    throw std::runtime_error("adapted_frame: transversal complement has wrong "
                             "dimension (free action violated?)");
  const Eigen::MatrixXd m0 = b.dJ * n0_raw.basis();
  Eigen::MatrixXd mix(n, n);
  mix << frame.gmu_basis, b.dJ * frame.t1;
  const Eigen::MatrixXd coeff = mix.colPivHouseholderQr().solve(m0);
  const Eigen::MatrixXd alpha = coeff.topRows(k);
  const Eigen::MatrixXd beta = coeff.bottomRows(m);
  frame.n0 =
      (n0_raw.basis() - frame.t1 * beta) * alpha.colPivHouseholderQr().inverse();
  if (k > 0 && (b.dJ * frame.n0 - frame.gmu_basis).norm() > 1e-9)
    throw std::runtime_error("adapted_frame: momentum alignment failed");

  // N1: the omega-annihilator of N0 inside ker dJ, the symplectically
  // canonical complement of T0.
  const Eigen::MatrixXd constraints =
      frame.n0.transpose() * b.omega.transpose() * kernel.basis();
  const Subspace coeffs = null_space(constraints);
  frame.n1 = kernel.basis() * coeffs.basis();
  if (static_cast<int>(frame.n1.cols()) != m)
    throw std::runtime_error("adapted_frame: reduced block has wrong dimension");

  const Eigen::MatrixXd f = frame.full();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(f);
  if (svd.singularValues()(2 * n - 1) <
      tol::rank_rel * svd.singularValues()(0))
    throw std::runtime_error("adapted_frame: frame is numerically singular");
  return frame;
}

NormalFormBlocks normal_form_blocks(const CotangentGroupSystem& sys,
                                    const RelativeEquilibrium& re,
                                    AdaptedFrame& frame) {
  ExtractedBlocks cur = extract(sys, re, frame);
  const FrameIndex ix = index_of(frame);
  if (ix.m == 0 || ix.k == 0) return cur.blocks;

  // Resonance-free couplings are removable: shear N0 along N1 to kill C,
  // then N1 along T0 to kill Cstar. Keep whichever frame satisfies the
  // structure relations best (the shears are exact when the Sylvester
  // operators are well conditioned).
  if (!spectra_disjoint(cur.blocks.dx_red, cur.blocks.b_n0)) return cur.blocks;

  AdaptedFrame sheared = frame;
  const Eigen::MatrixXd x =
      solve_sylvester(cur.blocks.dx_red, cur.blocks.b_n0, cur.blocks.c);
  sheared.n0 += sheared.n1 * x;
  const Eigen::MatrixXd y =
      solve_sylvester(cur.blocks.b_t0, cur.blocks.dx_red, cur.blocks.cstar);
  sheared.n1 += sheared.t0 * y;

  ExtractedBlocks next = extract(sys, re, sheared);
  const double c_scale =
      1.0 + sys.linearization(re.point, re.generator.coords).norm();
  const bool improved =
      worst_structure(next.blocks) <= worst_structure(cur.blocks) + tol::nf &&
      next.blocks.c.norm() <= tol::nf * c_scale &&
      next.blocks.cstar.norm() <= tol::nf * c_scale;
  if (improved) {
    frame = sheared;
    return next.blocks;
  }
  return cur.blocks;
}

DirectVerdict check_transversal_direct(const CotangentGroupSystem& sys,
                                       const RelativeEquilibrium& re) {
  const AdmissibleImage parts = admissible_image(sys, re);
  DirectVerdict verdict;
  verdict.gap = containment_gap(parts.kernel_dj, parts.image);
  verdict.threshold = tol::containment;
  verdict.transversal = verdict.gap < verdict.threshold;
  return verdict;
}

NormalFormVerdict check_transversal_normalform(const CotangentGroupSystem& sys,
                                               const RelativeEquilibrium& re,
                                               const AdaptedFrame& frame,
                                               const NormalFormBlocks& blocks) {
  NormalFormVerdict v;
  const int m = static_cast<int>(blocks.dx_red.rows());
  const double red_scale = 1.0 + blocks.dx_red.norm();

  v.nondegenerate =
      m == 0 || numerical_rank(blocks.dx_red, tol::rank_rel,
                               tol::rank_rel * red_scale) == m;
  v.zero_semisimple = v.nondegenerate || zero_eigenvalue_semisimple(blocks.dx_red);

  const IsotropyCoords iso = isotropy_coords(sys, re, frame);
  const int dim_z = static_cast<int>(iso.z_coords.cols());
  const int dim_k = static_cast<int>(iso.k_coords.cols());

  const Subspace red_kernel =
      m == 0 ? Subspace::zero(0)
             : null_space(blocks.dx_red, tol::rank_rel,
                          tol::rank_rel * red_scale);

  // Condition 2: C maps z* onto ker dX_red (the reverse containment is
  // automatic from the structure relations).
  if (m == 0 || red_kernel.dim() == 0) {
    v.c_onto_kernel = true;
  } else if (dim_z == 0) {
    v.c_onto_kernel = false;
  } else {
    const Subspace c_image = Subspace::span_of(
        blocks.c * iso.z_coords, tol::rank_rel, tol::rank_rel);
    v.c_onto_kernel =
        containment_gap(red_kernel, c_image) < tol::containment;
  }

  // Condition 3: Cstar(ker dX_red) + D(ker C cap z*) + z spans k.
  Eigen::MatrixXd zstar_kerc;
  if (dim_z == 0) {
    zstar_kerc.resize(iso.k_coords.rows(), 0);
  } else {
    const Eigen::MatrixXd c_on_z = blocks.c * iso.z_coords;
    const Subspace kern = null_space(c_on_z, tol::rank_rel, tol::rank_rel);
    zstar_kerc = iso.z_coords * kern.basis();
  }
  Eigen::MatrixXd span(iso.k_coords.rows(),
                       red_kernel.dim() + zstar_kerc.cols() + dim_z);
  span << blocks.cstar * red_kernel.basis(), blocks.d * zstar_kerc,
      iso.z_coords;
  const int spanned =
      numerical_rank(span, tol::rank_rel, tol::rank_rel);
  v.drift_spans = spanned == dim_k;

  v.transversal = v.zero_semisimple && v.c_onto_kernel && v.drift_spans;

  // Nondegenerate shortcut: Dbar = proj_l o D|z* surjective.
  if (dim_k == dim_z) {
    v.dbar_surjective = true;  // l = 0, nothing to reach
  } else if (dim_z == 0) {
    v.dbar_surjective = false;
  } else {
    const Eigen::MatrixXd dbar =
        iso.l_coords.transpose() * blocks.d * iso.z_coords;
    v.dbar_surjective =
        numerical_rank(dbar, tol::rank_rel, tol::rank_rel) ==
        static_cast<int>(iso.l_coords.cols());
  }
  return v;
}

bool necessary_inequality(const TypeFingerprint& fp) {
  return 2 * fp.dim_z >= fp.dim_k;
}

bool zero_eigenvalue_semisimple(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return true;
  const double scale = 1.0 + a.norm();
  return numerical_rank(a, tol::rank_rel, tol::rank_rel * scale) ==
         numerical_rank(a * a, tol::rank_rel, tol::rank_rel * scale * scale);
}

Subspace tangent_space_E(const CotangentGroupSystem& sys,
                         const RelativeEquilibrium& re,
                         const AdaptedFrame& frame,
                         const NormalFormBlocks& blocks) {
  if (!check_transversal_direct(sys, re).transversal)
    throw std::invalid_argument(
        "tangent_space_E: relative equilibrium is not transversal");
  const int n = sys.algebra().dim();
  const FrameIndex ix = index_of(frame);
  const IsotropyCoords iso = isotropy_coords(sys, re, frame);
  const double red_scale = 1.0 + blocks.dx_red.norm();

  const Subspace red_kernel =
      ix.m == 0 ? Subspace::zero(0)
                : null_space(blocks.dx_red, tol::rank_rel,
                             tol::rank_rel * red_scale);

  // mu_0 ranges over z* cap ker C.
  Eigen::MatrixXd mu_candidates;
  if (iso.z_coords.cols() == 0) {
    mu_candidates.resize(ix.k, 0);
  } else {
    const Subspace kern = null_space(blocks.c * iso.z_coords, tol::rank_rel,
                                     tol::rank_rel);
    mu_candidates = iso.z_coords * kern.basis();
  }

  // Joint constraint: Cstar w + D mu_0 must land in z.
  const int nw = red_kernel.dim();
  const int nm = static_cast<int>(mu_candidates.cols());
  Eigen::MatrixXd pair_basis(ix.k + ix.m, 0);
  if (nw + nm > 0) {
    const Subspace z_span =
        iso.z_coords.cols() == 0
            ? Subspace::zero(ix.k)
            : Subspace::span_of(iso.z_coords);
    const Eigen::MatrixXd z_perp = z_span.perp().basis();  // within R^k
    Eigen::MatrixXd constraint(z_perp.cols(), nw + nm);
    if (nw > 0)
      constraint.leftCols(nw) =
          z_perp.transpose() * (blocks.cstar * red_kernel.basis());
    if (nm > 0)
      constraint.rightCols(nm) =
          z_perp.transpose() * (blocks.d * mu_candidates);
    const Subspace combos =
        null_space(constraint, tol::rank_rel, tol::rank_rel);
    pair_basis.resize(ix.m + ix.k, combos.dim());
    for (int j = 0; j < combos.dim(); ++j) {
      Eigen::VectorXd w = Eigen::VectorXd::Zero(ix.m);
      Eigen::VectorXd mu = Eigen::VectorXd::Zero(ix.k);
      if (nw > 0) w = red_kernel.basis() * combos.basis().col(j).head(nw);
      if (nm > 0) mu = mu_candidates * combos.basis().col(j).tail(nm);
      pair_basis.col(j).head(ix.m) = w;
      pair_basis.col(j).tail(ix.k) = mu;
    }
  } else {
    pair_basis.resize(ix.m + ix.k, 0);
  }

  Eigen::MatrixXd gens(2 * n, ix.k + ix.m + pair_basis.cols());
  gens.leftCols(ix.k) = frame.t0;
  gens.middleCols(ix.k, ix.m) = frame.t1;
  for (int j = 0; j < pair_basis.cols(); ++j)
    gens.col(ix.k + ix.m + j) =
        frame.n1 * pair_basis.col(j).head(ix.m) +
        frame.n0 * pair_basis.col(j).tail(ix.k);
  return Subspace::span_of(gens);
}

AlgVector generator_variation(const CotangentGroupSystem& sys,
                              const RelativeEquilibrium& re,
                              const AdaptedFrame& frame,
                              const NormalFormBlocks& blocks,
                              const Eigen::VectorXd& v) {
  const LieAlgebra& g = sys.algebra();
  const int n = g.dim();
  if (v.size() != 2 * n)
    throw std::invalid_argument("generator_variation: phase vector expected");
  const FrameIndex ix = index_of(frame);
  const Eigen::VectorXd coords =
      frame.full().colPivHouseholderQr().solve(v);
  const Eigen::VectorXd xi0 = coords.segment(ix.t0, ix.k);
  const Eigen::VectorXd w = coords.segment(ix.n1, ix.m);
  const Eigen::VectorXd mu0 = coords.segment(ix.n0, ix.k);
  const Eigen::VectorXd xi1 = coords.segment(ix.t1, ix.m);

  const Eigen::MatrixXd ad_xi = g.ad_matrix(re.generator.coords);
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
  if (ix.k > 0)
    eta += frame.gmu_basis * (blocks.cstar * w + blocks.d * mu0) -
           ad_xi * (frame.gmu_basis * xi0);
  if (ix.m > 0) eta += -ad_xi * (frame.gmu_perp_basis * xi1);

  // Graph property of the paired tangent space: the variation must solve
  // the linearized equations along v.
  const Eigen::MatrixXd lin = sys.linearization(re.point, re.generator.coords);
  const EvalBundle b = sys.eval(re.point);
  const double graph_residual = (lin * v - b.generator * eta).norm();
  if (graph_residual > 1e-6 * (1.0 + lin.norm()) * (1.0 + v.norm()))
    throw std::invalid_argument(
        "generator_variation: input is not tangent to the equilibrium set");
  return AlgVector{eta};
}

SymplecticityRecord symplecticity_check(const CotangentGroupSystem& sys,
                                        const RelativeEquilibrium& re,
                                        const AdaptedFrame& frame,
                                        const NormalFormBlocks& blocks) {
  const Subspace tangent = tangent_space_E(sys, re, frame, blocks);
  const EvalBundle b = sys.eval(re.point);
  const Eigen::MatrixXd restricted =
      tangent.basis().transpose() * b.omega * tangent.basis();

  SymplecticityRecord rec;
  rec.tangent_dim = tangent.dim();
  rec.measured_rank = numerical_rank(restricted, tol::rank_rel,
                                     tol::rank_rel * (1.0 + b.omega.norm()));
  rec.is_symplectic = rec.measured_rank == rec.tangent_dim;

  const LieAlgebra& g = sys.algebra();
  const int m = static_cast<int>(blocks.dx_red.rows());
  const bool nondegenerate =
      m == 0 || numerical_rank(blocks.dx_red, tol::rank_rel,
                               tol::rank_rel * (1.0 + blocks.dx_red.norm())) == m;
  const Subspace gmu = Subspace::span_of(frame.gmu_basis);
  const bool maximal_torus =
      derived_dim(g, gmu) == 0 && gmu.dim() == g.rank();
  rec.predicted = nondegenerate && maximal_torus;
  return rec;
}

SingularityDescriptor singularity_model(const TypeFingerprint& fp) {
  SingularityDescriptor d;
  d.dim_l = fp.dim_k - fp.dim_z;
  d.rank_l = fp.rank_k - fp.dim_z;
  d.smooth_point = d.dim_l == 0;
  d.cone_dim = d.dim_l + d.rank_l;
  if (d.smooth_point) {
    d.label = "smooth point";
  } else if (d.dim_l == 3 && d.rank_l == 1) {
    d.label = "commuting pairs of so(3)";
  } else {
    d.label = "commuting pairs of a rank-" + std::to_string(d.rank_l) +
              " algebra of dimension " + std::to_string(d.dim_l);
  }
  return d;
}

int manifold_dim(const CotangentGroupSystem& sys,
                 const RelativeEquilibrium& re) {
  const AdmissibleImage parts = admissible_image(sys, re);
  if (containment_gap(parts.kernel_dj, parts.image) >= tol::containment)
    throw std::invalid_argument(
        "manifold_dim: relative equilibrium is not transversal");
  const int n = sys.algebra().dim();
  const EvalBundle b = sys.eval(re.point);
  Eigen::MatrixXd to_phase(2 * n, 3 * n);
  to_phase.leftCols(2 * n) = sys.linearization(re.point, re.generator.coords);
  to_phase.rightCols(n) = -b.generator;

  const Eigen::MatrixXd on_admissible = to_phase * parts.admissible.basis();
  const Subspace solutions = null_space(
      on_admissible, tol::rank_rel,
      tol::rank_rel * (1.0 + to_phase.norm()));
  const Eigen::MatrixXd v_parts =
      parts.admissible.basis().topRows(2 * n) * solutions.basis();
  return numerical_rank(v_parts, tol::rank_rel, tol::rank_rel);
}

}  // namespace releq
