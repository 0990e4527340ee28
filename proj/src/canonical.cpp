#include "hopf/canonical.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

namespace hopf {

const char* to_string(CaseSign c) {
  return c == CaseSign::PLUS ? "PLUS" : "MINUS";
}

Mat canonical_linearization(int n, double nu0) {
  const Mat J = standard_j(2 * n);
  Mat A = Mat::Zero(4 * n, 4 * n);
  A.topLeftCorner(2 * n, 2 * n) = nu0 * J;
  A.bottomRightCorner(2 * n, 2 * n) = nu0 * J;
  A.topRightCorner(2 * n, 2 * n) = Mat::Identity(2 * n, 2 * n);
  return A;
}

namespace {

// Core construction in coordinates where the group acts orthogonally.
// Returns the frame T and the pairing sign s (omega_frame = -s * J).
std::pair<Mat, double> frame_core(const Mat& A, const Mat& Om, double nu0,
                                  int n) {
  const int dim = 4 * n;
  const double scale = std::max(A.norm(), 1e-300);
  const Complex inu(0.0, nu0);

  const CMat Ac = A.cast<Complex>();
  const CMat M = Ac - inu * CMat::Identity(dim, dim);

  {  // H3: algebraic multiplicity of +i nu0 must be 2n
    Eigen::ComplexEigenSolver<CMat> es(Ac);
    int count = 0;
    for (int i = 0; i < dim; ++i) {
      if (std::abs(es.eigenvalues()(i) - inu) < 1e-6 * scale) ++count;
    }
    if (count != 2 * n) {
      throw HopfError(ErrorCode::H3_VIOLATION,
                      "algebraic multiplicity of i*nu0 is not 2n");
    }
  }

  // E+ = ker (A - i nu0)^2, dimension 2n.
  CMat M2 = (M / scale) * (M / scale);
  Eigen::JacobiSVD<CMat> svd2(M2, Eigen::ComputeFullV);
  CMat Q = svd2.matrixV().rightCols(2 * n);

  // Nilpotent action on E+; H3 demands rank exactly n.
  CMat Nt = Q.adjoint() * M * Q;
  Eigen::JacobiSVD<CMat> svdn(Nt, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sn = svdn.singularValues();
  int rank = 0;
  for (int i = 0; i < sn.size(); ++i) {
    if (sn(i) > 1e-8 * std::max(1.0, scale)) ++rank;
  }
  if (rank != n) {
    throw HopfError(ErrorCode::H3_VIOLATION,
                    "nilpotent part on the resonance space has rank != n");
  }

  CMat Zt = svdn.matrixU().leftCols(n);
  CMat etat = solve_min_norm(Nt, Zt);
  CMat Z = Q * Zt;
  CMat H = Q * etat;

  const CMat Omc = Om.cast<Complex>();

  // Krein pairing between eigenvectors and chain vectors.
  CMat P = Z.transpose() * Omc * H.conjugate();
  CMat Ph = 0.5 * (P + P.adjoint());
  if ((P - Ph).norm() > 1e-6 * std::max(1.0, Ph.norm())) {
    throw HopfError(ErrorCode::H3_VIOLATION, "chain pairing is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMat> esp(Ph);
  const Vec lam_p = esp.eigenvalues();
  const bool all_pos = (lam_p.array() > 0.0).all();
  const bool all_neg = (lam_p.array() < 0.0).all();
  if (!all_pos && !all_neg) {
    throw HopfError(ErrorCode::H3_VIOLATION,
                    "indefinite chain pairing (mixed Krein signature)");
  }
  const double s_sign = all_pos ? 1.0 : -1.0;

  // Congruence-normalize the transposed pairing to 2 s I.
  CMat Gt = P.transpose();
  Eigen::SelfAdjointEigenSolver<CMat> esg(0.5 * (Gt + Gt.adjoint()));
  CMat C = esg.eigenvectors();
  for (int i = 0; i < C.cols(); ++i) {
    C.col(i) /= std::sqrt(std::abs(esg.eigenvalues()(i)) / 2.0);
  }
  Z = Z * C;
  H = H * C;

  // Chain correction makes the eta-eta pairing vanish.
  CMat Qp = H.transpose() * Omc * H.conjugate();
  CMat M0 = 0.5 * (-Qp / (2.0 * s_sign)).transpose();
  H = H + Z * M0;

  Mat T(dim, dim);
  T.leftCols(n) = Z.imag();
  T.middleCols(n, n) = Z.real();
  T.middleCols(2 * n, n) = H.imag();
  T.rightCols(n) = H.real();
  return {T, s_sign};
}

// Closure of the finite generator set under products, capped.
std::vector<Mat> finite_closure(const std::vector<Mat>& gens, int dim,
                                int cap = 128) {
  std::vector<Mat> out;
  out.push_back(Mat::Identity(dim, dim));
  auto contains = [&](const Mat& g) {
    for (const Mat& el : out) {
      if ((el - g).norm() < 1e-9 * std::max(1.0, g.norm())) return true;
    }
    return false;
  };
  bool grew = true;
  while (grew && static_cast<int>(out.size()) < cap) {
    grew = false;
    for (const Mat& g : gens) {
      const size_t sz = out.size();
      for (size_t i = 0; i < sz; ++i) {
        Mat prod = g * out[i];
        if (!contains(prod)) {
          out.push_back(prod);
          grew = true;
          if (static_cast<int>(out.size()) >= cap) return out;
        }
      }
    }
  }
  return out;
}

}  // namespace

CanonicalFrame williamson_frame(const ResonanceData& R, const GroupData& G,
                                double frame_tol) {
  const int dim = R.dim();
  if (dim % 4 != 0) {
    throw HopfError(ErrorCode::H3_VIOLATION,
                    "resonance space dimension is not a multiple of 4");
  }
  const int n = dim / 4;
  const double nu0 = R.nu0;
  const Mat A = R.A_restricted;
  const Mat Om = R.omega_restricted;
  const Mat target = canonical_linearization(n, nu0);
  const Mat J4 = standard_j(dim);
  const double tol = frame_tol * std::max(1.0, nu0);

  CanonicalFrame F;
  F.n = n;
  F.nu0 = nu0;

  auto finalize = [&](const Mat& T, double s_sign) {
    F.basis = T;
    F.basis_inv = T.inverse();
    F.ambient = R.basis * T;
    F.omega_frame = T.transpose() * Om * T;
    F.case_sign = s_sign < 0.0 ? CaseSign::PLUS : CaseSign::MINUS;
    F.h_sign = s_sign < 0.0 ? 1.0 : -1.0;
    F.residual_A = rel_err(F.basis_inv * A * F.basis, target);
    F.residual_omega = (F.omega_frame - (-s_sign) * J4).norm();
    if (F.residual_A > tol || F.residual_omega > tol) {
      throw HopfError(ErrorCode::NONCONVERGENT,
                      "frame residuals exceed tolerance");
    }
    return F;
  };

  // Fast path: input already canonical.
  if (rel_err(A, target) < tol) {
    if ((Om - J4).norm() < tol) return finalize(Mat::Identity(dim, dim), -1.0);
    if ((Om + J4).norm() < tol) return finalize(Mat::Identity(dim, dim), 1.0);
  }

  // Invariant metric: average g^T g over a finite sampling subgroup built
  // from the restricted generators and the linearized circle action.
  std::vector<Mat> finite_restricted;
  for (const Mat& g : G.finite_generators) {
    finite_restricted.push_back(R.basis.transpose() * g * R.basis);
  }
  std::vector<Mat> samples = finite_closure(finite_restricted, dim);
  const int n_angles = 16;
  auto extend_by_circle = [&](const Mat& gen) {
    const double w = gen.norm() < 1e-12 ? 0.0 : 1.0;
    if (w == 0.0) return;
    std::vector<Mat> extended;
    extended.reserve(samples.size() * n_angles);
    for (int j = 0; j < n_angles; ++j) {
      const Mat rot = expm(Mat((2.0 * M_PI * j / n_angles) * gen));
      for (const Mat& g : samples) extended.push_back(g * rot);
    }
    samples.swap(extended);
  };
  for (const Mat& g : G.algebra_generators) {
    // Rescale so the fastest angular weight is 1; integral weight spectra
    // then make the 16-point sampling an exact subgroup average.
    Eigen::ComplexEigenSolver<CMat> es((R.basis.transpose() * g * R.basis)
                                           .eval()
                                           .cast<Complex>());
    double wmax = 0.0;
    for (int i = 0; i < dim; ++i) {
      wmax = std::max(wmax, std::abs(es.eigenvalues()(i).imag()));
    }
    if (wmax < 1e-12) continue;
    extend_by_circle(R.basis.transpose() * g * R.basis / wmax);
  }
  extend_by_circle(R.As_restricted / nu0);

  Mat Gbar = Mat::Zero(dim, dim);
  for (const Mat& g : samples) Gbar += g.transpose() * g;
  Gbar /= static_cast<double>(samples.size());
  Gbar = 0.5 * (Gbar + Gbar.transpose()).eval();

  double metric_res = 0.0;
  for (const Mat& g : samples) {
    metric_res = std::max(metric_res, (g.transpose() * Gbar * g - Gbar).norm() /
                                          std::max(1.0, Gbar.norm()));
  }

  Eigen::LLT<Mat> llt(Gbar);
  if (llt.info() != Eigen::Success) {
    throw HopfError(ErrorCode::NONCONVERGENT,
                    "invariant metric is not positive definite");
  }
  const Mat L = llt.matrixL();
  const Mat Lti = L.transpose().inverse();

  // Whitened problem: the group now acts orthogonally, so the SVD-based
  // construction selects symmetry-compatible subspaces.
  const Mat Aw = L.transpose() * A * Lti;
  const Mat Omw = L.inverse() * Om * Lti;

  auto [Tw, s_sign] = frame_core(Aw, Omw, nu0, n);
  finalize(Lti * Tw, s_sign);
  F.metric_residual = metric_res;
  return F;
}

Splitting split_v0_v1(const CanonicalFrame& F) {
  const int n2 = 2 * F.n;
  Splitting S;
  S.v0_basis = F.basis.leftCols(n2);
  S.v1_basis = F.basis.rightCols(n2);
  Mat E0 = Mat::Zero(2 * n2, 2 * n2);
  E0.topLeftCorner(n2, n2) = Mat::Identity(n2, n2);
  S.projection = F.basis * E0 * F.basis_inv;
  S.L_frame = Mat::Zero(2 * n2, 2 * n2);
  S.L_frame.bottomRightCorner(n2, n2) = -Mat::Identity(n2, n2);
  return S;
}

BlockAction check_block_action(const CanonicalFrame& F, const Mat& g_U,
                               bool algebra, double tol) {
  const int n2 = 2 * F.n;
  const Mat gf = F.basis_inv * g_U * F.basis;
  const double scale = std::max(1.0, gf.norm());

  BlockAction out;
  out.block = gf.topLeftCorner(n2, n2);
  out.residual_offdiag =
      (gf.topRightCorner(n2, n2).norm() + gf.bottomLeftCorner(n2, n2).norm()) /
      scale;
  out.residual_equal =
      (gf.topLeftCorner(n2, n2) - gf.bottomRightCorner(n2, n2)).norm() / scale;
  if (algebra) {
    out.residual_orthogonal =
        (out.block + out.block.transpose()).norm() / scale;
  } else {
    out.residual_orthogonal =
        (out.block.transpose() * out.block - Mat::Identity(n2, n2)).norm();
  }
  const Mat J = standard_j(n2);
  out.residual_commute_j = (out.block * J - J * out.block).norm() / scale;

  if (out.residual_offdiag > tol || out.residual_equal > tol ||
      out.residual_orthogonal > tol || out.residual_commute_j > tol) {
    throw HopfError(ErrorCode::BLOCK_STRUCTURE_VIOLATION,
                    "generator does not act block-diagonally on the frame");
  }
  return out;
}

}  // namespace hopf
