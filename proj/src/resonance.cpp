#include "hopf/resonance.hpp"

#include <algorithm>
#include <cmath>

namespace hopf {

ResonanceData resonance_space(const Mat& A, const Mat& omega, double nu0,
                              double spectral_tol, int kmax) {
  require_symplectic_form(omega);
  if (nu0 <= 0.0) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "nu0 must be positive");
  }
  const int n = static_cast<int>(A.rows());
  const double scale = std::max(A.norm(), 1e-300);
  const double tol = spectral_tol * scale;
  if (kmax <= 0) {
    kmax = static_cast<int>(std::ceil(scale / nu0)) + 1;
  }

  // Cluster at the caller's spectral scale: near a collision the quadruplet
  // must merge into one conjugate pair, with the splitting left in A_n.
  JordanChevalley jc = jordan_chevalley(A, spectral_tol);

  // Pick the clusters sitting on the +-i*k*nu0 ladder.
  std::vector<int> member;
  std::vector<int> harmonics;
  bool base_present = false;
  for (size_t c = 0; c < jc.cluster_values.size(); ++c) {
    const Complex mu = jc.cluster_values[c];
    for (int k = 1; k <= kmax; ++k) {
      if (std::abs(mu - Complex(0.0, k * nu0)) < tol ||
          std::abs(mu - Complex(0.0, -k * nu0)) < tol) {
        member.push_back(static_cast<int>(c));
        if (std::find(harmonics.begin(), harmonics.end(), k) ==
            harmonics.end()) {
          harmonics.push_back(k);
        }
        if (k == 1) base_present = true;
        break;
      }
    }
  }
  if (!base_present) {
    throw HopfError(ErrorCode::NOT_RESONANT,
                    "no eigenvalue cluster at +-i*nu0");
  }
  std::sort(harmonics.begin(), harmonics.end());

  // Real span of the selected generalized eigenspaces: since member clusters
  // come in conjugate pairs, ker applied to the real matrix products is real.
  // Build it from the semisimple projector structure: U = sum of the
  // nullspaces of prod_c (A - mu_c)^{m_c} over member clusters, computed on
  // the real form via the real polynomial with conjugate roots.
  Mat M = Mat::Identity(n, n);
  for (int c : member) {
    const Complex mu = jc.cluster_values[c];
    const int m = static_cast<int>(jc.clusters[c].size());
    Mat factor;
    if (std::abs(mu.imag()) < tol) {
      factor = (A - mu.real() * Mat::Identity(n, n)) / scale;
    } else if (mu.imag() > 0.0) {
      // Pair (mu, conj mu) handled once through the real quadratic factor.
      factor = (A * A - 2.0 * mu.real() * A +
                std::norm(mu) * Mat::Identity(n, n)) /
               (scale * scale);
    } else {
      continue;  // conjugate partner already covered
    }
    for (int k = 0; k < m; ++k) M = M * factor;
  }

  // Nullspace dimension equals the summed algebraic multiplicities.
  int dim = 0;
  for (int c : member) dim += static_cast<int>(jc.clusters[c].size());
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (dim < n && sv(n - dim - 1) < 1e-6 * std::max(sv(0), 1e-300)) {
    throw HopfError(ErrorCode::CLUSTER_AMBIGUOUS,
                    "resonance subspace dimension is ill determined");
  }
  Mat B = svd.matrixV().rightCols(dim);

  ResonanceData out;
  out.basis = B;
  out.A_restricted = B.transpose() * A * B;
  out.As_restricted = B.transpose() * jc.semisimple * B;
  out.An_restricted = B.transpose() * jc.nilpotent * B;
  out.omega_restricted = B.transpose() * omega * B;
  out.nu0 = nu0;
  out.period = 2.0 * M_PI / nu0;
  out.kmax = kmax;
  out.spectral_tol = spectral_tol;
  out.harmonics = harmonics;

  // Invariance of U under A; restriction is only meaningful if it holds.
  const Mat proj = B * B.transpose();
  const double inv_res = ((Mat::Identity(n, n) - proj) * A * B).norm() / scale;
  if (inv_res > 1e-8) {
    throw HopfError(ErrorCode::CLUSTER_AMBIGUOUS,
                    "resonance subspace is not A-invariant");
  }
  require_symplectic_form(out.omega_restricted);

  // U must coincide with the fixed space of the period-T semisimple flow.
  const Mat K = expm(Mat(out.period * jc.semisimple)) - Mat::Identity(n, n);
  if ((K * B).norm() > 1e-6 * std::max(1.0, K.norm())) {
    throw HopfError(ErrorCode::NOT_RESONANT,
                    "basis not fixed by the period map of A_s");
  }
  return out;
}

Mat s1_action(const ResonanceData& R, double theta) {
  return expm(Mat((theta / R.nu0) * R.As_restricted));
}

double momentum_map_J(const ResonanceData& R, const Vec& v) {
  return symplectic_product(R.omega_restricted, R.As_restricted * v, v) /
         (2.0 * R.nu0);
}

Mat momentum_hessian(const ResonanceData& R) {
  Mat H = -R.omega_restricted * R.As_restricted / R.nu0;
  return 0.5 * (H + H.transpose());
}

EquivarianceReport verify_equivariance(const ResonanceData& R, const Mat& A,
                                       const Mat& omega, const GroupData& G) {
  EquivarianceReport rep;
  const int n = static_cast<int>(A.rows());
  const Mat proj = Mat::Identity(n, n) - R.basis * R.basis.transpose();
  const double ascale = std::max(1.0, A.norm());

  auto absorb = [&](const Mat& g, bool algebra) {
    const double gscale = std::max(1.0, g.norm());
    rep.max_commutator = std::max(
        rep.max_commutator, (g * A - A * g).norm() / (gscale * ascale));
    rep.max_subspace =
        std::max(rep.max_subspace, (proj * g * R.basis).norm() / gscale);
    if (algebra) {
      // exp(t g) symplectic for all t  <=>  Omega g + g^T Omega = 0.
      rep.max_form = std::max(
          rep.max_form,
          (omega * g + g.transpose() * omega).norm() /
              (gscale * std::max(1.0, omega.norm())));
    } else {
      rep.max_form = std::max(
          rep.max_form, (g.transpose() * omega * g - omega).norm() /
                            std::max(1.0, omega.norm()));
    }
  };
  for (const Mat& g : G.finite_generators) absorb(g, false);
  for (const Mat& g : G.algebra_generators) absorb(g, true);
  return rep;
}

}  // namespace hopf
