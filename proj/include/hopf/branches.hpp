#pragma once

#include <utility>

#include "hopf/reduction.hpp"

namespace hopf {

enum class OrbitType { PERIODIC, RPO };

const char* to_string(OrbitType t);

/// One root of the truncated bifurcation system on the fixed-point space.
/// alpha is the relative frequency detuning (zeta = nu0 (1 + alpha)), xi the
/// drift speed along the rotation generator.
struct BranchPrediction {
  OrbitType type = OrbitType::PERIODIC;
  double lambda = 0.0;
  double alpha = 0.0;
  double xi = 0.0;
  double pi1 = 0.0;  // |z1|^2
  double pi2 = 0.0;  // |z2|^2
  bool admissible = true;
};

/// Reflection-symmetric pair branch of the O(2) system with quartic
/// coefficients (a, b):
///   pi1 - pi2 = 4 nu0 alpha xi / (a - b),      pi1 + pi2 = r_sq,
///   lambda = lambda0 + (-(nu0 alpha)^2 + 2 nu0 alpha xi
///            - (a pi1 + b pi2)) / sigma_prime.
/// Throws DEGENERATE_COEFFICIENTS when a = b or a b = 0.
BranchPrediction o2_branch(double a, double b, double sigma_prime, double nu0,
                           double lambda0, double r_sq, double alpha,
                           double xi);

/// Same branch expressed through the single product p = alpha xi that the
/// splitting law depends on; the split used for the reported frequencies is
/// alpha = sign(p) sqrt(|p| / nu0), xi = sqrt(|p| nu0).
BranchPrediction o2_branch_product(double a, double b, double sigma_prime,
                                   double nu0, double lambda0, double r_sq,
                                   double product);

/// The (alpha, xi) convention used by o2_branch_product.
std::pair<double, double> o2_split_product(double product, double nu0);

struct TorusBranch {
  Vec pi;              // invariant amplitudes pi_1..pi_n
  double lambda = 0.0;
  bool admissible = true;
};

/// Maximal torus branch: effective frequencies psi_i (detuning folded in)
/// and cubic coupling c_hat give, for a prescribed pi_n > 0,
///   sum_{j<n} (c_ij - c_nj) pi_j = -(psi_i^2 - psi_n^2) - (c_in - c_nn) pi_n
/// for i < n, then lambda from row n.  Throws RANK_DEFICIENT when the
/// difference matrix loses rank.
TorusBranch torus_branch(const Vec& psi, const Mat& c_hat, double pi_n,
                         double sigma_prime, double nu0, double lambda0);

/// psi_j = xi_j + alpha for j < n and psi_n = sum_j c_j xi_j + alpha.
/// Throws CONDITION_VIOLATED when sum_j c_j = 1 (the reparameterization is
/// singular there).
Vec torus_frequencies(double alpha, const Vec& xi, const Vec& c);

enum class NormalizerQuotient { S1_TRIVIAL, S1_Z2, SU2 };

const char* to_string(NormalizerQuotient q);

/// Lower bound on the number of relative periodic orbits on the invariant
/// sphere S^{l-1} inside a fixed-point space of dimension l: l/2 when the
/// normalizer quotient is a plain circle, l/4 for circle-mod-Z2 and for the
/// quaternionic case.  Throws PARITY_VIOLATION when l is incompatible.
int maximal_isotropy_count(int l, NormalizerQuotient q);

/// Spatio-temporal element acting on V0 as rot(theta) g with
/// rot(theta) = cos(theta) I + sin(theta) J.
struct SpatioTemporalElement {
  Mat g;
  double theta = 0.0;
};

struct FixedSpaceData {
  Mat basis;                    // V0 coords x fixed dim, orthonormal
  std::vector<Mat> restricted;  // normalizer generators in basis coords
  Mat j_restricted;
  double projector_residual = 0.0;
};

/// Fixed-point subspace of the finite group generated by the given elements,
/// with normalizer generators transported into it.  Throws NONCONVERGENT when
/// the generated group does not close (cap 256), BLOCK_STRUCTURE_VIOLATION
/// when a normalizer element or J fails to preserve the fixed space.
FixedSpaceData fixed_point_restriction(
    const std::vector<SpatioTemporalElement>& generators,
    const std::vector<SpatioTemporalElement>& normalizer, double tol = 1e-8);

}  // namespace hopf
