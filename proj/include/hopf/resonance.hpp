#pragma once

#include <string>
#include <vector>

#include "hopf/linalg.hpp"

namespace hopf {

/// Symmetry data in ambient coordinates: finite generators act as matrices,
/// continuous generators are Lie-algebra elements (one-parameter subgroups
/// exp(t*g)).  All generators must preserve the symplectic form.
struct GroupData {
  std::vector<Mat> finite_generators;
  std::vector<Mat> algebra_generators;
  std::vector<std::string> finite_names;
  std::vector<std::string> algebra_names;
};

/// Resonance subspace attached to +-i*k*nu0 eigenvalue clusters.
struct ResonanceData {
  Mat basis;            // ambient x dim, orthonormal columns spanning U
  Mat A_restricted;     // restriction of A to U in basis coordinates
  Mat As_restricted;    // restriction of the semisimple part
  Mat An_restricted;    // restriction of the nilpotent part
  Mat omega_restricted; // pullback of the form to U
  double nu0 = 0.0;
  double period = 0.0;  // 2*pi/nu0
  int kmax = 0;
  double spectral_tol = 0.0;
  std::vector<int> harmonics;  // the k with +-i*k*nu0 present

  int dim() const { return static_cast<int>(basis.cols()); }
};

/// Direct sum of the generalized eigenspaces whose eigenvalues lie within
/// spectral_tol*||A|| of i*k*nu0 for integer 1 <= |k| <= kmax.  Throws
/// NOT_RESONANT when no cluster matches +-i*nu0 itself, DEGENERATE_FORM when
/// the restricted form is singular.
ResonanceData resonance_space(const Mat& A, const Mat& omega, double nu0,
                              double spectral_tol = 1e-7, int kmax = 0);

/// Linearized circle action on U in basis coordinates: exp((theta/nu0) A_s).
Mat s1_action(const ResonanceData& R, double theta);

/// Momentum map of the circle action at v (U coordinates):
/// J(v) = (1/(2 nu0)) * omega(A_s v, v).
double momentum_map_J(const ResonanceData& R, const Vec& v);

/// Hessian of the momentum map in U coordinates: -Omega_U As_U / nu0.
Mat momentum_hessian(const ResonanceData& R);

struct EquivarianceReport {
  double max_commutator = 0.0;   // sup over generators of ||[g, A_s]||/scale
  double max_subspace = 0.0;     // sup of ||(I - P_U) g B||/scale
  double max_form = 0.0;         // sup of ||g^T Omega g - Omega||/scale
  bool ok(double tol = 1e-8) const {
    return max_commutator <= tol && max_subspace <= tol && max_form <= tol;
  }
};

/// Verifies that every generator preserves omega, commutes with A_s and
/// leaves U invariant.  Finite generators are used as matrices, algebra
/// generators through their infinitesimal conditions.
EquivarianceReport verify_equivariance(const ResonanceData& R, const Mat& A,
                                       const Mat& omega, const GroupData& G);

}  // namespace hopf
