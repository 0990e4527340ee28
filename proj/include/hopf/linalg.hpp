#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "hopf/errors.hpp"

namespace hopf {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// J_{2n} with block form [[0, -I_n], [I_n, 0]].
Mat standard_j(int two_n);

/// Canonical symplectic form on R^{2n}, ordered (q_1..q_n, p_1..p_n):
/// omega(u, v) = u^T Omega v with Omega = [[0, I_n], [-I_n, 0]].
Mat standard_omega(int two_n);

/// omega(u, v) for an explicit form matrix.
double symplectic_product(const Mat& omega, const Vec& u, const Vec& v);

/// Checks skew-symmetry and invertibility of a form matrix.
void require_symplectic_form(const Mat& omega, double tol = 1e-10);

/// A is infinitesimally symplectic when Omega*A + A^T*Omega = 0,
/// equivalently A = -Omega^{-1} H for symmetric H.
bool is_infinitesimally_symplectic(const Mat& A, const Mat& omega,
                                   double tol = 1e-10);

/// Hessian of the quadratic Hamiltonian generating v' = A v, i.e. the
/// symmetric H with A = -Omega^{-1} H.  Throws NOT_HAMILTONIAN when no
/// such H exists within tol.
Mat quadratic_hamiltonian(const Mat& A, const Mat& omega, double tol = 1e-10);

/// Scaling-and-squaring Pade approximant of exp(A).
Mat expm(const Mat& A);
CMat expm(const CMat& A);

struct JordanChevalley {
  Mat semisimple;       // A_s
  Mat nilpotent;        // A_n = A - A_s
  CVec eigenvalues;     // with multiplicity, cluster-averaged values
  std::vector<std::vector<int>> clusters;  // indices into eigenvalues
  std::vector<Complex> cluster_values;     // one representative per cluster
  double reconstruction_residual = 0.0;
  double commutator_residual = 0.0;
};

/// Additive decomposition A = A_s + A_n with A_s semisimple, A_n nilpotent,
/// [A_s, A_n] = 0.  Eigenvalues closer than cluster_tol * ||A|| are merged;
/// throws CLUSTER_AMBIGUOUS when distinct cluster means end up closer than
/// twice that threshold.
JordanChevalley jordan_chevalley(const Mat& A, double cluster_tol = 1e-7);

/// Orthonormal basis (columns) of the span of the columns of V.
Mat orthonormal_columns(const Mat& V, double tol = 1e-10);

/// Real basis obtained from a set of complex vectors closed under
/// conjugation: conjugate pairs contribute (Re, Im), real vectors just Re.
Mat realify_basis(const CMat& V, double tol = 1e-8);

/// Minimal-norm least-squares solve via complete orthogonal decomposition.
Mat solve_min_norm(const Mat& A, const Mat& B);
CMat solve_min_norm(const CMat& A, const CMat& B);

/// Relative spectral-norm distance, scale-aware.
double rel_err(const Mat& X, const Mat& Y);

}  // namespace hopf
