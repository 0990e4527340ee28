#pragma once

#include "hopf/normalform.hpp"

namespace hopf {

/// Inputs of the reduced bifurcation equation on V0 (frame coordinates,
/// V0 = first 2n components, V1 = last 2n).  All maps below assume the
/// normalized picture: omega = J_{4n}, quadratic shape sigma..psi.
struct ReductionData {
  int n = 0;
  double nu0 = 0.0;
  double lambda0 = 0.0;
  double sigma_prime = 0.0;
  double psi_prime = 0.0;
  HessianCoefficients coeffs;
  PolyJet quartic_v0;  // Phi, quartic part at lambda0 restricted to V0
  PolyJet normalized;  // full normalized jet, lambda-dependent
};

ReductionData build_reduction(const NormalizedJet& nj,
                              const HessianCoefficients& coeffs);

/// d^2(h - zeta J)(0) at lambda0: [[0, (nu0 - zeta) J], [-(nu0 - zeta) J, -I]].
Mat l_operator(const ReductionData& red, double zeta);

/// Quadratic momentum of the frame circle action, J(v) = 1/2 v^T M v with
/// M = [[0, J], [-J, 0]]; rotation momentum K^xi uses xi in place of J.
Mat momentum_hessian_frame(int n);
Mat momentum_hessian_xi(const Mat& xi_hat);

/// Slave-variable linearization: v1(v0) = D v0 + O(|v0|^3) with
/// D = -(tau/rho) I - ((nu0 + alpha - psi)/rho) J - xi/rho, coefficients
/// evaluated at lambda.  Throws RHO_SINGULAR when |rho(lambda)| < 1e-12.
Mat v1_derivative(const ReductionData& red, double lambda, double alpha,
                  const Mat& xi_hat);

/// Derivative at v0 = 0 of the bifurcation map:
/// [sigma rho - tau^2 - (zeta - psi)^2]/rho I + 2 (zeta - psi)/rho J xi
///   + xi^2/rho, zeta = nu0 + alpha.
Mat db_at_zero(const ReductionData& red, double lambda, double alpha,
               const Mat& xi_hat);

/// Leading part of the bifurcation map in (delta, alpha, xi, v0):
/// (delta sigma' + alpha^2 - 2 psi' alpha delta) v0 - xi^2 v0
///   - 2 alpha J xi v0 + 2 psi' delta J xi v0 + grad Phi(v0).
Vec principal_part_b(const ReductionData& red, const Vec& v0, double delta,
                     double alpha, const Mat& xi_hat);

/// Potential for the principal part (requires [J, xi] = 0):
/// g = 1/2 (delta sigma' + alpha^2 - 2 psi' alpha delta) |v0|^2
///     - 1/2 <xi^2 v0, v0> - (alpha - psi' delta) <J xi v0, v0> + Phi(v0),
/// with grad g = principal_part_b.
double bifurcation_potential(const ReductionData& red, const Vec& v0,
                             double delta, double alpha, const Mat& xi_hat);

/// Solves <B(v0; delta, alpha, xi), v0> = 0 for delta (the map is linear in
/// delta, so Newton converges in one step).  Returns delta = lambda - lambda0.
double solve_lambda(const ReductionData& red, const Vec& v0, double alpha,
                    const Mat& xi_hat, int max_iter = 50);

/// Tangential component of B on the unit sphere: G = B - <B, u0> u0.
Vec sphere_field(const ReductionData& red, const Vec& u0, double delta,
                 double alpha, const Mat& xi_hat);

/// Newton solve of the slave block: the V1 components of
/// grad(h_lambda - zeta J - K^xi)(v0 + v1) = 0, zeta = nu0 + alpha.
/// Independent of the linearized formula above; used as its oracle.
Vec v1_solve(const ReductionData& red, const Vec& v0, double lambda,
             double alpha, const Mat& xi_hat, int max_iter = 50);

}  // namespace hopf
