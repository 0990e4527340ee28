#pragma once

#include <array>
#include <functional>

#include "hopf/canonical.hpp"
#include "hopf/poly.hpp"

namespace hopf {

/// Jet in frame coordinates after the circle normalization step: cubic part
/// removed by a Lie transform, quartic part averaged.  Residuals record how
/// well the homological equations were solved.
struct NormalizedJet {
  PolyJet jet;
  PolyJet chi3;  // cubic generator of the Lie transform
  int n = 0;
  double nu0 = 0.0;
  double lambda0 = 0.0;
  double homological_residual = 0.0;
  double invariance_residual = 0.0;
};

/// Rotation diag(e^{theta J}, e^{theta J}) on 4n frame coordinates,
/// e^{theta J} = cos(theta) I + sin(theta) J.
Mat frame_rotation(int n, double theta);

/// Average over the 16-point circle subgroup.  Exact for any jet of total
/// degree <= 4 (trigonometric degree < 16).
PolyJet circle_average(const PolyJet& p, int n);

/// Normalizes a frame-coordinate jet with quadratic part centered at the
/// 1:-1 linearization for lambda = lambda0.  Throws HOMOLOGICAL_RESIDUAL when
/// the cubic defect or the final quartic invariance defect exceeds tol
/// relative to the jet scale.
NormalizedJet equivariant_normalize(const PolyJet& frame_jet, int n,
                                    double nu0, double lambda0,
                                    double tol = 1e-9);

/// Coefficients of the quadratic deformation
///   d^2 h_lambda(0) = sigma E1 + rho E2 + tau E3 + psi E4,
/// with E1 = diag(I, 0), E2 = diag(0, I), E3 = [[0, I], [I, 0]] and
/// E4 = [[0, J], [-J, 0]].  At lambda0 the values are (0, -1, 0, nu0).
struct HessianCoefficients {
  LambdaPoly sigma, rho, tau, psi;
  int n = 0;
  double nu0 = 0.0;
  double lambda0 = 0.0;
  double sigma0 = 0.0, rho0 = 0.0, tau0 = 0.0, psi0 = 0.0;
  double sigma_prime = 0.0, rho_prime = 0.0, tau_prime = 0.0, psi_prime = 0.0;
  double fit_residual = 0.0;
  double fd_residual = 0.0;  // central-difference check of the derivatives

  double f1(double lambda) const {
    double s = sigma.eval(lambda), r = rho.eval(lambda), t = tau.eval(lambda);
    return r * s - t * t;
  }
};

/// Projects the quadratic part onto the E1..E4 basis (Frobenius-orthogonal).
/// Throws FIT_RESIDUAL_EXCEEDED when the quadratic part leaves the span.
HessianCoefficients extract_coefficients(const NormalizedJet& nj,
                                         double tol = 1e-8);

/// The eigenvalue quadruplet of the reduced linearization,
/// mu in { +-i psi +- sqrt(tau^2 - rho sigma) }; each value carries
/// multiplicity n in the 4n-dimensional system.
std::array<Complex, 4> eigenvalues_closed_form(double sigma, double rho,
                                               double tau, double psi);

enum class Classification { COLLISION_SPLIT, NO_EVENT };

const char* to_string(Classification c);

struct KreinVerdict {
  Classification classification = Classification::NO_EVENT;
  bool f1_sign_change = false;
  double sigma_prime = 0.0;
};

/// Collision-and-split test: f1 = rho sigma - tau^2 changes sign across
/// lambda0 and the transversality |sigma'| clears h4_tol.  Throws NO_ROOT
/// when f1 does not change sign on [lo, hi].
KreinVerdict krein_classify(const HessianCoefficients& c, double lo, double hi,
                            double h4_tol = 1e-8);

struct HopfEvent {
  double lambda_star = 0.0;
  double nu_star = 0.0;
  Classification classification = Classification::NO_EVENT;
};

/// Bisection on the appearance of off-axis eigenvalues of A(lambda).
/// nu_star is the merged-cluster frequency estimated on the last
/// pre-collision iterate (the symmetric mean cancels the sqrt splitting).
/// Throws NO_ROOT when [lo, hi] does not bracket the event.
HopfEvent locate_collision(const std::function<Mat(double)>& A_of_lambda,
                           double lo, double hi, double tol = 1e-10);

}  // namespace hopf
