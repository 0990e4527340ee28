#pragma once

#include <array>
#include <string>

#include "hopf/poly.hpp"
#include "hopf/resonance.hpp"

namespace hopf {

/// One-parameter family of invariant Hamiltonians on (R^d, omega) together
/// with its symmetry data.  The jet depends polynomially on the parameter.
struct HamiltonianFamily {
  std::string name;
  PolyJet jet;
  Mat omega;
  GroupData group;
};

/// Two planar particles in a rotating trap coupled through a magnetic term.
/// Phase space R^8 ordered (q11, q12, q21, q22, p11, p12, p21, p22); the
/// family parameter is the spring constant k.  The linear part passes
/// through a 1:-1 resonance at k = gamma^2/mass with frequency gamma/mass.
struct OscillatorParams {
  double mass = 1.0;
  double gamma = 1.0;
  double eps = 0.05;  // strength of the default quartic interaction

  double k_critical() const { return gamma * gamma / mass; }
  double nu_critical() const { return gamma / mass; }
};

/// eps * (q11^2 + q12^2)^2, rotation and reflection invariant.
PolyJet oscillator_default_interaction(double eps);

/// Builds the oscillator family with an explicit quartic interaction (pass a
/// zero jet of dimension 8 for the purely quadratic problem).  Symmetry:
/// simultaneous rotation of all planar pairs (algebra generator) plus the
/// reflection diag(1,-1,1,-1,...).
HamiltonianFamily coupled_oscillator_family(const OscillatorParams& P,
                                            const PolyJet& interaction);

/// Same with the default interaction at strength P.eps.
HamiltonianFamily coupled_oscillator_family(const OscillatorParams& P);

/// Closed-form linearization A(k), used as an independent cross-check on
/// the jet-derived matrix.
Mat oscillator_linearization(const OscillatorParams& P, double k);

/// The four eigenvalues of A(k):
///   mu = +- (1/m) sqrt(k m - 2 gamma^2 +- 2 gamma sqrt(gamma^2 - k m)),
/// each with multiplicity two.  Order: (+,+), (-,+), (+,-), (-,-) where the
/// first sign is the overall one and the second picks the inner branch.
std::array<Complex, 4> oscillator_eigenvalues(const OscillatorParams& P,
                                              double k);

/// Generator of the diagonal rotation action (ambient 8x8).
Mat oscillator_rotation_generator();

/// Conserved angular momentum of the rotation action as a jet:
/// K(v) = q11 p12 - q12 p11 + q21 p22 - q22 p21.
PolyJet oscillator_momentum();

/// Complex eigencoordinates on a 4-dimensional kernel block carrying an
/// O(2) = SO(2) x| Z_2 action.  In coordinates w_k = v_k + i v_{k+2} the
/// temporal circle e^{theta J} becomes multiplication by e^{i theta}; the
/// basis (e1, e2) diagonalizes the rotation generator with weights
/// (-i kappa, +i kappa) and the reflection swaps z_1 and z_2.  The cubic
/// term of the reduced equation reads (a pi_1 + b pi_2) z_1 with
/// pi_j = |z_j|^2.
struct ComplexFrameO2 {
  CVec e1;  // weight -i kappa, unit
  CVec e2;  // tau * e1, weight +i kappa
  double kappa = 0.0;
  double a = 0.0;
  double b = 0.0;
  double fit_residual = 0.0;     // quartic not a function of pi_1, pi_2
  double weight_residual = 0.0;  // e2 fails to carry weight +i kappa
  double tau_residual = 0.0;     // reflection fails to swap the pair

  /// Real kernel vector with coordinates z_1, z_2.
  Vec embed(Complex z1, Complex z2) const;
  /// Inverse of embed.
  std::array<Complex, 2> coords(const Vec& v0) const;
};

/// Builds the complex frame from the kernel blocks of the rotation generator
/// and the reflection (both must commute with J = standard_j) and fits the
/// invariant quartic c20 (pi_1^2 + pi_2^2) + c11 pi_1 pi_2, giving a = 4 c20
/// and b = 2 c11.  quartic_v0 is a jet on the kernel block, evaluated at
/// lambda0.  Throws DEGENERATE_COEFFICIENTS when the rotation weight
/// vanishes and FIT_RESIDUAL_EXCEEDED when the quartic leaves the
/// invariant ring by more than fit_tol.
ComplexFrameO2 complex_frame_o2(const Mat& xi_v0, const Mat& tau_v0,
                                const PolyJet& quartic_v0, double lambda0,
                                double fit_tol = 1e-8);

}  // namespace hopf
