#pragma once

#include "hopf/resonance.hpp"

namespace hopf {

enum class CaseSign { PLUS, MINUS };

const char* to_string(CaseSign c);

/// Symplectic frame on the resonance space bringing the linearization to the
/// nilpotent 1:-1 normal form.  Columns of `basis` are frame vectors in U
/// coordinates; `ambient` composes with the resonance basis.  In frame
/// coordinates T^{-1} A T = [[nu J, I], [0, nu J]] and T^T Omega T = +-J_{4n}
/// (sign PLUS / MINUS).  `h_sign` is the Hamiltonian flip that normalizes the
/// MINUS case: (omega, h) -> (-omega, -h) leaves the vector field unchanged
/// while giving the PLUS-case Hessian shape.
struct CanonicalFrame {
  int n = 0;
  double nu0 = 0.0;
  Mat basis;        // T, U coords -> frame coords change of basis
  Mat basis_inv;    // T^{-1}
  Mat ambient;      // R.basis * T (ambient x 4n)
  Mat omega_frame;  // T^T Omega_U T
  CaseSign case_sign = CaseSign::PLUS;
  double h_sign = 1.0;
  double residual_A = 0.0;
  double residual_omega = 0.0;
  double metric_residual = 0.0;  // invariance defect of the averaged metric
};

/// The frame-coordinate linearization target [[nu J, I], [0, nu J]].
Mat canonical_linearization(int n, double nu0);

/// Equivariant Williamson-type frame for the degenerate 1:-1 pair.
/// Requires dim U = 4n, spectrum {+-i nu0} with algebraic multiplicity 2n
/// and geometric multiplicity n each (H3); otherwise throws H3_VIOLATION.
/// Group generators (ambient coordinates) are used to average an invariant
/// metric so that the frame carries the symmetry in block-diagonal form.
CanonicalFrame williamson_frame(const ResonanceData& R, const GroupData& G,
                                double frame_tol = 1e-8);

/// Kernel/range splitting of L = d^2(h - nu0 J)(0) in frame coordinates.
struct Splitting {
  Mat v0_basis;    // U coords, 4n x 2n, frame columns 1..2n
  Mat v1_basis;    // U coords, 4n x 2n
  Mat projection;  // U coords projector onto V0 along V1
  Mat L_frame;     // diag(0, -I) in frame coordinates
};

Splitting split_v0_v1(const CanonicalFrame& F);

/// Result of transporting a symmetry generator into frame coordinates.
struct BlockAction {
  Mat block;  // 2n x 2n action on V0 (equal to the V1 block)
  double residual_offdiag = 0.0;
  double residual_equal = 0.0;
  double residual_orthogonal = 0.0;  // or skew-symmetry for algebra elements
  double residual_commute_j = 0.0;
};

/// Checks that g (U coordinates) acts as diag(a, a) in frame coordinates with
/// a orthogonal (finite) or skew (algebra) and [a, J] = 0.  Throws
/// BLOCK_STRUCTURE_VIOLATION above tol.
BlockAction check_block_action(const CanonicalFrame& F, const Mat& g_U,
                               bool algebra = false, double tol = 1e-6);

}  // namespace hopf
