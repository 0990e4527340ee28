#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "hopf/branches.hpp"
#include "hopf/linalg.hpp"

namespace hopf {

/// Rotations about the coordinate axes (3x3).
Mat rotation_x(double angle);
Mat rotation_y(double angle);
Mat rotation_z(double angle);

/// Weight basis of the complexified traceless symmetric 3x3 matrices under
/// conjugation by z-axis rotations: rho_R(B_m) = e^{i m phi} B_m for
/// R = rotation_z(phi), with m in {-2,...,2} and B_{-m} = conj(B_m).
CMat so3_weight_basis(int m);

/// Coordinates z with M = sum_m z_m B_m; index 0..4 corresponds to
/// m = -2..2.  Inverse of matrix_from_weights.
CVec weights_from_matrix(const CMat& M);
CMat matrix_from_weights(const CVec& z);

/// 5x5 complex matrix of rho_R(M) = R^T M R in weight coordinates.
CMat so3_rep5(const Mat& R);

/// Real 10x10 matrix of the twisted element (R, theta): M -> e^{i theta}
/// rho_R(M) on the complexified space, acting on stacked (Re z, Im z).
Mat so3_twisted_element(const Mat& R, double theta);

/// The equivariant cubic family on complexified traceless symmetric
/// matrices:
///   C(M) = b1 tr(M conj(M)) M + b2 tr(M^2) conj(M)
///        + b3 (M^2 conj(M) + conj(M) M^2 - (2/3) tr(M^2 conj(M)) I).
CMat so3_cubic(const CMat& M, double b1, double b2, double b3);

/// Rotation weights (1, -2) of the coordinates (z1, z2) on the fixed-point
/// space {z1 B_1 + z2 B_{-2}} of the twisted Z_3 subgroup generated by
/// (rotation_z(2 pi/3), -2 pi/3).
std::array<int, 2> z3_fixed_weights();

/// Restriction of the cubic to the twisted Z_3 fixed-point space, written
/// as dz_i ~ sum_j c_hat(i,j) pi_j z_i with pi_j = |z_j|^2.
struct Z3Analysis {
  Mat c_hat_symbolic;   // 4 [[b1 + b3/2, b1 + b3], [b1 + b3, b1]]
  Mat c_hat_sampled;    // least-squares fit from evaluated cubics
  double agreement = 0.0;    // max relative difference of the two routes
  double leak_residual = 0.0;  // cubic component outside span{B_1, B_-2}
  Vec delta;            // (c11 - c21, c12 - c22) = (-2 b3, 4 b3)
  bool rank_ok = false;  // delta is nonzero, the torus theorem applies
  double c1 = -2.0;     // residual SO(2) weight ratio on the fixed space
};

Z3Analysis so3_z3_analysis(double b1, double b2, double b3);

/// Branch mechanism available on a fixed-point space.
enum class BranchVerdict {
  O2_REDUCTION,     // residual O(2) x S^1, two-frequency RPOs
  TORUS_REDUCTION,  // residual SO(2) x S^1, torus reduction applies
  PERIODIC_ONLY,    // normalizer forces periodic solutions
  OUT_OF_RANGE,     // fixed space too large for the reduction theorems
};

const char* to_string(BranchVerdict v);

/// Entry of the isotropy lattice of SO(3) x S^1 acting on the complexified
/// five-dimensional representation.  Generators are (rotation, phase) pairs
/// realizing the subgroup through so3_twisted_element.
struct IsotropyRecord {
  std::string name;
  std::vector<std::pair<Mat, double>> generators;
  int fixed_dim = 0;
  std::string normalizer_label;
  BranchVerdict verdict = BranchVerdict::OUT_OF_RANGE;
  bool has_quotient = false;
  NormalizerQuotient quotient = NormalizerQuotient::S1_TRIVIAL;
  int count = 0;  // maximal-isotropy branches inside the fixed space
};

/// The isotropy classes with nontrivial fixed spaces, largest symmetry
/// first.
std::vector<IsotropyRecord> so3_isotropy_lattice();

}  // namespace hopf
