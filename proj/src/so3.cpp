#include "hopf/so3.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace hopf {

Mat rotation_x(double angle) {
  Mat R = Mat::Identity(3, 3);
  const double c = std::cos(angle), s = std::sin(angle);
  R(1, 1) = c;
  R(1, 2) = -s;
  R(2, 1) = s;
  R(2, 2) = c;
  return R;
}

Mat rotation_y(double angle) {
  Mat R = Mat::Identity(3, 3);
  const double c = std::cos(angle), s = std::sin(angle);
  R(0, 0) = c;
  R(0, 2) = s;
  R(2, 0) = -s;
  R(2, 2) = c;
  return R;
}

Mat rotation_z(double angle) {
  Mat R = Mat::Identity(3, 3);
  const double c = std::cos(angle), s = std::sin(angle);
  R(0, 0) = c;
  R(0, 1) = -s;
  R(1, 0) = s;
  R(1, 1) = c;
  return R;
}

CMat so3_weight_basis(int m) {
  const Complex i(0.0, 1.0);
  CMat B = CMat::Zero(3, 3);
  switch (m) {
    case 0:
      B(0, 0) = 1.0;
      B(1, 1) = 1.0;
      B(2, 2) = -2.0;
      return B;
    case 1:
    case -1:
      B(0, 2) = 1.0;
      B(2, 0) = 1.0;
      B(1, 2) = i;
      B(2, 1) = i;
      break;
    case 2:
    case -2:
      B(0, 0) = 1.0;
      B(1, 1) = -1.0;
      B(0, 1) = i;
      B(1, 0) = i;
      break;
    default:
      throw HopfError(ErrorCode::INVALID_ARGUMENT,
                      "weight index must lie in -2..2");
  }
  return m > 0 ? B : CMat(B.conjugate());
}

namespace {

CMat weight_basis_columns() {
  CMat cols(9, 5);
  for (int m = -2; m <= 2; ++m) {
    const CMat B = so3_weight_basis(m);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) cols(3 * r + c, m + 2) = B(r, c);
  }
  return cols;
}

}  // namespace

CVec weights_from_matrix(const CMat& M) {
  if (M.rows() != 3 || M.cols() != 3) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "expected a 3x3 matrix");
  }
  static const CMat cols = weight_basis_columns();
  CVec flat(9);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) flat(3 * r + c) = M(r, c);
  return cols.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(flat);
}

CMat matrix_from_weights(const CVec& z) {
  if (z.size() != 5) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "expected 5 weights");
  }
  CMat M = CMat::Zero(3, 3);
  for (int m = -2; m <= 2; ++m) M += z(m + 2) * so3_weight_basis(m);
  return M;
}

CMat so3_rep5(const Mat& R) {
  CMat out(5, 5);
  for (int m = -2; m <= 2; ++m) {
    const CMat moved = R.transpose() * so3_weight_basis(m) * R;
    out.col(m + 2) = weights_from_matrix(moved);
  }
  return out;
}

Mat so3_twisted_element(const Mat& R, double theta) {
  const CMat C = std::exp(Complex(0.0, theta)) * so3_rep5(R);
  Mat out(10, 10);
  out.topLeftCorner(5, 5) = C.real();
  out.topRightCorner(5, 5) = -C.imag();
  out.bottomLeftCorner(5, 5) = C.imag();
  out.bottomRightCorner(5, 5) = C.real();
  return out;
}

CMat so3_cubic(const CMat& M, double b1, double b2, double b3) {
  const CMat Mc = M.conjugate();
  const CMat M2 = M * M;
  const CMat mixed = M2 * Mc + Mc * M2;
  const Complex tr_mixed = (M2 * Mc).trace();
  return b1 * (M * Mc).trace() * M + b2 * M2.trace() * Mc +
         b3 * (mixed - (2.0 / 3.0) * tr_mixed * CMat::Identity(3, 3));
}

std::array<int, 2> z3_fixed_weights() { return {1, -2}; }

Z3Analysis so3_z3_analysis(double b1, double b2, double b3) {
  Z3Analysis out;
  out.c_hat_symbolic = Mat(2, 2);
  out.c_hat_symbolic << 4.0 * (b1 + 0.5 * b3), 4.0 * (b1 + b3),
      4.0 * (b1 + b3), 4.0 * b1;

  // Sample the cubic on the fixed space and refit the coefficient matrix.
  const double radii[3] = {0.6, 1.0, 1.3};
  const double phases[2] = {0.2, 1.1};
  std::vector<Vec> rows;
  std::vector<double> y1, y2;
  double leak = 0.0, imag_defect = 0.0, scale = 1.0;
  for (double r1 : radii)
    for (double r2 : radii)
      for (double a1 : phases)
        for (double a2 : phases) {
          const Complex z1 = r1 * std::exp(Complex(0.0, a1));
          const Complex z2 = r2 * std::exp(Complex(0.0, a2));
          const CMat M = z1 * so3_weight_basis(1) + z2 * so3_weight_basis(-2);
          const CVec w = weights_from_matrix(so3_cubic(M, b1, b2, b3));
          scale = std::max(scale, w.cwiseAbs().maxCoeff());
          leak = std::max({leak, std::abs(w(1)), std::abs(w(2)),
                           std::abs(w(4))});
          const Complex c1 = w(3) / z1;
          const Complex c2 = w(0) / z2;
          imag_defect = std::max({imag_defect, std::abs(c1.imag()),
                                  std::abs(c2.imag())});
          Vec row(2);
          row << r1 * r1, r2 * r2;
          rows.push_back(row);
          y1.push_back(c1.real());
          y2.push_back(c2.real());
        }
  const int ns = static_cast<int>(rows.size());
  Mat X(ns, 2);
  Vec b1v(ns), b2v(ns);
  for (int i = 0; i < ns; ++i) {
    X.row(i) = rows[i].transpose();
    b1v(i) = y1[i];
    b2v(i) = y2[i];
  }
  const auto svd = X.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.c_hat_sampled = Mat(2, 2);
  out.c_hat_sampled.row(0) = svd.solve(b1v).transpose();
  out.c_hat_sampled.row(1) = svd.solve(b2v).transpose();
  out.leak_residual = std::max(leak, imag_defect) / scale;

  const double ref = std::max(1.0, out.c_hat_symbolic.cwiseAbs().maxCoeff());
  out.agreement =
      (out.c_hat_symbolic - out.c_hat_sampled).cwiseAbs().maxCoeff() / ref;

  out.delta = Vec(2);
  out.delta << out.c_hat_symbolic(0, 0) - out.c_hat_symbolic(1, 0),
      out.c_hat_symbolic(0, 1) - out.c_hat_symbolic(1, 1);
  out.rank_ok = out.delta.lpNorm<Eigen::Infinity>() > 1e-12 * ref;
  return out;
}

const char* to_string(BranchVerdict v) {
  switch (v) {
    case BranchVerdict::O2_REDUCTION:
      return "O2_REDUCTION";
    case BranchVerdict::TORUS_REDUCTION:
      return "TORUS_REDUCTION";
    case BranchVerdict::PERIODIC_ONLY:
      return "PERIODIC_ONLY";
    case BranchVerdict::OUT_OF_RANGE:
      return "OUT_OF_RANGE";
  }
  return "?";
}

std::vector<IsotropyRecord> so3_isotropy_lattice() {
  const double pi = std::acos(-1.0);
  std::vector<IsotropyRecord> L;

  IsotropyRecord d2;
  d2.name = "D2";
  d2.generators = {{rotation_x(pi), 0.0}, {rotation_z(pi), 0.0}};
  d2.fixed_dim = 4;
  d2.normalizer_label = "D3 x S1";
  d2.verdict = BranchVerdict::PERIODIC_ONLY;
  L.push_back(d2);

  IsotropyRecord z4;
  z4.name = "Z4~";
  z4.generators = {{rotation_z(pi / 2.0), pi}};
  z4.fixed_dim = 4;
  z4.normalizer_label = "O(2) x S1";
  z4.verdict = BranchVerdict::O2_REDUCTION;
  z4.has_quotient = true;
  z4.quotient = NormalizerQuotient::S1_Z2;
  z4.count = maximal_isotropy_count(4, NormalizerQuotient::S1_Z2);
  L.push_back(z4);

  IsotropyRecord z2t = z4;
  z2t.name = "Z2~";
  z2t.generators = {{rotation_z(pi), -pi}};
  L.push_back(z2t);

  IsotropyRecord z3;
  z3.name = "Z3~";
  z3.generators = {{rotation_z(2.0 * pi / 3.0), -2.0 * pi / 3.0}};
  z3.fixed_dim = 4;
  z3.normalizer_label = "SO(2) x S1";
  z3.verdict = BranchVerdict::TORUS_REDUCTION;
  z3.has_quotient = true;
  z3.quotient = NormalizerQuotient::S1_TRIVIAL;
  z3.count = maximal_isotropy_count(4, NormalizerQuotient::S1_TRIVIAL);
  L.push_back(z3);

  IsotropyRecord z2;
  z2.name = "Z2";
  z2.generators = {{rotation_z(pi), 0.0}};
  z2.fixed_dim = 6;
  z2.normalizer_label = "O(2) x S1";
  z2.verdict = BranchVerdict::OUT_OF_RANGE;
  L.push_back(z2);

  IsotropyRecord triv;
  triv.name = "trivial";
  triv.fixed_dim = 10;
  triv.normalizer_label = "SO(3) x S1";
  triv.verdict = BranchVerdict::OUT_OF_RANGE;
  L.push_back(triv);

  return L;
}

}  // namespace hopf
