#include "hopf/reduction.hpp"

#include <cmath>

namespace hopf {

namespace {

void require_rho(double rho) {
  if (std::abs(rho) < 1e-12) {
    throw HopfError(ErrorCode::RHO_SINGULAR,
                    "rho(lambda) vanishes, slave solve undefined");
  }
}

}  // namespace

ReductionData build_reduction(const NormalizedJet& nj,
                              const HessianCoefficients& coeffs) {
  ReductionData red;
  red.n = nj.n;
  red.nu0 = nj.nu0;
  red.lambda0 = nj.lambda0;
  red.sigma_prime = coeffs.sigma_prime;
  red.psi_prime = coeffs.psi_prime;
  red.coeffs = coeffs;
  red.normalized = nj.jet;

  const int half = 2 * nj.n;
  Mat embed = Mat::Zero(4 * nj.n, half);
  embed.topLeftCorner(half, half) = Mat::Identity(half, half);
  red.quartic_v0 =
      nj.jet.degree_part(4).at_lambda(nj.lambda0).compose_linear(embed);
  return red;
}

Mat l_operator(const ReductionData& red, double zeta) {
  const int half = 2 * red.n;
  const Mat J = standard_j(half);
  Mat L = Mat::Zero(4 * red.n, 4 * red.n);
  L.topRightCorner(half, half) = (red.nu0 - zeta) * J;
  L.bottomLeftCorner(half, half) = -(red.nu0 - zeta) * J;
  L.bottomRightCorner(half, half) = -Mat::Identity(half, half);
  return L;
}

Mat momentum_hessian_frame(int n) {
  return momentum_hessian_xi(standard_j(2 * n));
}

Mat momentum_hessian_xi(const Mat& xi_hat) {
  const int half = static_cast<int>(xi_hat.rows());
  Mat M = Mat::Zero(2 * half, 2 * half);
  M.topRightCorner(half, half) = xi_hat;
  M.bottomLeftCorner(half, half) = -xi_hat;
  return M;
}

Mat v1_derivative(const ReductionData& red, double lambda, double alpha,
                  const Mat& xi_hat) {
  const int half = 2 * red.n;
  const double rho = red.coeffs.rho.eval(lambda);
  require_rho(rho);
  const double tau = red.coeffs.tau.eval(lambda);
  const double psi = red.coeffs.psi.eval(lambda);
  const double zeta = red.nu0 + alpha;
  return -(tau / rho) * Mat::Identity(half, half) -
         ((zeta - psi) / rho) * standard_j(half) - xi_hat / rho;
}

Mat db_at_zero(const ReductionData& red, double lambda, double alpha,
               const Mat& xi_hat) {
  const int half = 2 * red.n;
  const double rho = red.coeffs.rho.eval(lambda);
  require_rho(rho);
  const double sigma = red.coeffs.sigma.eval(lambda);
  const double tau = red.coeffs.tau.eval(lambda);
  const double psi = red.coeffs.psi.eval(lambda);
  const double zeta = red.nu0 + alpha;
  const double d = zeta - psi;
  return ((sigma * rho - tau * tau - d * d) / rho) *
             Mat::Identity(half, half) +
         (2.0 * d / rho) * (standard_j(half) * xi_hat) +
         xi_hat * xi_hat / rho;
}

Vec principal_part_b(const ReductionData& red, const Vec& v0, double delta,
                     double alpha, const Mat& xi_hat) {
  const int half = 2 * red.n;
  const Mat J = standard_j(half);
  const double radial =
      delta * red.sigma_prime + alpha * alpha -
      2.0 * red.psi_prime * alpha * delta;
  Vec b = radial * v0;
  b -= xi_hat * (xi_hat * v0);
  b -= 2.0 * (alpha - red.psi_prime * delta) * (J * (xi_hat * v0));
  b += red.quartic_v0.gradient(v0, red.lambda0);
  return b;
}

double bifurcation_potential(const ReductionData& red, const Vec& v0,
                             double delta, double alpha, const Mat& xi_hat) {
  const int half = 2 * red.n;
  const Mat J = standard_j(half);
  const Vec xv = xi_hat * v0;
  const double radial =
      delta * red.sigma_prime + alpha * alpha -
      2.0 * red.psi_prime * alpha * delta;
  return 0.5 * radial * v0.squaredNorm() - 0.5 * v0.dot(xi_hat * xv) -
         (alpha - red.psi_prime * delta) * v0.dot(J * xv) +
         red.quartic_v0.eval(v0, red.lambda0);
}

double solve_lambda(const ReductionData& red, const Vec& v0, double alpha,
                    const Mat& xi_hat, int max_iter) {
  const double scale = std::max(1.0, v0.squaredNorm());
  double delta = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double f = principal_part_b(red, v0, delta, alpha, xi_hat).dot(v0);
    if (std::abs(f) < 1e-12 * scale) return delta;
    const double f1 = principal_part_b(red, v0, delta + 1.0, alpha, xi_hat)
                          .dot(v0) -
                      f;
    if (std::abs(f1) < 1e-14 * scale) break;
    delta -= f / f1;
  }
  const double f = principal_part_b(red, v0, delta, alpha, xi_hat).dot(v0);
  if (std::abs(f) < 1e-12 * scale) return delta;
  throw HopfError(ErrorCode::NEWTON_DIVERGED,
                  "radial equation has no lambda solution");
}

Vec sphere_field(const ReductionData& red, const Vec& u0, double delta,
                 double alpha, const Mat& xi_hat) {
  if (std::abs(u0.norm() - 1.0) > 1e-8) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "sphere field expects a unit vector");
  }
  const Vec b = principal_part_b(red, u0, delta, alpha, xi_hat);
  return b - b.dot(u0) * u0;
}

Vec v1_solve(const ReductionData& red, const Vec& v0, double lambda,
             double alpha, const Mat& xi_hat, int max_iter) {
  const int half = 2 * red.n;
  const int dim = 4 * red.n;
  const double zeta = red.nu0 + alpha;
  const Mat M = zeta * momentum_hessian_frame(red.n) +
                momentum_hessian_xi(xi_hat);
  const PolyJet& jet = red.normalized;

  Vec v = Vec::Zero(dim);
  v.head(half) = v0;
  const double scale = std::max(1e-8, v0.norm());

  auto residual = [&](const Vec& w) -> Vec {
    return (jet.gradient(w, lambda) - M * w).tail(half);
  };

  Vec v1 = Vec::Zero(half);
  for (int it = 0; it < max_iter; ++it) {
    Vec w = v;
    w.tail(half) += v1;
    Vec r = residual(w);
    if (r.norm() <= 1e-13 * scale) return v1;
    if (!r.allFinite() || r.norm() > 1e6 * scale) break;
    // Exact Jacobian of the V1 block with respect to v1.
    Mat Jac(half, half);
    for (int i = 0; i < half; ++i) {
      Vec row = jet.derivative(half + i).gradient(w, lambda);
      for (int j = 0; j < half; ++j) {
        Jac(i, j) = row(half + j) - M(half + i, half + j);
      }
    }
    v1 -= Jac.partialPivLu().solve(r);
  }
  Vec w = v;
  w.tail(half) += v1;
  if (residual(w).norm() <= 1e-13 * scale) return v1;
  throw HopfError(ErrorCode::NEWTON_DIVERGED, "slave solve did not converge");
}

}  // namespace hopf
