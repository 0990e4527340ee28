#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "hopf/reduction.hpp"

using namespace hopf;

namespace {

double phi_value(double c20, double c11, const Vec& v0) {
  double pi1 = v0(0) * v0(0) + v0(2) * v0(2);
  double pi2 = v0(1) * v0(1) + v0(3) * v0(3);
  return c20 * (pi1 * pi1 + pi2 * pi2) + c11 * pi1 * pi2;
}

}  // namespace

TEST_CASE("build_reduction carries the reduced data") {
  auto s = testfx::synthetic_system();
  CHECK(s.red.n == 2);
  CHECK(s.red.nu0 == doctest::Approx(1.1));
  CHECK(s.red.lambda0 == doctest::Approx(0.6));
  CHECK(s.red.sigma_prime == doctest::Approx(1.3));
  CHECK(s.red.psi_prime == doctest::Approx(0.4));
  CHECK(s.red.quartic_v0.dim() == 4);

  std::mt19937 gen(13);
  for (int trial = 0; trial < 10; ++trial) {
    Vec v0 = testfx::random_vec(gen, 4);
    CHECK(s.red.quartic_v0.eval(v0, s.red.lambda0) ==
          doctest::Approx(phi_value(0.2, -0.15, v0)).epsilon(1e-12));
  }
}

TEST_CASE("l_operator hits the block target") {
  auto s = testfx::synthetic_system();
  Mat l0 = l_operator(s.red, s.red.nu0);
  Mat expect = Mat::Zero(8, 8);
  expect.bottomRightCorner(4, 4) = -Mat::Identity(4, 4);
  CHECK(rel_err(l0, expect) < 1e-10);

  Mat l = l_operator(s.red, s.red.nu0 - 0.3);
  Mat ex = expect;
  ex.topRightCorner(4, 4) = 0.3 * standard_j(4);
  ex.bottomLeftCorner(4, 4) = -0.3 * standard_j(4);
  CHECK(rel_err(l, ex) < 1e-10);
}

TEST_CASE("momentum hessians of the circle and rotation actions") {
  Mat mf = momentum_hessian_frame(2);
  Mat expect = Mat::Zero(8, 8);
  expect.topRightCorner(4, 4) = standard_j(4);
  expect.bottomLeftCorner(4, 4) = -standard_j(4);
  CHECK(rel_err(mf, expect) == 0.0);

  Mat x = testfx::xi_unit_v0(0.7);
  Mat mx = momentum_hessian_xi(x);
  Mat ex = Mat::Zero(8, 8);
  ex.topRightCorner(4, 4) = x;
  ex.bottomLeftCorner(4, 4) = -x;
  CHECK(rel_err(mx, ex) == 0.0);

  // Both are Hessians of quadratics conserved by the linear flow at lambda0:
  // the momentum pairs V0 with V1 only, so it vanishes on each block alone.
  auto s = testfx::synthetic_system();
  std::mt19937 gen(3);
  for (int trial = 0; trial < 5; ++trial) {
    Vec v0 = testfx::random_vec(gen, 4);
    Vec lifted = Vec::Zero(8);
    lifted.head(4) = v0;
    CHECK(std::abs(0.5 * lifted.dot(mf * lifted)) < 1e-14);
    lifted.setZero();
    lifted.tail(4) = v0;
    CHECK(std::abs(0.5 * lifted.dot(mf * lifted)) < 1e-14);
  }
}

TEST_CASE("slave derivative at the event is the detuning rotation") {
  auto s = testfx::synthetic_system();
  Mat d = v1_derivative(s.red, s.red.lambda0, 0.1, Mat::Zero(4, 4));
  CHECK(rel_err(d, Mat(0.1 * standard_j(4))) < 1e-12);
  // Scale-free in nu0: a different fixture frequency gives the same block.
  auto s2 = testfx::synthetic_system(0.7);
  Mat d2 = v1_derivative(s2.red, s2.red.lambda0, 0.1, Mat::Zero(4, 4));
  CHECK(rel_err(d2, Mat(0.1 * standard_j(4))) < 1e-12);
}

TEST_CASE("slave derivative matches the Newton oracle to second order") {
  // Cross-coupled quartic so the slave map has genuine cubic corrections.
  auto s = testfx::synthetic_system(1.1, 0.6, 1.3, 0.4, 0.2, -0.15, 0.4);
  const double lambda = s.red.lambda0 + 0.02;
  const double alpha = 0.01;
  const Mat xi = 0.015 * standard_j(4);
  Mat d = v1_derivative(s.red, lambda, alpha, xi);

  std::mt19937 gen(21);
  std::vector<Vec> dirs;
  for (int i = 0; i < 4; ++i) {
    Vec u = testfx::random_vec(gen, 4);
    dirs.push_back(u / u.norm());
  }
  auto err_at = [&](double h) {
    double worst = 0.0;
    for (const Vec& u : dirs) {
      Vec v1 = v1_solve(s.red, Vec(h * u), lambda, alpha, xi);
      worst = std::max(worst, (v1 - d * (h * u)).norm() / h);
    }
    return worst;
  };
  double h = 0.02;
  double prev = err_at(h);
  CHECK(prev > 0.0);
  for (int round = 0; round < 3; ++round) {
    h /= 2.0;
    double cur = err_at(h);
    CHECK(cur / prev < 0.6);  // one order of h per halving
    prev = cur;
  }
}

TEST_CASE("slave variable vanishes identically at the event point") {
  auto s = testfx::synthetic_system();
  std::mt19937 gen(9);
  for (int trial = 0; trial < 5; ++trial) {
    Vec v0 = 0.05 * testfx::random_vec(gen, 4);
    Vec v1 = v1_solve(s.red, v0, s.red.lambda0, 0.0, Mat::Zero(4, 4));
    CHECK(v1.norm() < 1e-10);
  }
}

TEST_CASE("rho near zero is rejected") {
  auto s = testfx::synthetic_system();
  ReductionData broken = s.red;
  broken.coeffs.rho = LambdaPoly{1e-13};
  CHECK_HOPF_THROWS(RHO_SINGULAR,
                    v1_derivative(broken, broken.lambda0, 0.1, Mat::Zero(4, 4)));
}

TEST_CASE("db_at_zero pinned value and FD agreement") {
  auto s = testfx::synthetic_system();
  // alpha alone at the event: sigma(lambda0) = 0 leaves alpha^2 I.
  Mat db = db_at_zero(s.red, s.red.lambda0, 0.1, Mat::Zero(4, 4));
  CHECK(rel_err(db, Mat(0.01 * Mat::Identity(4, 4))) < 1e-12);

  // At delta = 0 the zero-derivative equals the FD Jacobian of the principal
  // part exactly (the cubic gradient has no linear part).
  for (const Mat& xi : {Mat(0.2 * standard_j(4)), Mat(0.15 * testfx::xi_unit_v0())}) {
    Mat formula = db_at_zero(s.red, s.red.lambda0, 0.07, xi);
    Mat fd = Mat::Zero(4, 4);
    const double h = 1e-5;
    for (int i = 0; i < 4; ++i) {
      Vec e = Vec::Zero(4);
      e(i) = h;
      Vec bp = principal_part_b(s.red, e, 0.0, 0.07, xi);
      Vec bm = principal_part_b(s.red, Vec(-e), 0.0, 0.07, xi);
      fd.col(i) = (bp - bm) / (2.0 * h);
    }
    CHECK(rel_err(formula, fd) < 1e-9);
  }
}

TEST_CASE("principal part is the gradient of the potential") {
  auto s = testfx::synthetic_system();
  std::mt19937 gen(33);
  for (const Mat& xi : {Mat(0.2 * standard_j(4)), Mat(0.15 * testfx::xi_unit_v0())}) {
    for (int trial = 0; trial < 10; ++trial) {
      Vec v0 = testfx::random_vec(gen, 4);
      double delta = 0.02 * (trial - 5);
      double alpha = 0.03 * ((trial % 3) - 1);
      Vec b = principal_part_b(s.red, v0, delta, alpha, xi);
      Vec g = Vec::Zero(4);
      const double h = 1e-6;
      for (int i = 0; i < 4; ++i) {
        Vec e = Vec::Zero(4);
        e(i) = h;
        g(i) = (bifurcation_potential(s.red, Vec(v0 + e), delta, alpha, xi) -
                bifurcation_potential(s.red, Vec(v0 - e), delta, alpha, xi)) /
               (2.0 * h);
      }
      CHECK((g - b).norm() < 1e-6 * std::max(1.0, b.norm()));
    }
  }
}

TEST_CASE("principal part preserves the real-phase plane") {
  auto s = testfx::synthetic_system();
  Vec v0 = Vec::Zero(4);
  v0(0) = 0.23;
  v0(1) = -0.41;
  Vec b = principal_part_b(s.red, v0, 0.01, 0.05, Mat(0.1 * testfx::xi_unit_v0()));
  CHECK(std::abs(b(2)) < 1e-14);
  CHECK(std::abs(b(3)) < 1e-14);
}

TEST_CASE("solve_lambda solves the radial equation") {
  auto s = testfx::synthetic_system();
  std::mt19937 gen(15);
  for (int trial = 0; trial < 8; ++trial) {
    Vec v0 = 0.3 * testfx::random_vec(gen, 4);
    double alpha = 0.05;
    Mat xi = (trial % 2 == 0) ? Mat(Mat::Zero(4, 4))
                              : Mat(0.1 * testfx::xi_unit_v0());
    double delta = solve_lambda(s.red, v0, alpha, xi);
    Vec b = principal_part_b(s.red, v0, delta, alpha, xi);
    CHECK(std::abs(b.dot(v0)) < 1e-10 * std::max(1.0, v0.squaredNorm()));
  }
  // With xi = 0 the radial equation is linear in delta:
  // (delta sigma' + alpha^2 - 2 psi' alpha delta) r^2 + 4 Phi(v0) = 0.
  Vec v0 = Vec::Zero(4);
  v0(0) = 0.5;
  v0(1) = 0.3;
  double alpha = 0.05;
  double delta = solve_lambda(s.red, v0, alpha, Mat(Mat::Zero(4, 4)));
  double r2 = v0.squaredNorm();
  double closed = -(alpha * alpha + 4.0 * phi_value(0.2, -0.15, v0) / r2) /
                  (1.3 - 2.0 * 0.4 * alpha);
  CHECK(delta == doctest::Approx(closed).epsilon(1e-10));
}

TEST_CASE("sphere field is tangent and vanishes on the diagonal orbit") {
  auto s = testfx::synthetic_system();
  std::mt19937 gen(27);
  for (int trial = 0; trial < 10; ++trial) {
    Vec u = testfx::random_vec(gen, 4);
    u /= u.norm();
    Vec g = sphere_field(s.red, u, 0.01, 0.02, Mat(0.05 * testfx::xi_unit_v0()));
    CHECK(std::abs(g.dot(u)) < 1e-12 * std::max(1.0, g.norm()));
  }

  // pi1 = pi2 ray: the quartic gradient is radial there, so with alpha = xi
  // = 0 and the radial equation solved the tangential field vanishes.
  Vec u0 = Vec::Zero(4);
  u0(0) = 1.0 / std::sqrt(2.0);
  u0(1) = 1.0 / std::sqrt(2.0);
  double delta = solve_lambda(s.red, u0, 0.0, Mat(Mat::Zero(4, 4)));
  Vec g = sphere_field(s.red, u0, delta, 0.0, Mat(Mat::Zero(4, 4)));
  CHECK(g.norm() < 1e-10);

  // A generic direction does not balance (a != b).
  Vec u1 = Vec::Zero(4);
  u1(0) = 0.9;
  u1(1) = std::sqrt(1.0 - 0.81);
  double d1 = solve_lambda(s.red, u1, 0.0, Mat(Mat::Zero(4, 4)));
  CHECK(sphere_field(s.red, u1, d1, 0.0, Mat(Mat::Zero(4, 4))).norm() > 1e-3);
}
