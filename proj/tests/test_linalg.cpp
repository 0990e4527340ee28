#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "hopf/linalg.hpp"

using namespace hopf;

TEST_CASE("standard forms have the pinned block layout") {
  Mat j = standard_j(4);
  Mat expect(4, 4);
  expect << 0, 0, -1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 1, 0, 0;
  CHECK(rel_err(j, expect) == 0.0);
  CHECK((j * j + Mat::Identity(4, 4)).norm() == 0.0);

  Mat om = standard_omega(4);
  CHECK(rel_err(om, -j) == 0.0);
  CHECK_HOPF_THROWS(INVALID_ARGUMENT, standard_j(3));
}

TEST_CASE("symplectic product orientation") {
  Mat om = standard_omega(2);
  Vec q = Vec::Zero(2), p = Vec::Zero(2);
  q(0) = 1.0;
  p(1) = 1.0;
  CHECK(symplectic_product(om, q, p) == doctest::Approx(1.0));
  CHECK(symplectic_product(om, p, q) == doctest::Approx(-1.0));
  CHECK(symplectic_product(om, q, q) == doctest::Approx(0.0));
}

TEST_CASE("require_symplectic_form rejects bad forms") {
  require_symplectic_form(standard_j(6));
  CHECK_HOPF_THROWS(DEGENERATE_FORM, require_symplectic_form(Mat::Identity(2, 2)));
  CHECK_HOPF_THROWS(DEGENERATE_FORM, require_symplectic_form(Mat::Zero(2, 2)));
  CHECK_HOPF_THROWS(DEGENERATE_FORM, require_symplectic_form(Mat::Zero(3, 3)));
}

TEST_CASE("quadratic_hamiltonian round trip") {
  std::mt19937 gen(7);
  for (int d : {2, 4, 6}) {
    Mat om = standard_omega(d);
    Mat h0 = testfx::random_symmetric(gen, d, 1.0);
    Mat a = -om.inverse() * h0;
    CHECK(is_infinitesimally_symplectic(a, om));
    Mat h = quadratic_hamiltonian(a, om);
    CHECK(rel_err(h, h0) < 1e-12);
  }
}

TEST_CASE("quadratic_hamiltonian rejects non-Hamiltonian fields") {
  Mat a = Mat::Identity(4, 4);
  CHECK_FALSE(is_infinitesimally_symplectic(a, standard_omega(4)));
  CHECK_HOPF_THROWS(NOT_HAMILTONIAN, quadratic_hamiltonian(a, standard_omega(4)));
}

TEST_CASE("expm matches rotations and diagonal exponentials") {
  double th = 0.7;
  Mat r = expm(Mat(th * standard_j(2)));
  Mat expect(2, 2);
  expect << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  CHECK(rel_err(r, expect) < 1e-14);

  Mat d = Mat::Zero(2, 2);
  d(0, 0) = -1.5;
  d(1, 1) = 0.25;
  Mat ed = expm(d);
  CHECK(ed(0, 0) == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
  CHECK(ed(1, 1) == doctest::Approx(std::exp(0.25)).epsilon(1e-14));
  CHECK(std::abs(ed(0, 1)) + std::abs(ed(1, 0)) == 0.0);
}

TEST_CASE("expm inverse and symplecticity of generated maps") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 5; ++trial) {
    Mat m = testfx::random_symplectic(gen, 4, 0.4);
    Mat j = standard_j(4);
    CHECK(rel_err(Mat(m.transpose() * j * m), j) < 1e-12);
  }
}

TEST_CASE("jordan_chevalley splits a nilpotent block") {
  Mat a = Mat::Zero(2, 2);
  a(0, 1) = 1.0;
  auto jc = jordan_chevalley(a);
  CHECK(jc.semisimple.norm() < 1e-12);
  CHECK(rel_err(jc.nilpotent, a) < 1e-12);
  CHECK(jc.reconstruction_residual < 1e-12);
  CHECK(jc.commutator_residual < 1e-12);
}

TEST_CASE("jordan_chevalley on the frame pair") {
  auto r = testfx::canonical_resonance(1, 1.0);
  auto jc = jordan_chevalley(r.A_restricted);
  CHECK(rel_err(jc.semisimple, r.As_restricted) < 1e-10);
  CHECK(rel_err(jc.nilpotent, r.An_restricted) < 1e-10);
  Mat comm = jc.semisimple * jc.nilpotent - jc.nilpotent * jc.semisimple;
  CHECK(comm.norm() < 1e-10);
}

TEST_CASE("jordan_chevalley merges a sub-threshold eigenvalue pair") {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0 + 1e-9;
  auto jc = jordan_chevalley(a);
  CHECK(jc.clusters.size() == 1);
  double mean = 1.0 + 5e-10;
  CHECK(std::abs(jc.cluster_values[0] - Complex(mean, 0)) < 1e-12);
  CHECK(rel_err(jc.semisimple, Mat(mean * Mat::Identity(2, 2))) < 1e-9);
  CHECK(jc.nilpotent.norm() < 1e-9);
  CHECK(jc.reconstruction_residual < 1e-12);
}

TEST_CASE("jordan_chevalley flags ambiguous clustering") {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0 + 1.5e-7;
  CHECK_HOPF_THROWS(CLUSTER_AMBIGUOUS, jordan_chevalley(a));
  // A wider gap resolves cleanly into two clusters.
  a(1, 1) = 1.0 + 1e-3;
  CHECK(jordan_chevalley(a).clusters.size() == 2);
}

TEST_CASE("jordan_chevalley property on diagonalizable samples") {
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 4;
    Mat s;
    do {
      s = Mat::NullaryExpr(d, d, [&](int, int) { return u(gen); });
    } while (std::abs(s.determinant()) < 0.05);
    Vec ev(d);
    for (int i = 0; i < d; ++i) ev(i) = -2.0 + 1.3 * i + 0.1 * u(gen);
    Mat a = s * ev.asDiagonal() * s.inverse();
    auto jc = jordan_chevalley(a);
    CHECK(jc.nilpotent.norm() < 1e-7 * a.norm());
    CHECK(jc.reconstruction_residual < 1e-10);
    CHECK(jc.commutator_residual < 1e-8);
    std::vector<Complex> got(jc.eigenvalues.data(),
                             jc.eigenvalues.data() + jc.eigenvalues.size());
    std::vector<Complex> want;
    for (int i = 0; i < d; ++i) want.emplace_back(ev(i), 0.0);
    CHECK(testfx::spectrum_distance(got, want) < 1e-8);
  }
}

TEST_CASE("orthonormal_columns spans the input and drops rank") {
  Mat v(4, 3);
  v << 1, 2, 3, 0, 1, 1, 1, 0, 1, 2, 2, 4;  // third column = first + second
  Mat q = orthonormal_columns(v);
  CHECK(q.cols() == 2);
  CHECK(rel_err(Mat(q.transpose() * q), Mat::Identity(2, 2)) < 1e-12);
  // Same column space: projector reproduces every input column.
  Mat proj = q * q.transpose();
  CHECK((proj * v - v).norm() < 1e-12);
}

TEST_CASE("realify_basis turns conjugate pairs into real planes") {
  CMat v(2, 2);
  v(0, 0) = Complex(1, 2);
  v(1, 0) = Complex(0, -1);
  v(0, 1) = std::conj(v(0, 0));
  v(1, 1) = std::conj(v(1, 0));
  Mat r = realify_basis(v);
  CHECK(r.cols() == 2);
  Mat expect(2, 2);
  expect << 1, 2, 0, -1;  // (Re v, Im v)
  CHECK(rel_err(r, expect) == 0.0);

  CMat w(2, 1);
  w(0, 0) = Complex(3, 0);
  w(1, 0) = Complex(-1, 0);
  Mat rw = realify_basis(w);
  CHECK(rw.cols() == 1);
  CHECK(rw(0, 0) == doctest::Approx(3.0));
}

TEST_CASE("solve_min_norm picks the minimal-norm preimage") {
  Mat a(1, 2);
  a << 1, 1;
  Mat b(1, 1);
  b << 2;
  Mat x = solve_min_norm(a, b);
  // Pseudoinverse solution of x0 + x1 = 2.
  CHECK(x(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rel_err is scale aware") {
  Mat a = Mat::Identity(3, 3);
  CHECK(rel_err(a, a) == 0.0);
  CHECK(rel_err(Mat(2.0 * a), Mat(2.0 * a + 2e-8 * a)) ==
        doctest::Approx(1e-8).epsilon(1e-3));
}
