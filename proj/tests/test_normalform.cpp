#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "hopf/normalform.hpp"

using namespace hopf;

namespace {

// Quadratic jet 1/2 v^T (sigma E1 + rho E2 + tau E3 + psi E4) v for n = 1.
PolyJet quad_jet(const LambdaPoly& sigma, const LambdaPoly& rho,
                 const LambdaPoly& tau, const LambdaPoly& psi) {
  Mat j2 = standard_j(2);
  PolyJet p(4);
  for (int i = 0; i < 4; ++i) {
    for (int k = i; k < 4; ++k) {
      LambdaPoly c;
      c += sigma * ((i < 2 && i == k) ? 1.0 : 0.0);
      c += rho * ((i >= 2 && i == k) ? 1.0 : 0.0);
      if (i < 2 && k >= 2) {
        c += LambdaPoly{(i == k - 2) ? 1.0 : 0.0} * tau;
        c += psi * j2(i, k - 2);
      }
      if (c.is_zero()) continue;
      std::vector<int> e(4, 0);
      e[i] += 1;
      e[k] += 1;
      p.add_term(e, c * (i == k ? 0.5 : 1.0));
    }
  }
  return p;
}

PolyJet canonical_quad(double nu0) {
  return quad_jet(LambdaPoly{0.0}, LambdaPoly{-1.0}, LambdaPoly{0.0},
                  LambdaPoly{nu0});
}

}  // namespace

TEST_CASE("frame_rotation is the diagonal circle action") {
  Mat r = frame_rotation(1, 0.6);
  Mat block = std::cos(0.6) * Mat::Identity(2, 2) + std::sin(0.6) * standard_j(2);
  CHECK(rel_err(Mat(r.topLeftCorner(2, 2)), block) < 1e-15);
  CHECK(rel_err(Mat(r.bottomRightCorner(2, 2)), block) < 1e-15);
  CHECK(r.topRightCorner(2, 2).norm() == 0.0);
  CHECK(rel_err(frame_rotation(2, M_PI), Mat(-Mat::Identity(8, 8))) < 1e-14);
  // Group law and symplecticity.
  CHECK(rel_err(Mat(frame_rotation(1, 0.3) * frame_rotation(1, 0.9)),
                frame_rotation(1, 1.2)) < 1e-14);
  Mat j = standard_j(4);
  CHECK(rel_err(Mat(r.transpose() * j * r), j) < 1e-14);
}

TEST_CASE("circle_average projects onto invariants") {
  // v0^2 averages to (v0^2 + v1^2)/2 for n = 1.
  PolyJet p(4);
  p.add_term({2, 0, 0, 0}, LambdaPoly{1.0});
  PolyJet avg = circle_average(p, 1);
  PolyJet expect(4);
  expect.add_term({2, 0, 0, 0}, LambdaPoly{0.5});
  expect.add_term({0, 2, 0, 0}, LambdaPoly{0.5});
  CHECK((avg - expect).coefficient_norm() < 1e-14);

  // Odd degrees vanish.
  PolyJet cubic(4);
  cubic.add_term({3, 0, 0, 0}, LambdaPoly{1.0});
  cubic.add_term({1, 1, 1, 0}, LambdaPoly{-2.0});
  CHECK(circle_average(cubic, 1).coefficient_norm() < 1e-14);

  // Idempotent, and the result is pointwise rotation invariant.
  PolyJet q(4);
  q.add_term({1, 0, 2, 1}, LambdaPoly{1.0, 0.5});
  q.add_term({0, 2, 0, 2}, LambdaPoly{-0.7});
  PolyJet a1 = circle_average(q, 1);
  CHECK((circle_average(a1, 1) - a1).coefficient_norm() < 1e-13);
  std::mt19937 gen(5);
  for (double th : {0.37, 1.91, 4.44}) {
    Vec v = testfx::random_vec(gen, 4);
    CHECK(a1.eval(Vec(frame_rotation(1, th) * v), 0.8) ==
          doctest::Approx(a1.eval(v, 0.8)).epsilon(1e-12));
  }
}

TEST_CASE("invariant input passes through normalization unchanged") {
  PolyJet h = canonical_quad(1.0);
  // Rotation-invariant quartic: squared norm of the full state.
  PolyJet norm2(4);
  for (int i = 0; i < 4; ++i) {
    std::vector<int> e(4, 0);
    e[i] = 2;
    norm2.add_term(e, LambdaPoly{1.0});
  }
  h += norm2 * norm2 * 0.1;
  NormalizedJet nj = equivariant_normalize(h, 1, 1.0, 0.0);
  CHECK((nj.jet - h).coefficient_norm() < 1e-12);
  CHECK(nj.chi3.coefficient_norm() < 1e-12);
  CHECK(nj.homological_residual < 1e-12);
  CHECK(nj.invariance_residual < 1e-12);
}

TEST_CASE("cubic terms are removed by the Lie transform") {
  PolyJet h = canonical_quad(1.0);
  PolyJet cubic(4);
  cubic.add_term({3, 0, 0, 0}, LambdaPoly{0.2});
  cubic.add_term({1, 0, 1, 1}, LambdaPoly{-0.1, 0.05});
  h += cubic;
  NormalizedJet nj = equivariant_normalize(h, 1, 1.0, 0.0);
  CHECK(nj.jet.degree_part(3).coefficient_norm() < 1e-11);
  CHECK(nj.chi3.coefficient_norm() > 1e-3);
  CHECK(nj.homological_residual < 1e-10);
  CHECK(nj.invariance_residual < 1e-10);
  // Quadratic part untouched.
  CHECK((nj.jet.degree_part(2) - h.degree_part(2)).coefficient_norm() < 1e-12);
  // Quartic output is circle invariant.
  PolyJet q4 = nj.jet.degree_part(4);
  CHECK((q4 - circle_average(q4, 1)).coefficient_norm() < 1e-11);
}

TEST_CASE("quartic part is averaged to its invariant component") {
  PolyJet h = canonical_quad(1.0);
  PolyJet quartic(4);
  quartic.add_term({4, 0, 0, 0}, LambdaPoly{0.3});  // not invariant
  h += quartic;
  NormalizedJet nj = equivariant_normalize(h, 1, 1.0, 0.0);
  PolyJet q4 = nj.jet.degree_part(4);
  CHECK((q4 - circle_average(q4, 1)).coefficient_norm() < 1e-11);
  CHECK(q4.coefficient_norm() > 1e-3);
  CHECK(nj.invariance_residual < 1e-10);
}

TEST_CASE("normalization rejects bad input jets") {
  PolyJet linear(4);
  linear.add_term({1, 0, 0, 0}, LambdaPoly{1.0});
  linear += canonical_quad(1.0);
  CHECK_HOPF_THROWS(H1_VIOLATION, equivariant_normalize(linear, 1, 1.0, 0.0));

  // No quadratic part: the cubic homological operator is singular.
  PolyJet pure_cubic(4);
  pure_cubic.add_term({3, 0, 0, 0}, LambdaPoly{1.0});
  CHECK_HOPF_THROWS(HOMOLOGICAL_RESIDUAL,
                    equivariant_normalize(pure_cubic, 1, 1.0, 0.0));
}

TEST_CASE("coefficient extraction recovers the synthetic deformation") {
  auto s = testfx::synthetic_system();
  const auto& c = s.coeffs;
  CHECK(c.n == 2);
  CHECK(c.sigma0 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c.rho0 == doctest::Approx(-1.0));
  CHECK(c.tau0 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c.psi0 == doctest::Approx(1.1));
  CHECK(c.sigma_prime == doctest::Approx(1.3));
  CHECK(c.rho_prime == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c.tau_prime == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c.psi_prime == doctest::Approx(0.4));
  CHECK(c.fit_residual < 1e-12);
  CHECK(c.fd_residual < 1e-8);
  // f1 = rho sigma - tau^2 = -1.3 (lambda - 0.6).
  CHECK(c.f1(0.7) == doctest::Approx(-0.13));
  CHECK(c.f1(0.5) == doctest::Approx(0.13));
}

TEST_CASE("off-span quadratic parts fail the fit") {
  NormalizedJet nj;
  PolyJet p(4);
  Vec d(4);
  d << 1.0, 2.0, 1.0, 1.0;
  for (int i = 0; i < 4; ++i) {
    std::vector<int> e(4, 0);
    e[i] = 2;
    p.add_term(e, LambdaPoly{0.5 * d(i)});
  }
  nj.jet = p;
  nj.n = 1;
  nj.nu0 = 1.0;
  nj.lambda0 = 0.0;
  CHECK_HOPF_THROWS(FIT_RESIDUAL_EXCEEDED, extract_coefficients(nj));
}

TEST_CASE("closed-form quadruplet matches the eigensolver") {
  struct Sample {
    double sigma, rho, tau, psi;
  };
  for (const Sample& s : {Sample{0.04, -1.0, 0.0, 1.0},
                          Sample{-0.04, -1.0, 0.0, 1.0},
                          Sample{0.3, -0.8, 0.2, 1.4},
                          Sample{-0.2, -1.1, -0.3, 0.7}}) {
    auto mu = eigenvalues_closed_form(s.sigma, s.rho, s.tau, s.psi);

    Mat e1 = Mat::Zero(4, 4), e2 = e1, e3 = e1, e4 = e1;
    e1.topLeftCorner(2, 2) = Mat::Identity(2, 2);
    e2.bottomRightCorner(2, 2) = Mat::Identity(2, 2);
    e3.topRightCorner(2, 2) = Mat::Identity(2, 2);
    e3.bottomLeftCorner(2, 2) = Mat::Identity(2, 2);
    e4.topRightCorner(2, 2) = standard_j(2);
    e4.bottomLeftCorner(2, 2) = -standard_j(2);
    Mat h = s.sigma * e1 + s.rho * e2 + s.tau * e3 + s.psi * e4;
    Mat a = standard_j(4) * h;  // A = -Omega^{-1} H for Omega = J
    Eigen::EigenSolver<Mat> es(a);
    std::vector<Complex> got, want;
    for (int i = 0; i < 4; ++i) {
      got.push_back(es.eigenvalues()(i));
      want.push_back(mu[static_cast<size_t>(i)]);
    }
    CHECK(testfx::spectrum_distance(got, want) < 1e-10);
  }

  // Hand value: tau^2 - rho sigma = 0.04 gives real offsets +-0.2.
  auto mu = eigenvalues_closed_form(0.04, -1.0, 0.0, 1.0);
  CHECK(testfx::spectrum_distance(
            {mu[0], mu[1], mu[2], mu[3]},
            {Complex(0.2, 1.0), Complex(-0.2, 1.0), Complex(0.2, -1.0),
             Complex(-0.2, -1.0)}) < 1e-12);
  // Imaginary splitting keeps the axis.
  mu = eigenvalues_closed_form(-0.04, -1.0, 0.0, 1.0);
  CHECK(testfx::spectrum_distance(
            {mu[0], mu[1], mu[2], mu[3]},
            {Complex(0.0, 1.2), Complex(0.0, 0.8), Complex(0.0, -1.2),
             Complex(0.0, -0.8)}) < 1e-12);
}

TEST_CASE("krein_classify verdicts") {
  auto s = testfx::synthetic_system();
  KreinVerdict v = krein_classify(s.coeffs, 0.4, 0.8);
  CHECK(v.classification == Classification::COLLISION_SPLIT);
  CHECK(v.f1_sign_change);
  CHECK(v.sigma_prime == doctest::Approx(1.3));

  // Interval that misses the sign change.
  CHECK_HOPF_THROWS(NO_ROOT, krein_classify(s.coeffs, 0.7, 0.9));

  // Degenerate family: sigma identically zero never certifies an event.
  HessianCoefficients flat;
  flat.sigma = LambdaPoly{0.0};
  flat.rho = LambdaPoly{-1.0};
  flat.tau = LambdaPoly{0.0};
  flat.psi = LambdaPoly{1.0};
  flat.n = 1;
  flat.nu0 = 1.0;
  flat.rho0 = -1.0;
  flat.psi0 = 1.0;
  KreinVerdict nv = krein_classify(flat, -0.5, 0.5);
  CHECK(nv.classification == Classification::NO_EVENT);
}

TEST_CASE("locate_collision brackets the splitting parameter") {
  auto a_of = [](double lambda) {
    Mat e1 = Mat::Zero(4, 4), e2 = e1, e4 = e1;
    e1.topLeftCorner(2, 2) = Mat::Identity(2, 2);
    e2.bottomRightCorner(2, 2) = Mat::Identity(2, 2);
    e4.topRightCorner(2, 2) = standard_j(2);
    e4.bottomLeftCorner(2, 2) = -standard_j(2);
    return Mat(standard_j(4) * (lambda * e1 - e2 + e4));
  };
  HopfEvent ev = locate_collision(a_of, -0.5, 0.5);
  CHECK(std::abs(ev.lambda_star) < 1e-8);
  CHECK(ev.nu_star == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(ev.classification == Classification::COLLISION_SPLIT);

  CHECK_HOPF_THROWS(NO_ROOT, locate_collision(a_of, 0.1, 0.5));
  CHECK_HOPF_THROWS(NO_ROOT, locate_collision(a_of, -0.5, -0.1));
}
