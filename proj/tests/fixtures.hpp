#pragma once

// Shared builders for the test suites: hand-assembled resonance data in frame
// coordinates, a synthetic normalized system with known reduced coefficients,
// and small random-matrix helpers.

#include <random>
#include <utility>
#include <vector>

#include "hopf/pipeline.hpp"

// Requires that expr throws HopfError with the given code.
#define CHECK_HOPF_THROWS(code_, ...)                 \
  do {                                                \
    bool caught_ = false;                             \
    try {                                             \
      (void)(__VA_ARGS__);                            \
    } catch (const hopf::HopfError& e_) {             \
      caught_ = true;                                 \
      CHECK(e_.code() == hopf::ErrorCode::code_);     \
    }                                                 \
    CHECK_MESSAGE(caught_, "expected " #code_);       \
  } while (0)

namespace testfx {

using hopf::Mat;
using hopf::Vec;

using hopf::expm;

// Frame-coordinate fixture: A = [[nu J, I], [0, nu J]], omega = J_{4n}.
inline hopf::ResonanceData canonical_resonance(int n, double nu0) {
  const int d = 2 * n;
  Mat j = hopf::standard_j(d);
  Mat a = Mat::Zero(2 * d, 2 * d);
  a.topLeftCorner(d, d) = nu0 * j;
  a.bottomRightCorner(d, d) = nu0 * j;
  a.topRightCorner(d, d) = Mat::Identity(d, d);

  hopf::ResonanceData r;
  r.basis = Mat::Identity(2 * d, 2 * d);
  r.A_restricted = a;
  r.As_restricted = a;
  r.As_restricted.topRightCorner(d, d).setZero();
  r.An_restricted = r.A_restricted - r.As_restricted;
  r.omega_restricted = hopf::standard_j(2 * d);
  r.nu0 = nu0;
  r.period = 2.0 * M_PI / nu0;
  r.harmonics = {1};
  return r;
}

// Generator of the V0 circle action with weights (-i kappa, +i kappa) in the
// complex coordinates z_k = v_k + i v_{k+2}.
inline Mat xi_unit_v0(double kappa = 1.0) {
  Mat x = Mat::Zero(4, 4);
  x(0, 2) = kappa;
  x(2, 0) = -kappa;
  x(1, 3) = -kappa;
  x(3, 1) = kappa;
  return x;
}

// Swap z_1 <-> z_2 on V0.
inline Mat tau_v0() {
  Mat t = Mat::Zero(4, 4);
  t(0, 1) = t(1, 0) = 1.0;
  t(2, 3) = t(3, 2) = 1.0;
  return t;
}

struct SyntheticSystem {
  hopf::NormalizedJet nj;
  hopf::HessianCoefficients coeffs;
  hopf::ReductionData red;
  Mat xi_unit;   // 4x4 generator on V0
  double a = 0;  // quartic branch coefficients for the O(2) law
  double b = 0;
};

// Normalized two-mode system (dim 8) with prescribed reduced data:
//   sigma(l) = sigma_p (l - lambda0), rho = -1, tau = 0,
//   psi(l)   = nu0 + psi_p (l - lambda0),
//   Phi      = c20 (pi1^2 + pi2^2) + c11 pi1 pi2.
// c_cross adds the invariant coupling pi1 pi1' + pi2 pi2' to the slave block
// (primed actions live on V1); it vanishes on V0 and leaves Phi untouched.
inline SyntheticSystem synthetic_system(double nu0 = 1.1, double lambda0 = 0.6,
                                        double sigma_p = 1.3,
                                        double psi_p = 0.4, double c20 = 0.2,
                                        double c11 = -0.15,
                                        double c_cross = 0.0) {
  const int n = 2;
  const int dim = 4 * n;
  const Mat i4 = Mat::Identity(2 * n, 2 * n);
  const Mat j4 = hopf::standard_j(2 * n);

  hopf::LambdaPoly sig{-sigma_p * lambda0, sigma_p};
  hopf::LambdaPoly rho{-1.0};
  hopf::LambdaPoly tau{0.0};
  hopf::LambdaPoly psi{nu0 - psi_p * lambda0, psi_p};

  Mat e1 = Mat::Zero(dim, dim), e2 = e1, e3 = e1, e4 = e1;
  e1.topLeftCorner(2 * n, 2 * n) = i4;
  e2.bottomRightCorner(2 * n, 2 * n) = i4;
  e3.topRightCorner(2 * n, 2 * n) = i4;
  e3.bottomLeftCorner(2 * n, 2 * n) = i4;
  e4.topRightCorner(2 * n, 2 * n) = j4;
  e4.bottomLeftCorner(2 * n, 2 * n) = -j4;

  hopf::PolyJet jet(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      hopf::LambdaPoly c;
      c += sig * e1(i, j);
      c += rho * e2(i, j);
      c += tau * e3(i, j);
      c += psi * e4(i, j);
      if (c.is_zero()) continue;
      std::vector<int> exps(dim, 0);
      exps[i] += 1;
      exps[j] += 1;
      jet.add_term(exps, c * (i == j ? 0.5 : 1.0));
    }
  }

  auto pi_sq = [&](int k) {
    hopf::PolyJet p(dim);
    std::vector<int> e(dim, 0);
    e[k] = 2;
    p.add_term(e, hopf::LambdaPoly{1.0});
    e[k] = 0;
    e[k + 2] = 2;
    p.add_term(e, hopf::LambdaPoly{1.0});
    return p;
  };
  hopf::PolyJet pi1 = pi_sq(0), pi2 = pi_sq(1);
  hopf::PolyJet quartic = pi1 * pi1 * c20 + pi2 * pi2 * c20 + pi1 * pi2 * c11;
  if (c_cross != 0.0) {
    quartic += (pi1 * pi_sq(4) + pi2 * pi_sq(5)) * c_cross;
  }
  jet += quartic;

  SyntheticSystem s;
  s.nj.jet = jet;
  s.nj.chi3 = hopf::PolyJet(dim);
  s.nj.n = n;
  s.nj.nu0 = nu0;
  s.nj.lambda0 = lambda0;
  s.nj.homological_residual = 0.0;
  s.nj.invariance_residual = 0.0;
  s.coeffs = hopf::extract_coefficients(s.nj);
  s.red = hopf::build_reduction(s.nj, s.coeffs);
  s.xi_unit = xi_unit_v0(1.0);
  s.a = 4.0 * c20;
  s.b = 2.0 * c11;
  return s;
}

// Symplectic conjugate of a canonical pair: M = exp(J S) with S symmetric
// preserves omega = J, and (M^-1 A M, J) stays a valid Hamiltonian pair.
inline Mat random_symmetric(std::mt19937& gen, int d, double amp) {
  std::uniform_real_distribution<double> u(-amp, amp);
  Mat s(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      s(i, j) = u(gen);
      s(j, i) = s(i, j);
    }
  }
  return s;
}

inline Mat random_symplectic(std::mt19937& gen, int d, double amp = 0.3) {
  return expm(Mat(hopf::standard_j(d) * random_symmetric(gen, d, amp)));
}

inline Vec random_vec(std::mt19937& gen, int d, double amp = 1.0) {
  std::uniform_real_distribution<double> u(-amp, amp);
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = u(gen);
  return v;
}

// Greedy max-min match between computed and expected eigenvalue multisets.
inline double spectrum_distance(std::vector<std::complex<double>> got,
                                std::vector<std::complex<double>> want) {
  if (got.size() != want.size()) return 1e300;
  double worst = 0.0;
  for (const auto& w : want) {
    double best = 1e300;
    std::size_t at = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
      const double d = std::abs(got[i] - w);
      if (d < best) {
        best = d;
        at = i;
      }
    }
    worst = std::max(worst, best);
    got.erase(got.begin() + static_cast<long>(at));
  }
  return worst;
}

}  // namespace testfx
