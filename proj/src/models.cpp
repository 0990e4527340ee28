#include "hopf/models.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace hopf {

namespace {

std::vector<int> exps8(int a, int b, int c, int d, int e, int f, int g,
                       int h) {
  return {a, b, c, d, e, f, g, h};
}

}  // namespace

PolyJet oscillator_default_interaction(double eps) {
  PolyJet f(8);
  f.add_term(exps8(4, 0, 0, 0, 0, 0, 0, 0), LambdaPoly(eps));
  f.add_term(exps8(2, 2, 0, 0, 0, 0, 0, 0), LambdaPoly(2.0 * eps));
  f.add_term(exps8(0, 4, 0, 0, 0, 0, 0, 0), LambdaPoly(eps));
  return f;
}

Mat oscillator_rotation_generator() {
  Mat xi = Mat::Zero(8, 8);
  for (int pair = 0; pair < 4; ++pair) {
    xi(2 * pair, 2 * pair + 1) = -1.0;
    xi(2 * pair + 1, 2 * pair) = 1.0;
  }
  return xi;
}

PolyJet oscillator_momentum() {
  PolyJet K(8);
  K.add_term(exps8(1, 0, 0, 0, 0, 1, 0, 0), LambdaPoly(1.0));
  K.add_term(exps8(0, 1, 0, 0, 1, 0, 0, 0), LambdaPoly(-1.0));
  K.add_term(exps8(0, 0, 1, 0, 0, 0, 0, 1), LambdaPoly(1.0));
  K.add_term(exps8(0, 0, 0, 1, 0, 0, 1, 0), LambdaPoly(-1.0));
  return K;
}

HamiltonianFamily coupled_oscillator_family(const OscillatorParams& P,
                                            const PolyJet& interaction) {
  if (interaction.dim() != 8) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "oscillator interaction must live on R^8");
  }
  const double m = P.mass;
  const double g = P.gamma;

  PolyJet jet(8);
  // Kinetic energy and the lambda-dependent spring term.
  const LambdaPoly spring{g * g / (2.0 * m), -0.5};
  for (int i = 0; i < 4; ++i) {
    std::vector<int> q(8, 0), p(8, 0);
    q[i] = 2;
    p[4 + i] = 2;
    jet.add_term(q, spring);
    jet.add_term(p, LambdaPoly(1.0 / (2.0 * m)));
  }
  // Magnetic coupling between the two particles.
  const double c = g / m;
  jet.add_term(exps8(0, 0, 1, 0, 1, 0, 0, 0), LambdaPoly(c));
  jet.add_term(exps8(1, 0, 0, 0, 0, 0, 1, 0), LambdaPoly(-c));
  jet.add_term(exps8(0, 0, 0, 1, 0, 1, 0, 0), LambdaPoly(c));
  jet.add_term(exps8(0, 1, 0, 0, 0, 0, 0, 1), LambdaPoly(-c));
  jet += interaction;

  HamiltonianFamily fam;
  fam.name = "coupled_oscillator";
  fam.jet = jet;
  fam.omega = standard_omega(8);

  Mat tau = Mat::Identity(8, 8);
  for (int i = 1; i < 8; i += 2) tau(i, i) = -1.0;
  fam.group.finite_generators = {tau};
  fam.group.finite_names = {"reflection"};
  fam.group.algebra_generators = {oscillator_rotation_generator()};
  fam.group.algebra_names = {"rotation"};

  // The theory needs an invariant interaction; sample the defect under the
  // reflection and a few rotation angles before accepting the family.
  const double fscale = std::max(1.0, interaction.coefficient_norm());
  std::vector<Mat> elements = {tau};
  for (double theta : {0.9, 2.3, 4.1}) {
    elements.push_back(expm(Mat(theta * oscillator_rotation_generator())));
  }
  Vec x(8);
  double defect = 0.0;
  for (int s = 0; s < 6; ++s) {
    for (int i = 0; i < 8; ++i) {
      x(i) = std::sin(0.7 * s + 1.3 * i + 0.2) * (1.0 + 0.1 * i);
    }
    for (const Mat& el : elements) {
      for (double lam : {0.7, 1.3}) {
        defect = std::max(defect, std::abs(interaction.eval(el * x, lam) -
                                           interaction.eval(x, lam)));
      }
    }
  }
  if (defect > 1e-9 * fscale) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "oscillator interaction is not invariant under the "
                    "rotation and reflection symmetries");
  }
  return fam;
}

HamiltonianFamily coupled_oscillator_family(const OscillatorParams& P) {
  return coupled_oscillator_family(P, oscillator_default_interaction(P.eps));
}

Mat oscillator_linearization(const OscillatorParams& P, double k) {
  const double m = P.mass;
  const double g = P.gamma;
  const Mat J4 = standard_j(4);
  Mat A = Mat::Zero(8, 8);
  A.topLeftCorner(4, 4) = -(g / m) * J4;
  A.topRightCorner(4, 4) = Mat::Identity(4, 4) / m;
  A.bottomLeftCorner(4, 4) = (k - g * g / m) * Mat::Identity(4, 4);
  A.bottomRightCorner(4, 4) = -(g / m) * J4;
  return A;
}

std::array<Complex, 4> oscillator_eigenvalues(const OscillatorParams& P,
                                              double k) {
  const double m = P.mass;
  const double g = P.gamma;
  const Complex inner = std::sqrt(Complex(g * g - k * m, 0.0));
  const Complex plus = std::sqrt(Complex(k * m - 2.0 * g * g, 0.0) +
                                 2.0 * g * inner) / m;
  const Complex minus = std::sqrt(Complex(k * m - 2.0 * g * g, 0.0) -
                                  2.0 * g * inner) / m;
  return {plus, -plus, minus, -minus};
}

Vec ComplexFrameO2::embed(Complex z1, Complex z2) const {
  Vec v(4);
  for (int k = 0; k < 2; ++k) {
    const Complex w = z1 * e1(k) + z2 * e2(k);
    v(k) = w.real();
    v(k + 2) = w.imag();
  }
  return v;
}

std::array<Complex, 2> ComplexFrameO2::coords(const Vec& v0) const {
  CVec w(2);
  w << Complex(v0(0), v0(2)), Complex(v0(1), v0(3));
  return {e1.dot(w), e2.dot(w)};
}

ComplexFrameO2 complex_frame_o2(const Mat& xi_v0, const Mat& tau_v0,
                                const PolyJet& quartic_v0, double lambda0,
                                double fit_tol) {
  if (xi_v0.rows() != 4 || xi_v0.cols() != 4 || tau_v0.rows() != 4 ||
      tau_v0.cols() != 4 || quartic_v0.dim() != 4) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "complex_frame_o2 expects a 4-dimensional kernel block");
  }
  const Mat J = standard_j(4);
  const double jtol = 1e-8 * (1.0 + xi_v0.norm() + tau_v0.norm());
  if ((xi_v0 * J - J * xi_v0).norm() > jtol ||
      (tau_v0 * J - J * tau_v0).norm() > jtol) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "kernel generators must commute with the complex "
                    "structure");
  }

  // Complexify: w_k = v_k + i v_{k+2} turns J-commuting real maps into
  // C-linear 2x2 matrices.
  auto complexify = [](const Mat& M) {
    CMat out(2, 2);
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        out(k, l) = Complex(M(k, l), M(k + 2, l));
    return out;
  };
  const CMat xi_hat = complexify(xi_v0);
  const CMat tau_hat = complexify(tau_v0);

  Eigen::ComplexEigenSolver<CMat> es(xi_hat);
  const CVec mu = es.eigenvalues();
  const double kappa = std::max(std::abs(mu(0).imag()),
                                std::abs(mu(1).imag()));
  if (kappa <= 1e-12 * (1.0 + xi_v0.norm())) {
    throw HopfError(ErrorCode::DEGENERATE_COEFFICIENTS,
                    "rotation generator acts trivially on the kernel");
  }
  const int idx = (mu(0).imag() < mu(1).imag()) ? 0 : 1;

  ComplexFrameO2 F;
  F.kappa = kappa;
  F.e1 = es.eigenvectors().col(idx).normalized();
  // Deterministic gauge: largest component real positive.
  int big = 0;
  if (std::abs(F.e1(1)) > std::abs(F.e1(0))) big = 1;
  F.e1 *= std::abs(F.e1(big)) / F.e1(big);
  F.e2 = tau_hat * F.e1;
  F.weight_residual =
      (xi_hat * F.e2 - Complex(0.0, kappa) * F.e2).norm() / kappa;
  F.tau_residual = (tau_hat * F.e2 - F.e1).norm();
  if (F.weight_residual > 1e-6 || F.tau_residual > 1e-6) {
    throw HopfError(ErrorCode::BLOCK_STRUCTURE_VIOLATION,
                    "reflection does not exchange the rotation weights");
  }

  // Fit the quartic against the invariant ring generated by pi_1, pi_2.
  const double radii[3] = {0.5, 1.0, 1.5};
  const double ph1[3] = {0.0, 0.7, 1.9};
  const double ph2[2] = {0.3, 2.1};
  std::vector<double> rows;
  std::vector<double> rhs;
  for (double r1 : radii)
    for (double r2 : radii)
      for (double a1 : ph1)
        for (double a2 : ph2) {
          const Complex z1 = r1 * std::exp(Complex(0.0, a1));
          const Complex z2 = r2 * std::exp(Complex(0.0, a2));
          const double p1 = r1 * r1, p2 = r2 * r2;
          rows.insert(rows.end(), {p1 * p1, p2 * p2, p1 * p2});
          rhs.push_back(quartic_v0.eval(F.embed(z1, z2), lambda0));
        }
  const int ns = static_cast<int>(rhs.size());
  Mat X(ns, 3);
  Vec y(ns);
  for (int i = 0; i < ns; ++i) {
    X.row(i) << rows[3 * i], rows[3 * i + 1], rows[3 * i + 2];
    y(i) = rhs[i];
  }
  const Vec coef = X.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
  const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
  const double lsq = (X * coef - y).cwiseAbs().maxCoeff() / scale;
  const double sym = std::abs(coef(0) - coef(1)) / scale;
  F.fit_residual = std::max(lsq, sym);
  if (F.fit_residual > fit_tol) {
    throw HopfError(ErrorCode::FIT_RESIDUAL_EXCEEDED,
                    "kernel quartic is not a function of the O(2) "
                    "invariants");
  }
  const double c20 = 0.5 * (coef(0) + coef(1));
  const double c11 = coef(2);
  F.a = 4.0 * c20;
  F.b = 2.0 * c11;
  return F;
}

}  // namespace hopf
