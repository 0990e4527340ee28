#include "hopf/normalform.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hopf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kCircleSamples = 16;

// Coefficients of p(t + c) in ascending powers of t (synthetic shift).
LambdaPoly shift_poly(const LambdaPoly& p, double c) {
  std::vector<double> b(p.coefficients());
  const int deg = static_cast<int>(b.size()) - 1;
  for (int j = 0; j < deg; ++j) {
    for (int i = deg - 1; i >= j; --i) b[i] += c * b[i + 1];
  }
  LambdaPoly out;
  for (int i = deg; i >= 0; --i) out += LambdaPoly::monomial(i, b[i]);
  return out;
}

// Norm of the jet recentered at lambda0 and truncated to (lambda-lambda0)
// order <= torder.  Measures defects "near lambda0" instead of globally.
double local_norm(const PolyJet& p, double lambda0, int torder) {
  double s = 0.0;
  for (const auto& [key, c] : p.terms()) {
    LambdaPoly sh = shift_poly(c, lambda0);
    const auto& cs = sh.coefficients();
    for (int i = 0; i <= torder && i < static_cast<int>(cs.size()); ++i) {
      s += cs[i] * cs[i];
    }
  }
  return std::sqrt(s);
}

void enumerate_monomials(int dim, int pos, int left, std::vector<int>& cur,
                         std::vector<MonoKey>& out) {
  if (pos == dim - 1) {
    cur[pos] = left;
    out.push_back(mono_key(cur));
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur[pos] = e;
    enumerate_monomials(dim, pos + 1, left - e, cur, out);
  }
}

std::vector<MonoKey> degree_monomials(int dim, int d) {
  std::vector<MonoKey> out;
  std::vector<int> cur(dim, 0);
  enumerate_monomials(dim, 0, d, cur, out);
  std::sort(out.begin(), out.end());
  return out;
}

// Matrix of the flow derivative chi -> d chi(A v) on degree-d monomials.
Mat lie_derivative_matrix(const Mat& A, int dim, int d,
                          const std::vector<MonoKey>& monos,
                          const std::map<MonoKey, int>& index) {
  Mat L = Mat::Zero(static_cast<int>(monos.size()),
                    static_cast<int>(monos.size()));
  for (int col = 0; col < static_cast<int>(monos.size()); ++col) {
    const std::vector<int> e = mono_exponents(monos[col], dim);
    for (int i = 0; i < dim; ++i) {
      if (e[i] == 0) continue;
      for (int j = 0; j < dim; ++j) {
        if (A(i, j) == 0.0) continue;
        MonoKey k = monos[col] - (static_cast<MonoKey>(1) << (4 * i)) +
                    (static_cast<MonoKey>(1) << (4 * j));
        L(index.at(k), col) += e[i] * A(i, j);
      }
    }
  }
  return L;
}

int lambda_degree(const PolyJet& p) {
  int d = 0;
  for (const auto& [key, c] : p.terms()) d = std::max(d, c.degree());
  return d;
}

Vec power_coefficients(const PolyJet& p, const std::vector<MonoKey>& monos,
                       const std::map<MonoKey, int>& index, int power) {
  Vec b = Vec::Zero(static_cast<int>(monos.size()));
  for (const auto& [key, c] : p.terms()) {
    auto it = index.find(key);
    if (it == index.end()) continue;
    const auto& cs = c.coefficients();
    if (power < static_cast<int>(cs.size())) b(it->second) = cs[power];
  }
  return b;
}

void add_solution(PolyJet& chi, const Vec& x,
                  const std::vector<MonoKey>& monos, int dim, int power) {
  for (int i = 0; i < static_cast<int>(monos.size()); ++i) {
    if (x(i) == 0.0) continue;
    chi.add_term(mono_exponents(monos[i], dim),
                 LambdaPoly::monomial(power, x(i)));
  }
}

}  // namespace

Mat frame_rotation(int n, double theta) {
  const int half = 2 * n;
  Mat r = std::cos(theta) * Mat::Identity(half, half) +
          std::sin(theta) * standard_j(half);
  Mat out = Mat::Zero(4 * n, 4 * n);
  out.topLeftCorner(half, half) = r;
  out.bottomRightCorner(half, half) = r;
  return out;
}

PolyJet circle_average(const PolyJet& p, int n) {
  PolyJet acc(p.dim(), p.max_degree());
  for (int k = 0; k < kCircleSamples; ++k) {
    acc += p.compose_linear(frame_rotation(n, 2.0 * kPi * k / kCircleSamples));
  }
  acc *= 1.0 / kCircleSamples;
  return acc;
}

NormalizedJet equivariant_normalize(const PolyJet& frame_jet, int n,
                                    double nu0, double lambda0, double tol) {
  const int dim = 4 * n;
  if (frame_jet.dim() != dim) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "jet dimension is not 4n");
  }
  const double scale = std::max(1.0, frame_jet.coefficient_norm());
  if (frame_jet.degree_part(0).coefficient_norm() > tol * scale ||
      frame_jet.degree_part(1).coefficient_norm() > tol * scale) {
    throw HopfError(ErrorCode::H1_VIOLATION,
                    "jet has constant or linear terms");
  }

  const PolyJet h2 = frame_jet.degree_part(2);
  const PolyJet h3 = frame_jet.degree_part(3);
  const PolyJet h4 = frame_jet.degree_part(4);
  const Mat A0 = standard_j(dim) * h2.hessian_at_zero(lambda0);

  NormalizedJet out;
  out.n = n;
  out.nu0 = nu0;
  out.lambda0 = lambda0;

  // Degree 3: Lie transform generator chi3 with h3 + {h2, chi3} = 0 through
  // second order in (lambda - lambda0).  The homological operator at lambda0
  // is invertible on odd degrees (eigenvalue sums +-i nu0, +-3i nu0); the
  // lambda-dependent correction is handled by a defect iteration whose error
  // gains one order in (lambda - lambda0) per round.
  PolyJet chi3(dim);
  if (h3.coefficient_norm() > 0.0) {
    const auto monos3 = degree_monomials(dim, 3);
    std::map<MonoKey, int> idx3;
    for (int i = 0; i < static_cast<int>(monos3.size()); ++i) {
      idx3[monos3[i]] = i;
    }
    const Mat L3 = lie_derivative_matrix(A0, dim, 3, monos3, idx3);
    Eigen::FullPivLU<Mat> lu3(L3);
    if (!lu3.isInvertible()) {
      throw HopfError(ErrorCode::HOMOLOGICAL_RESIDUAL,
                      "cubic homological operator is singular");
    }
    for (int round = 0; round < 4; ++round) {
      PolyJet defect = (h3 + poisson_bracket(h2, chi3)).degree_part(3);
      if (defect.coefficient_norm() <= 1e-14 * scale) break;
      // {h2, chi} = -(flow derivative along A), so the update solves
      // L3 delta = defect.
      for (int p = 0; p <= lambda_degree(defect); ++p) {
        Vec b = power_coefficients(defect, monos3, idx3, p);
        if (b.norm() == 0.0) continue;
        Vec x = lu3.solve(b);
        add_solution(chi3, x, monos3, dim, p);
      }
    }
  }
  PolyJet defect3 = (h3 + poisson_bracket(h2, chi3)).degree_part(3);
  out.homological_residual = local_norm(defect3, lambda0, 2) / scale;
  if (out.homological_residual > tol) {
    throw HopfError(ErrorCode::HOMOLOGICAL_RESIDUAL,
                    "cubic defect above tolerance near lambda0");
  }

  // Degree 4 after the transform, then the circle average; the non-invariant
  // remainder is pushed into a quartic generator by a min-norm solve.
  PolyJet bracket23 = poisson_bracket(h2, chi3);
  PolyJet h4new = (h4 + poisson_bracket(h3, chi3) +
                   0.5 * poisson_bracket(bracket23, chi3))
                      .degree_part(4);
  PolyJet avg4 = circle_average(h4new, n);
  PolyJet noninv = h4new - avg4;
  PolyJet residual4(dim);
  if (noninv.coefficient_norm() > 1e-13 * scale) {
    const auto monos4 = degree_monomials(dim, 4);
    std::map<MonoKey, int> idx4;
    for (int i = 0; i < static_cast<int>(monos4.size()); ++i) {
      idx4[monos4[i]] = i;
    }
    const Mat L4 = lie_derivative_matrix(A0, dim, 4, monos4, idx4);
    Eigen::CompleteOrthogonalDecomposition<Mat> cod4(L4);
    PolyJet chi4(dim);
    for (int round = 0; round < 4; ++round) {
      PolyJet defect = (noninv + poisson_bracket(h2, chi4)).degree_part(4);
      if (defect.coefficient_norm() <= 1e-13 * scale) break;
      for (int p = 0; p <= lambda_degree(defect); ++p) {
        Vec b = power_coefficients(defect, monos4, idx4, p);
        if (b.norm() == 0.0) continue;
        Vec x = cod4.solve(b);
        add_solution(chi4, x, monos4, dim, p);
      }
    }
    residual4 = (noninv + poisson_bracket(h2, chi4)).degree_part(4);
  } else {
    residual4 = noninv;
  }

  PolyJet final4 = avg4 + residual4;
  PolyJet inv_defect = final4 - circle_average(final4, n);
  out.invariance_residual = local_norm(inv_defect, lambda0, 2) / scale;
  if (out.invariance_residual > tol) {
    throw HopfError(ErrorCode::HOMOLOGICAL_RESIDUAL,
                    "quartic part is not circle invariant near lambda0");
  }

  out.jet = PolyJet(dim, frame_jet.max_degree());
  out.jet += h2;
  out.jet += final4;
  out.jet.drop_small(1e-15 * scale);
  out.chi3 = chi3;
  return out;
}

HessianCoefficients extract_coefficients(const NormalizedJet& nj, double tol) {
  const int n = nj.n;
  const int half = 2 * n;
  const int dim = 4 * n;
  const Mat I = Mat::Identity(half, half);
  const Mat J = standard_j(half);
  Mat E1 = Mat::Zero(dim, dim), E2 = Mat::Zero(dim, dim),
      E3 = Mat::Zero(dim, dim), E4 = Mat::Zero(dim, dim);
  E1.topLeftCorner(half, half) = I;
  E2.bottomRightCorner(half, half) = I;
  E3.topRightCorner(half, half) = I;
  E3.bottomLeftCorner(half, half) = I;
  E4.topRightCorner(half, half) = J;
  E4.bottomLeftCorner(half, half) = -J;
  const double n1 = E1.squaredNorm(), n2 = E2.squaredNorm(),
               n3 = E3.squaredNorm(), n4 = E4.squaredNorm();

  auto Hp = nj.jet.degree_part(2).hessian_poly();
  int ldeg = 0;
  for (const auto& row : Hp) {
    for (const auto& c : row) ldeg = std::max(ldeg, c.degree());
  }

  HessianCoefficients out;
  out.n = n;
  out.nu0 = nj.nu0;
  out.lambda0 = nj.lambda0;
  double max_h = 0.0, max_res = 0.0;
  for (int p = 0; p <= ldeg; ++p) {
    Mat Hk = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        const auto& cs = Hp[i][j].coefficients();
        if (p < static_cast<int>(cs.size())) Hk(i, j) = cs[p];
      }
    }
    const double s = (Hk.array() * E1.array()).sum() / n1;
    const double r = (Hk.array() * E2.array()).sum() / n2;
    const double t = (Hk.array() * E3.array()).sum() / n3;
    const double ps = (Hk.array() * E4.array()).sum() / n4;
    out.sigma += LambdaPoly::monomial(p, s);
    out.rho += LambdaPoly::monomial(p, r);
    out.tau += LambdaPoly::monomial(p, t);
    out.psi += LambdaPoly::monomial(p, ps);
    max_res = std::max(
        max_res, (Hk - s * E1 - r * E2 - t * E3 - ps * E4).norm());
    max_h = std::max(max_h, Hk.norm());
  }
  out.fit_residual = max_res / std::max(1.0, max_h);
  if (out.fit_residual > tol) {
    throw HopfError(ErrorCode::FIT_RESIDUAL_EXCEEDED,
                    "quadratic part leaves the deformation span");
  }

  const double l0 = nj.lambda0;
  out.sigma0 = out.sigma.eval(l0);
  out.rho0 = out.rho.eval(l0);
  out.tau0 = out.tau.eval(l0);
  out.psi0 = out.psi.eval(l0);
  out.sigma_prime = out.sigma.derivative().eval(l0);
  out.rho_prime = out.rho.derivative().eval(l0);
  out.tau_prime = out.tau.derivative().eval(l0);
  out.psi_prime = out.psi.derivative().eval(l0);

  const double h = 1e-4 * (1.0 + std::abs(l0));
  const double fd_sigma =
      (out.sigma.eval(l0 + h) - out.sigma.eval(l0 - h)) / (2.0 * h);
  const double fd_psi =
      (out.psi.eval(l0 + h) - out.psi.eval(l0 - h)) / (2.0 * h);
  out.fd_residual =
      std::abs(fd_sigma - out.sigma_prime) + std::abs(fd_psi - out.psi_prime);
  return out;
}

std::array<Complex, 4> eigenvalues_closed_form(double sigma, double rho,
                                               double tau, double psi) {
  const Complex s = std::sqrt(Complex(tau * tau - rho * sigma, 0.0));
  const Complex ip(0.0, psi);
  return {ip + s, ip - s, std::conj(ip + s), std::conj(ip - s)};
}

const char* to_string(Classification c) {
  return c == Classification::COLLISION_SPLIT ? "COLLISION_SPLIT" : "NO_EVENT";
}

KreinVerdict krein_classify(const HessianCoefficients& c, double lo,
                            double hi, double h4_tol) {
  KreinVerdict v;
  v.sigma_prime = c.sigma_prime;
  const double fl = c.f1(lo), fh = c.f1(hi);
  v.f1_sign_change = fl * fh < 0.0;
  if (std::abs(c.sigma_prime) <= h4_tol) {
    // Degenerate family: the split has no transversal crossing to certify.
    v.classification = Classification::NO_EVENT;
    return v;
  }
  if (!v.f1_sign_change) {
    throw HopfError(ErrorCode::NO_ROOT,
                    "f1 = rho sigma - tau^2 does not change sign");
  }
  v.classification = Classification::COLLISION_SPLIT;
  return v;
}

HopfEvent locate_collision(const std::function<Mat(double)>& A_of_lambda,
                           double lo, double hi, double tol) {
  auto off_axis = [&](double lambda, double* nu) -> bool {
    const Mat A = A_of_lambda(lambda);
    const double scale = std::max(1.0, A.norm());
    Eigen::EigenSolver<Mat> es(A);
    CVec mu = es.eigenvalues();
    bool split = false;
    for (int i = 0; i < mu.size(); ++i) {
      if (std::abs(mu(i).real()) > 1e-9 * scale) split = true;
    }
    if (nu != nullptr) {
      // Cluster |Im mu| values; the colliding pair is the closest cluster
      // pair and the symmetric mean cancels the square-root splitting.
      std::vector<double> im;
      for (int i = 0; i < mu.size(); ++i) {
        if (mu(i).imag() > 0.0) im.push_back(mu(i).imag());
      }
      std::sort(im.begin(), im.end());
      std::vector<std::pair<double, int>> clusters;  // mean, count
      const double ctol = 1e-6 * scale;
      for (double x : im) {
        if (!clusters.empty() &&
            std::abs(x - clusters.back().first) <= ctol) {
          auto& [m, k] = clusters.back();
          m = (m * k + x) / (k + 1);
          ++k;
        } else {
          clusters.push_back({x, 1});
        }
      }
      if (clusters.size() == 1) {
        *nu = clusters[0].first;
      } else {
        int best = 0;
        for (int i = 0; i + 1 < static_cast<int>(clusters.size()); ++i) {
          if (clusters[i + 1].first - clusters[i].first <
              clusters[best + 1].first - clusters[best].first) {
            best = i;
          }
        }
        *nu = 0.5 * (clusters[best].first + clusters[best + 1].first);
      }
    }
    return split;
  };

  double nu_lo = 0.0, nu_hi = 0.0;
  const bool split_lo = off_axis(lo, &nu_lo);
  const bool split_hi = off_axis(hi, &nu_hi);
  if (split_lo == split_hi) {
    throw HopfError(ErrorCode::NO_ROOT,
                    "interval does not bracket an eigenvalue collision");
  }

  // Bisect down to floating-point resolution; tol is an accuracy guarantee,
  // not a stopping mandate, and the leftover eigenvalue splitting at the
  // returned point scales like sqrt of the bracket width.
  (void)tol;
  double a = lo, b = hi;
  double nu_star = split_lo ? nu_hi : nu_lo;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    double nu_mid = 0.0;
    const bool split_mid = off_axis(mid, &nu_mid);
    if (split_mid == split_lo) {
      a = mid;
    } else {
      b = mid;
    }
    if (!split_mid) nu_star = nu_mid;
  }

  HopfEvent ev;
  ev.lambda_star = 0.5 * (a + b);
  ev.nu_star = nu_star;
  ev.classification = Classification::COLLISION_SPLIT;
  return ev;
}

}  // namespace hopf
