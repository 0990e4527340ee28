#include "hopf/dynamics.hpp"

#include <cmath>

namespace hopf {

PolyJet quadratic_form_jet(const Mat& H) {
  const int d = static_cast<int>(H.rows());
  if (H.cols() != d || (H - H.transpose()).norm() > 1e-12 * (1.0 + H.norm())) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "quadratic form needs a symmetric matrix");
  }
  PolyJet jet(d);
  std::vector<int> e(d, 0);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const double c = i == j ? 0.5 * H(i, i) : H(i, j);
      if (c == 0.0) continue;
      std::fill(e.begin(), e.end(), 0);
      e[i] += 1;
      e[j] += 1;
      jet.add_term(e, LambdaPoly(c));
    }
  }
  return jet;
}

FlowSystem::FlowSystem(const PolyJet& h, double lambda, const Mat& omega)
    : h_(h.at_lambda(lambda)), grad_(h, lambda) {
  require_symplectic_form(omega);
  poisson_ = -omega.inverse();
}

namespace {

Vec midpoint_substep(const FlowSystem& sys, const Vec& v, double dt,
                     const IntegrateOptions& opt) {
  const double scale = std::max(1.0, v.norm());
  Vec z = v + dt * sys.field(v);
  for (int it = 0; it < opt.max_fixed_point_iter; ++it) {
    Vec znew = v + dt * sys.field(0.5 * (v + z));
    const double delta = (znew - z).norm();
    z = znew;
    if (delta <= opt.fixed_point_tol * scale) return z;
  }
  throw HopfError(ErrorCode::NONCONVERGENT,
                  "implicit midpoint iteration stalled");
}

}  // namespace

Vec step(const FlowSystem& sys, const Vec& v, double dt,
         const IntegrateOptions& opt) {
  static const double g1 = 1.0 / (2.0 - std::cbrt(2.0));
  static const double g2 = 1.0 - 2.0 * g1;
  Vec y = midpoint_substep(sys, v, g1 * dt, opt);
  y = midpoint_substep(sys, y, g2 * dt, opt);
  return midpoint_substep(sys, y, g1 * dt, opt);
}

Trajectory integrate(const FlowSystem& sys, const Vec& v0, double t_end,
                     int steps, const IntegrateOptions& opt) {
  if (steps <= 0) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "steps must be positive");
  }
  Trajectory tr;
  tr.times.reserve(steps + 1);
  tr.states.reserve(steps + 1);
  const double dt = t_end / steps;
  Vec v = v0;
  tr.times.push_back(0.0);
  tr.states.push_back(v);
  for (int i = 1; i <= steps; ++i) {
    v = step(sys, v, dt, opt);
    tr.times.push_back(i * dt);
    tr.states.push_back(v);
  }
  return tr;
}

Vec flow_to(const FlowSystem& sys, const Vec& v0, double t_end, int steps,
            const IntegrateOptions& opt) {
  const double dt = t_end / steps;
  Vec v = v0;
  for (int i = 0; i < steps; ++i) v = step(sys, v, dt, opt);
  return v;
}

ShiftReport shifted_flow_check(const PolyJet& h, double lambda,
                               const Mat& omega, const Mat& xi, const Vec& v0,
                               double t_end, int steps, int samples) {
  const int d = static_cast<int>(omega.rows());
  Mat kmat = -omega * xi;
  if ((kmat - kmat.transpose()).norm() > 1e-10 * (1.0 + kmat.norm())) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "generator is not infinitesimally symplectic");
  }
  kmat = 0.5 * (kmat + kmat.transpose());
  const PolyJet kjet = quadratic_form_jet(kmat);

  // Noether precheck on a deterministic fan of points around v0.
  const Mat P = -omega.inverse();
  ShiftReport rep;
  Vec p = v0;
  for (int s = 0; s < 8; ++s) {
    const Vec gh = h.gradient(p, lambda);
    const Vec gk = kmat * p;
    const double bracket = gk.dot(P * gh);
    const double sc = 1.0 + gh.norm() * gk.norm();
    rep.noether_residual = std::max(rep.noether_residual,
                                    std::abs(bracket) / sc);
    p = 0.92 * (expm(Mat(0.37 * xi)) * p) + 0.05 * Vec::Ones(d);
  }
  if (rep.noether_residual > 1e-9) {
    throw HopfError(ErrorCode::NOETHER_VIOLATION,
                    "momentum bracket with h does not vanish");
  }

  PolyJet h_at(h);
  FlowSystem plain(h_at, lambda, omega);
  PolyJet shifted_h = h;
  shifted_h -= kjet;
  FlowSystem shifted(shifted_h, lambda, omega);

  Trajectory tf = integrate(plain, v0, t_end, steps);
  Trajectory tg = integrate(shifted, v0, t_end, steps);
  const int stride = std::max(1, steps / samples);
  for (int i = 0; i <= steps; i += stride) {
    const Mat drift = expm(Mat(-tf.times[i] * xi));
    rep.max_deviation = std::max(
        rep.max_deviation, (tg.states[i] - drift * tf.states[i]).norm());
  }
  return rep;
}

double rpo_residual(const FlowSystem& sys, const Vec& v, double tau,
                    const Mat& g, double dt, int samples) {
  const int per_sample = std::max(1, static_cast<int>(std::ceil(
                                         tau / (samples * dt))));
  const int n_tau = per_sample * samples;
  Trajectory tr = integrate(sys, v, 2.0 * tau, 2 * n_tau);
  double scale = 0.0;
  for (int i = 0; i <= n_tau; ++i) scale = std::max(scale, tr.states[i].norm());
  scale = std::max(scale, 1e-12);
  double worst = 0.0;
  for (int s = 0; s <= samples; ++s) {
    const int i = s * per_sample;
    worst = std::max(worst,
                     (tr.states[i + n_tau] - g * tr.states[i]).norm());
  }
  return worst / scale;
}

ShootingResult shooting_refine(const FlowSystem& sys, const Vec& v_guess,
                               double tau_guess,
                               const std::vector<Mat>& phase_generators,
                               double dt, int max_iter) {
  const int d = sys.dim();
  const Vec x0 = sys.field(v_guess);
  if (x0.norm() <= 1e-12 * (1.0 + v_guess.norm())) {
    throw HopfError(ErrorCode::SECTION_DEGENERATE,
                    "flow vanishes at the section point");
  }
  const double e0 = sys.energy(v_guess);
  const int m = d + 2 + static_cast<int>(phase_generators.size());
  const double scale = std::max(1.0, v_guess.norm());

  auto steps_for = [&](double tau) {
    return std::max(16, static_cast<int>(std::ceil(std::abs(tau) / dt)));
  };
  auto residual = [&](const Vec& v, double tau) -> Vec {
    Vec r(m);
    r.head(d) = flow_to(sys, v, tau, steps_for(tau)) - v;
    int k = d;
    r(k++) = (v - v_guess).dot(x0);
    for (const Mat& gen : phase_generators) {
      r(k++) = (v - v_guess).dot(gen * v_guess);
    }
    r(k++) = sys.energy(v) - e0;
    return r;
  };

  Vec v = v_guess;
  double tau = tau_guess;
  Vec r = residual(v, tau);
  double best = r.norm();
  const double initial = best;
  int stalls = 0;
  ShootingResult out{v, tau, best, 0};
  for (int it = 0; it < max_iter; ++it) {
    if (best <= 1e-11 * scale || stalls >= 2) break;
    Mat Jac(m, d + 1);
    const double eps = 1e-7 * scale;
    for (int j = 0; j < d; ++j) {
      Vec vp = v;
      vp(j) += eps;
      Jac.col(j) = (residual(vp, tau) - r) / eps;
    }
    // d/dtau of the return point is the field there; the pins do not
    // depend on tau.
    Vec dtau = Vec::Zero(m);
    dtau.head(d) = sys.field(r.head(d) + v);
    Jac.col(d) = dtau;

    Vec delta = Jac.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
                    .solve(r);
    v -= delta.head(d);
    tau -= delta(d);
    r = residual(v, tau);
    const double now = r.norm();
    out.iterations = it + 1;
    if (!std::isfinite(now) || now > 10.0 * initial + 1e-9) {
      throw HopfError(ErrorCode::NEWTON_DIVERGED,
                      "shooting residual diverged");
    }
    stalls = now > 0.7 * best ? stalls + 1 : 0;
    best = now;
  }
  out.v = v;
  out.tau = tau;
  out.residual = best;
  return out;
}

}  // namespace hopf
