#include "hopf/pipeline.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace hopf {

namespace {

struct TolEntry {
  const char* name;
  double Tolerances::* member;
};

constexpr TolEntry kTolTable[] = {
    {"spectral", &Tolerances::spectral},
    {"collision", &Tolerances::collision},
    {"frame", &Tolerances::frame},
    {"equivariance", &Tolerances::equivariance},
    {"homological", &Tolerances::homological},
    {"fit", &Tolerances::fit},
    {"transversality", &Tolerances::transversality},
    {"certify", &Tolerances::certify},
};

}  // namespace

bool Tolerances::set(const std::string& name, double value) {
  for (const auto& e : kTolTable) {
    if (name == e.name) {
      this->*(e.member) = value;
      return true;
    }
  }
  return false;
}

std::vector<std::pair<std::string, double>> Tolerances::items() const {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& e : kTolTable) out.emplace_back(e.name, this->*(e.member));
  return out;
}

bool AnalysisResult::hypotheses_ok() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(),
                     [](const HypothesisCheck& h) { return h.passed; });
}

ResonanceResult run_resonance(const HamiltonianFamily& fam, double lo,
                              double hi, const Tolerances& tol) {
  const PolyJet jet = taylor_at_origin(fam.jet);
  const Mat minus_omega_inv = -fam.omega.inverse();
  auto A_of = [&](double lambda) {
    return Mat(minus_omega_inv * jet.hessian_at_zero(lambda));
  };

  ResonanceResult out;
  out.event = locate_collision(A_of, lo, hi, tol.collision);
  const Mat A_star = A_of(out.event.lambda_star);
  // The collision is localized to tol.collision, so the eigenvalue pairs at
  // lambda* are still split by about sqrt(tol.collision); the spectral
  // clustering has to ride above that scale or the quadruplet falls apart.
  const double spectral_eff =
      std::max(tol.spectral, 8.0 * std::sqrt(tol.collision));
  out.resonance = resonance_space(A_star, fam.omega, out.event.nu_star,
                                  spectral_eff);
  out.equivariance =
      verify_equivariance(out.resonance, A_star, fam.omega, fam.group);
  return out;
}

AnalysisResult run_analysis(const HamiltonianFamily& fam, double lo, double hi,
                            const Tolerances& tol) {
  AnalysisResult out;

  const double lin_norm = fam.jet.degree_part(0).coefficient_norm() +
                          fam.jet.degree_part(1).coefficient_norm();
  const PolyJet jet = taylor_at_origin(fam.jet);
  out.hypotheses.push_back(
      {"H1", true, lin_norm, "origin is an equilibrium for every lambda"});

  ResonanceResult res = run_resonance(fam, lo, hi, tol);
  out.event = res.event;
  out.resonance = res.resonance;
  out.equivariance = res.equivariance;
  const double equiv_evidence =
      std::max({out.equivariance.max_commutator, out.equivariance.max_subspace,
                out.equivariance.max_form});
  out.hypotheses.push_back({"H2", out.equivariance.ok(tol.equivariance),
                            equiv_evidence,
                            "generators preserve form, flow and resonance "
                            "space"});

  out.frame = williamson_frame(out.resonance, fam.group, tol.frame);
  const double frame_evidence =
      std::max({out.frame.residual_A, out.frame.residual_omega,
                out.frame.metric_residual});
  out.hypotheses.push_back({"H3", frame_evidence <= tol.frame, frame_evidence,
                            "nondegenerate 1:-1 pair in canonical form"});

  PolyJet frame_jet = jet.compose_linear(out.frame.ambient);
  if (out.frame.h_sign < 0.0) frame_jet *= -1.0;
  out.normalized = equivariant_normalize(frame_jet, out.frame.n,
                                         out.frame.nu0, out.event.lambda_star,
                                         tol.homological);
  out.coeffs = extract_coefficients(out.normalized, tol.fit);
  out.verdict = krein_classify(out.coeffs, lo, hi, tol.transversality);
  out.event.classification = out.verdict.classification;
  out.hypotheses.push_back(
      {"H4",
       out.verdict.classification == Classification::COLLISION_SPLIT,
       std::abs(out.verdict.sigma_prime),
       "eigenvalues collide and split with nonzero speed"});

  // Closed-form eigenvalues against the eigensolver across the window.
  const Mat J = standard_j(4 * out.frame.n);
  double worst = 0.0;
  const int grid = 21;
  for (int i = 0; i < grid; ++i) {
    const double lam = lo + (hi - lo) * i / (grid - 1.0);
    const auto closed = eigenvalues_closed_form(
        out.coeffs.sigma.eval(lam), out.coeffs.rho.eval(lam),
        out.coeffs.tau.eval(lam), out.coeffs.psi.eval(lam));
    const Mat Af = J * out.normalized.jet.hessian_at_zero(lam);
    const Eigen::EigenSolver<Mat> es(Af);
    for (int k = 0; k < Af.rows(); ++k) {
      double best = std::numeric_limits<double>::infinity();
      for (const Complex& mu : closed)
        best = std::min(best, std::abs(es.eigenvalues()(k) - mu));
      worst = std::max(worst, best);
    }
    for (const Complex& mu : closed) {
      double best = std::numeric_limits<double>::infinity();
      for (int k = 0; k < Af.rows(); ++k)
        best = std::min(best, std::abs(es.eigenvalues()(k) - mu));
      worst = std::max(worst, best);
    }
  }
  out.spectral_check = worst;
  return out;
}

namespace {

/// Time-1 flow of the cubic generator's Hamiltonian field (frame form J),
/// mapping normalized coordinates back to pre-transform frame coordinates.
Vec lie_pullback(const PolyJet& chi3, const Vec& w, double lambda) {
  const Mat J = standard_j(static_cast<int>(w.size()));
  auto field = [&](const Vec& v) { return Vec(J * chi3.gradient(v, lambda)); };
  Vec v = w;
  const int steps = 16;
  const double h = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    const Vec k1 = field(v);
    const Vec k2 = field(v + 0.5 * h * k1);
    const Vec k3 = field(v + 0.5 * h * k2);
    const Vec k4 = field(v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

}  // namespace

BranchesResult run_branches(const HamiltonianFamily& fam,
                            const AnalysisResult& analysis,
                            const std::vector<double>& radii,
                            const std::vector<std::pair<double, double>>& detunings,
                            const Tolerances& tol) {
  (void)tol;
  const CanonicalFrame& F = analysis.frame;
  if (2 * F.n != 4) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "branch table needs a 4-dimensional kernel block");
  }
  if (fam.group.algebra_generators.empty()) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "branch table needs a rotation generator");
  }
  if (fam.group.finite_generators.empty()) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "branch table needs a reflection generator");
  }
  const Mat& U = analysis.resonance.basis;
  const Mat xi_U = U.transpose() * fam.group.algebra_generators[0] * U;
  const Mat tau_U = U.transpose() * fam.group.finite_generators[0] * U;
  const Mat xi_v0 = check_block_action(F, xi_U, true).block;
  const Mat tau_v0 = check_block_action(F, tau_U, false).block;

  const ReductionData red = build_reduction(analysis.normalized,
                                            analysis.coeffs);

  BranchesResult out;
  out.cframe = complex_frame_o2(xi_v0, tau_v0, red.quartic_v0,
                                analysis.event.lambda_star);
  out.kappa = out.cframe.kappa;

  const double nu0 = F.nu0;
  const double lambda0 = analysis.event.lambda_star;
  const Mat xi_unit_ambient =
      fam.group.algebra_generators[0] / out.kappa;
  const Mat xi_unit_v0 = xi_v0 / out.kappa;

  for (double r : radii) {
    for (const auto& [alpha, xi] : detunings) {
      BranchPoint pt;
      pt.r = r;
      pt.prediction = o2_branch(out.cframe.a, out.cframe.b,
                                analysis.coeffs.sigma_prime, nu0, lambda0,
                                r * r, alpha, xi);
      if (!pt.prediction.admissible) {
        out.points.push_back(pt);
        continue;
      }
      const double z1 = std::sqrt(std::max(0.0, pt.prediction.pi1));
      const double z2 = std::sqrt(std::max(0.0, pt.prediction.pi2));
      pt.v0_kernel = out.cframe.embed(Complex(z1, 0.0), Complex(z2, 0.0));

      const double zeta = nu0 * (1.0 + pt.prediction.alpha);
      const double alpha_abs = zeta - nu0;
      const Mat xi_hat = pt.prediction.xi * xi_unit_v0;
      const Vec v1 = v1_solve(red, pt.v0_kernel, pt.prediction.lambda,
                              alpha_abs, xi_hat);
      Vec w(4 * F.n);
      w << pt.v0_kernel, v1;
      pt.v_frame = lie_pullback(analysis.normalized.chi3, w,
                                pt.prediction.lambda);
      pt.v_ambient = F.ambient * pt.v_frame;
      pt.tau = 2.0 * std::acos(-1.0) / zeta;
      pt.drift = pt.prediction.xi * xi_unit_ambient;
      out.points.push_back(pt);
    }
  }
  return out;
}

RpoCertificate verify_rpo(const HamiltonianFamily& fam,
                          const AnalysisResult& analysis,
                          const BranchPoint& pt, int steps_per_period,
                          const Tolerances& tol) {
  if (!pt.prediction.admissible || pt.v_ambient.size() == 0) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "cannot verify an inadmissible branch point");
  }
  const double lambda = pt.prediction.lambda;
  PolyJet shifted = fam.jet;
  const bool drifting = pt.drift.norm() > 0.0;
  if (drifting) {
    shifted -= quadratic_form_jet(Mat(-fam.omega * pt.drift));
  }
  const FlowSystem sys_shift(shifted, lambda, fam.omega);
  const FlowSystem sys_plain(fam.jet, lambda, fam.omega);
  const double dt = pt.tau / steps_per_period;

  const ShootingResult shoot =
      shooting_refine(sys_shift, pt.v_ambient, pt.tau,
                      fam.group.algebra_generators, dt);

  RpoCertificate cert;
  cert.lambda = lambda;
  cert.tau = shoot.tau;
  cert.tau_predicted = pt.tau;
  const double base = 2.0 * std::acos(-1.0) / analysis.event.nu_star;
  cert.tau_deviation = std::abs(shoot.tau - base) / base;
  cert.shoot_residual = shoot.residual;
  cert.iterations = shoot.iterations;

  const Mat g = drifting ? expm(Mat(shoot.tau * pt.drift))
                         : Mat(Mat::Identity(pt.drift.rows(), pt.drift.cols()));
  cert.residual = rpo_residual(sys_plain, shoot.v, shoot.tau, g, dt);

  const Trajectory traj =
      integrate(sys_plain, shoot.v, shoot.tau, steps_per_period);
  const double e0 = sys_plain.energy(shoot.v);
  double drift_max = 0.0;
  for (const Vec& v : traj.states)
    drift_max = std::max(drift_max, std::abs(sys_plain.energy(v) - e0));
  cert.energy_drift = drift_max / std::max(1.0, std::abs(e0));

  cert.accepted = cert.residual < tol.certify;
  return cert;
}

std::vector<SweepRow> run_sweep(const HessianCoefficients& c, double lo,
                                double hi, int npoints) {
  if (npoints < 2) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "sweep needs >= 2 points");
  }
  std::vector<SweepRow> rows;
  rows.reserve(npoints);
  for (int i = 0; i < npoints; ++i) {
    SweepRow row;
    row.lambda = lo + (hi - lo) * i / (npoints - 1.0);
    row.sigma = c.sigma.eval(row.lambda);
    row.rho = c.rho.eval(row.lambda);
    row.tau = c.tau.eval(row.lambda);
    row.psi = c.psi.eval(row.lambda);
    row.f1 = row.rho * row.sigma - row.tau * row.tau;
    row.mu = eigenvalues_closed_form(row.sigma, row.rho, row.tau, row.psi);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hopf
