#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hopf/report.hpp"
#include "hopf/so3.hpp"

namespace {

using namespace hopf;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::vector<std::string> tol_overrides;
  int jobs = 1;
  unsigned long long seed = 20260814ULL;
};

void add_common(CLI::App* sub, CommonOpts& o, bool need_config) {
  auto* c = sub->add_option("--config", o.config_path,
                            "JSON run configuration");
  if (need_config) c->required();
  sub->add_option("--out", o.out_path, "output file (default stdout)");
  sub->add_option("--format", o.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--tol", o.tol_overrides,
                  "tolerance override name=value (repeatable)");
  sub->add_option("--jobs", o.jobs, "worker cap (grids are cheap; accepted "
                                    "for compatibility)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.seed, "seed for randomized self checks");
}

RunConfig load_config(const CommonOpts& o) {
  std::ifstream in(o.config_path);
  if (!in) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "cannot open config file " + o.config_path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_config_text(ss.str());
  for (const std::string& ov : o.tol_overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) {
      throw HopfError(ErrorCode::SCHEMA_ERROR,
                      "--tol expects name=value, got '" + ov + "'");
    }
    const std::string name = ov.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(ov.substr(eq + 1));
    } catch (const std::exception&) {
      throw HopfError(ErrorCode::SCHEMA_ERROR,
                      "--tol " + name + ": expected a number");
    }
    if (value <= 0.0 || !cfg.tol.set(name, value)) {
      throw HopfError(ErrorCode::SCHEMA_ERROR,
                      "--tol " + name + ": unknown tolerance or bad value");
    }
  }
  if (!o.out_path.empty()) cfg.out_path = o.out_path;
  if (!o.format.empty()) cfg.format = o.format;
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& kind,
          const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::path target(cfg.out_path);
  std::error_code ec;
  if (std::filesystem::is_directory(target, ec)) {
    target /= kind + (cfg.format == "csv" ? std::string(".csv")
                                          : std::string(".json"));
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "cannot write " + target.string());
  }
  out << text;
}

void emit_report(const RunConfig& cfg, const std::string& kind, Json body) {
  if (cfg.format == "csv") {
    emit(cfg, kind, render_csv(body));
  } else {
    emit(cfg, kind, render_json(wrap_report(kind, std::move(body))));
  }
}

// The representation study bypasses the family pipeline; every subcommand
// that needs a one-parameter family refuses it up front.
void require_family(const RunConfig& cfg) {
  if (cfg.so3_model) {
    throw HopfError(ErrorCode::SCHEMA_ERROR,
                    "/model: so3_rep5 is only supported by the analyze "
                    "subcommand");
  }
}

std::vector<std::pair<double, double>> final_detunings(
    const RunConfig& cfg, double nu0) {
  std::vector<std::pair<double, double>> out = cfg.detunings;
  for (double p : cfg.products) out.push_back(o2_split_product(p, nu0));
  if (out.empty()) out.emplace_back(0.0, 0.0);
  return out;
}

int run_analyze(const CommonOpts& o) {
  const RunConfig cfg = load_config(o);
  if (cfg.so3_model) {
    emit_report(cfg, "analyze",
                so3_analysis_json(cfg.so3_b1, cfg.so3_b2, cfg.so3_b3));
    return 0;
  }
  const AnalysisResult a = run_analysis(cfg.family, cfg.lo, cfg.hi, cfg.tol);
  emit_report(cfg, "analyze", analysis_json(a, cfg.tol));
  return 0;
}

int run_resonance_cmd(const CommonOpts& o) {
  const RunConfig cfg = load_config(o);
  require_family(cfg);
  const ResonanceResult r = run_resonance(cfg.family, cfg.lo, cfg.hi, cfg.tol);
  emit_report(cfg, "resonance", resonance_result_json(r, cfg.tol));
  return 0;
}

struct BranchFlags {
  std::vector<double> radii;
  double alpha = 0.0, xi = 0.0, product = 0.0;
  bool has_alpha = false, has_xi = false, has_product = false;
};

void apply_branch_flags(RunConfig& cfg, const BranchFlags& f) {
  if (!f.radii.empty()) cfg.radii = f.radii;
  if (f.has_product) {
    cfg.detunings.clear();
    cfg.products = {f.product};
  } else if (f.has_alpha || f.has_xi) {
    cfg.detunings = {{f.alpha, f.xi}};
    cfg.products.clear();
  }
}

int run_branches_cmd(const CommonOpts& o, const BranchFlags& f) {
  RunConfig cfg = load_config(o);
  require_family(cfg);
  apply_branch_flags(cfg, f);
  const AnalysisResult a = run_analysis(cfg.family, cfg.lo, cfg.hi, cfg.tol);
  const BranchesResult b = run_branches(
      cfg.family, a, cfg.radii, final_detunings(cfg, a.frame.nu0), cfg.tol);
  if (cfg.format == "csv") {
    emit(cfg, "branches", branches_csv(b));
  } else {
    emit_report(cfg, "branches", branches_json(b, cfg.tol));
  }
  return 0;
}

int run_verify(const CommonOpts& o, const BranchFlags& f, int point_index,
               int steps) {
  RunConfig cfg = load_config(o);
  require_family(cfg);
  apply_branch_flags(cfg, f);
  if (point_index >= 0) cfg.point_index = point_index;
  if (steps > 0) cfg.steps_per_period = steps;
  const AnalysisResult a = run_analysis(cfg.family, cfg.lo, cfg.hi, cfg.tol);
  const BranchesResult b = run_branches(
      cfg.family, a, cfg.radii, final_detunings(cfg, a.frame.nu0), cfg.tol);
  if (cfg.point_index >= static_cast<int>(b.points.size())) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "point_index beyond the branch table");
  }
  const RpoCertificate cert = verify_rpo(
      cfg.family, a, b.points[cfg.point_index], cfg.steps_per_period, cfg.tol);
  emit_report(cfg, "verify", certificate_json(cert, cfg.tol));
  return 0;
}

int run_sweep_cmd(const CommonOpts& o, int npoints) {
  RunConfig cfg = load_config(o);
  require_family(cfg);
  if (npoints > 0) cfg.npoints = npoints;
  const AnalysisResult a = run_analysis(cfg.family, cfg.lo, cfg.hi, cfg.tol);
  const auto rows = run_sweep(a.coeffs, cfg.lo, cfg.hi, cfg.npoints);
  if (cfg.format == "csv") {
    emit(cfg, "sweep", sweep_csv(rows));
  } else {
    emit_report(cfg, "sweep", sweep_json(rows));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// selftest

struct SelfCheck {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool ok() const { return residual <= threshold; }
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = (rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Vec random_vec(std::mt19937_64& rng, int dim, double amp) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = uniform(rng, -amp, amp);
  return v;
}

Mat random_symplectic(std::mt19937_64& rng, const Mat& omega, double amp) {
  const int d = static_cast<int>(omega.rows());
  Mat S(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) S(i, j) = S(j, i) = uniform(rng, -amp, amp);
  return expm(Mat(-omega.inverse() * S));
}

int run_selftest(unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::vector<SelfCheck> checks;
  const OscillatorParams params;
  const HamiltonianFamily fam = coupled_oscillator_family(params);
  const double k0 = params.k_critical();

  {
    SelfCheck c{"integrator-energy", 0.0, 1e-10};
    const FlowSystem sys(fam.jet, 0.9, fam.omega);
    const Vec v0 = random_vec(rng, 8, 0.1);
    const Trajectory traj = integrate(sys, v0, 20.0, 1024);
    const double e0 = sys.energy(v0);
    for (const Vec& v : traj.states)
      c.residual = std::max(c.residual, std::abs(sys.energy(v) - e0));
    checks.push_back(c);
  }
  {
    SelfCheck c{"integrator-order", 0.0, 0.5};
    const FlowSystem sys(fam.jet, 0.9, fam.omega);
    const Vec v0 = random_vec(rng, 8, 0.3);
    const Vec ref = flow_to(sys, v0, 1.0, 320);
    const double e1 = (flow_to(sys, v0, 1.0, 10) - ref).norm();
    const double e2 = (flow_to(sys, v0, 1.0, 20) - ref).norm();
    const double order = std::log2(e1 / e2);
    c.residual = std::max(0.0, 4.0 - order);
    checks.push_back(c);
  }
  {
    SelfCheck c{"noether-shift", 0.0, 1e-8};
    const Mat xi = 0.3 * oscillator_rotation_generator();
    const Vec v0 = random_vec(rng, 8, 0.2);
    const ShiftReport r =
        shifted_flow_check(fam.jet, 0.95, fam.omega, xi, v0, 5.0, 512);
    c.residual = r.max_deviation;
    checks.push_back(c);
  }
  {
    SelfCheck c{"momentum-drift", 0.0, 1e-10};
    const FlowSystem sys(fam.jet, 1.05, fam.omega);
    const PolyJet K = oscillator_momentum();
    const Vec v0 = random_vec(rng, 8, 0.2);
    const Trajectory traj = integrate(sys, v0, 10.0, 512);
    const double K0 = K.eval(v0, 0.0);
    for (const Vec& v : traj.states)
      c.residual = std::max(c.residual, std::abs(K.eval(v, 0.0) - K0));
    checks.push_back(c);
  }
  {
    SelfCheck c{"frame-residuals", 0.0, 1e-8};
    const Mat A = oscillator_linearization(params, k0);
    const ResonanceData R =
        resonance_space(A, fam.omega, params.nu_critical());
    const CanonicalFrame F = williamson_frame(R, fam.group);
    c.residual = std::max({F.residual_A, F.residual_omega, F.metric_residual});
    checks.push_back(c);
  }
  {
    SelfCheck c{"frame-conjugated", 0.0, 1e-8};
    for (int trial = 0; trial < 3; ++trial) {
      const Mat M = random_symplectic(rng, fam.omega, 0.2);
      const Mat A = M.inverse() * oscillator_linearization(params, k0) * M;
      GroupData G;
      const Mat Minv = M.inverse();
      for (const Mat& g : fam.group.finite_generators)
        G.finite_generators.push_back(Minv * g * M);
      for (const Mat& g : fam.group.algebra_generators)
        G.algebra_generators.push_back(Minv * g * M);
      G.finite_names = fam.group.finite_names;
      G.algebra_names = fam.group.algebra_names;
      const ResonanceData R =
          resonance_space(A, fam.omega, params.nu_critical());
      const CanonicalFrame F = williamson_frame(R, G);
      c.residual = std::max(
          {c.residual, F.residual_A, F.residual_omega, F.metric_residual});
    }
    checks.push_back(c);
  }

  Tolerances tol;
  const AnalysisResult a = run_analysis(fam, 0.9, 1.1, tol);
  {
    SelfCheck c{"normal-form-invariance", 0.0, 1e-9};
    c.residual = std::max(a.normalized.homological_residual,
                          a.normalized.invariance_residual);
    checks.push_back(c);
  }
  {
    SelfCheck c{"coefficients-at-event", 0.0, 1e-8};
    c.residual = std::max({std::abs(a.coeffs.sigma0),
                           std::abs(a.coeffs.rho0 + 1.0),
                           std::abs(a.coeffs.tau0),
                           std::abs(a.coeffs.psi0 - a.frame.nu0)});
    checks.push_back(c);
  }
  {
    SelfCheck c{"branch-law", 0.0, 1e-12};
    const BranchesResult b =
        run_branches(fam, a, {0.05}, {{0.01, 0.02}}, tol);
    const BranchPrediction& p = b.points[0].prediction;
    const double nu0 = a.frame.nu0;
    const double sp = a.coeffs.sigma_prime;
    const double delta = p.lambda - a.event.lambda_star;
    const double quad = (nu0 * p.alpha) * (nu0 * p.alpha);
    const double cross = 2.0 * nu0 * p.alpha * p.xi;
    const double eq1 = sp * delta + quad - cross + b.cframe.a * p.pi1 +
                       b.cframe.b * p.pi2;
    const double eq2 = sp * delta + quad + cross + b.cframe.a * p.pi2 +
                       b.cframe.b * p.pi1;
    c.residual = std::max(std::abs(eq1), std::abs(eq2));
    checks.push_back(c);
  }
  {
    SelfCheck c{"v1-derivative-oracle", 0.0, 0.6};
    const ReductionData red = build_reduction(a.normalized, a.coeffs);
    // Detuned point: at the event itself the coupling derivative vanishes
    // identically and the comparison would only measure roundoff.
    const double lam = a.event.lambda_star + 0.02;
    const double alpha = 0.01;
    const Mat xi_hat = 0.015 * standard_j(4);
    const Mat D = v1_derivative(red, lam, alpha, xi_hat);
    const Vec dir = random_vec(rng, 4, 1.0).normalized();
    auto err = [&](double amp) {
      const Vec v0 = amp * dir;
      const Vec direct = v1_solve(red, v0, lam, alpha, xi_hat);
      return (direct - D * v0).norm() / amp;
    };
    c.residual = err(0.005) / err(0.01);
    checks.push_back(c);
  }
  {
    SelfCheck c{"report-determinism", 0.0, 0.5};
    const std::string once = render_json(analysis_json(a, tol));
    const std::string twice = render_json(analysis_json(a, tol));
    c.residual = (once == twice) ? 0.0 : 1.0;
    checks.push_back(c);
  }

  int failed = 0;
  for (const SelfCheck& c : checks) {
    if (!c.ok()) ++failed;
    std::printf("%s %-24s residual=%.3e threshold=%.3e\n",
                c.ok() ? "ok  " : "FAIL", c.name.c_str(), c.residual,
                c.threshold);
  }
  std::printf("selftest: %zu checks, %d failed (seed %llu)\n", checks.size(),
              failed, seed);
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1:-1 resonance analysis for symmetric Hamiltonian families"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("hopf ") + version());

  CommonOpts oa, ores, obr, over, osw, ost;
  BranchFlags fbr, fver;
  int verify_point = -1, verify_steps = -1, sweep_npoints = -1;

  add_common(app.add_subcommand("analyze",
                                "locate the event and extract normal-form "
                                "coefficients"),
             oa, true);
  add_common(app.add_subcommand("resonance",
                                "resonance space and symmetry residuals"),
             ores, true);

  auto* br = app.add_subcommand("branches", "predicted branch table");
  add_common(br, obr, true);
  br->add_option("--r", fbr.radii, "kernel amplitudes (repeatable)");
  br->add_option("--alpha", fbr.alpha, "frequency detuning");
  br->add_option("--xi", fbr.xi, "drift speed");
  br->add_option("--product", fbr.product, "alpha*xi product");

  auto* ver = app.add_subcommand("verify", "shoot and certify one branch point");
  add_common(ver, over, true);
  ver->add_option("--r", fver.radii, "kernel amplitudes (repeatable)");
  ver->add_option("--alpha", fver.alpha, "frequency detuning");
  ver->add_option("--xi", fver.xi, "drift speed");
  ver->add_option("--product", fver.product, "alpha*xi product");
  ver->add_option("--point", verify_point, "branch table row to verify");
  ver->add_option("--steps", verify_steps, "integrator steps per period");

  auto* sw = app.add_subcommand("sweep", "spectral data over the window");
  add_common(sw, osw, true);
  sw->add_option("--npoints", sweep_npoints, "grid size");

  auto* st = app.add_subcommand("selftest", "deterministic property checks");
  add_common(st, ost, false);

  CLI11_PARSE(app, argc, argv);

  fbr.has_alpha = br->count("--alpha") > 0;
  fbr.has_xi = br->count("--xi") > 0;
  fbr.has_product = br->count("--product") > 0;
  fver.has_alpha = ver->count("--alpha") > 0;
  fver.has_xi = ver->count("--xi") > 0;
  fver.has_product = ver->count("--product") > 0;

  try {
    if (app.got_subcommand("analyze")) return run_analyze(oa);
    if (app.got_subcommand("resonance")) return run_resonance_cmd(ores);
    if (app.got_subcommand("branches")) return run_branches_cmd(obr, fbr);
    if (app.got_subcommand("verify"))
      return run_verify(over, fver, verify_point, verify_steps);
    if (app.got_subcommand("sweep")) return run_sweep_cmd(osw, sweep_npoints);
    if (app.got_subcommand("selftest")) return run_selftest(ost.seed);
  } catch (const hopf::HopfError& e) {
    const hopf::Json doc = hopf::wrap_report(
        "error", hopf::error_json(hopf::to_string(e.code()), e.what(),
                                  e.is_hypothesis_failure()));
    std::cout << hopf::render_json(doc);
    std::cerr << e.what() << "\n";
    return e.is_hypothesis_failure() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
