#include "hopf/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>

#include "hopf/so3.hpp"

namespace hopf {

const char* version() { return "1.0.0"; }

namespace {

std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Json checked(double value, double tol) {
  return Json{{"value", value}, {"tol", tol}, {"pass", value <= tol}};
}

Json to_json(const Tolerances& tol) {
  Json j;
  for (const auto& [name, value] : tol.items()) j[name] = value;
  return j;
}

Json to_json(const HopfEvent& e) {
  return Json{{"lambda_star", e.lambda_star},
              {"nu_star", e.nu_star},
              {"classification", to_string(e.classification)}};
}

Json to_json(const EquivarianceReport& r, double tol) {
  return Json{{"max_commutator", checked(r.max_commutator, tol)},
              {"max_subspace", checked(r.max_subspace, tol)},
              {"max_form", checked(r.max_form, tol)}};
}

Json resonance_json(const ResonanceData& r) {
  return Json{{"dim", r.dim()},
              {"nu0", r.nu0},
              {"period", r.period},
              {"kmax", r.kmax},
              {"harmonics", r.harmonics}};
}

Json frame_json(const CanonicalFrame& f, double tol) {
  return Json{{"n", f.n},
              {"nu0", f.nu0},
              {"case_sign", to_string(f.case_sign)},
              {"h_sign", f.h_sign},
              {"residual_a", checked(f.residual_A, tol)},
              {"residual_omega", checked(f.residual_omega, tol)},
              {"metric_residual", checked(f.metric_residual, tol)}};
}

Json coefficients_json(const HessianCoefficients& c, double tol) {
  return Json{{"sigma0", c.sigma0},
              {"rho0", c.rho0},
              {"tau0", c.tau0},
              {"psi0", c.psi0},
              {"sigma_prime", c.sigma_prime},
              {"rho_prime", c.rho_prime},
              {"tau_prime", c.tau_prime},
              {"psi_prime", c.psi_prime},
              {"fit_residual", checked(c.fit_residual, tol)},
              {"fd_residual", checked(c.fd_residual, tol)}};
}

namespace {

Json hypotheses_json(const std::vector<HypothesisCheck>& hs) {
  Json arr = Json::array();
  for (const auto& h : hs) {
    arr.push_back(Json{{"name", h.name},
                       {"passed", h.passed},
                       {"evidence", h.evidence},
                       {"detail", h.detail}});
  }
  return arr;
}

}  // namespace

Json analysis_json(const AnalysisResult& a, const Tolerances& tol) {
  Json j;
  j["tolerances"] = to_json(tol);
  j["hopf_events"] = Json::array({to_json(a.event)});
  j["resonance"] = resonance_json(a.resonance);
  j["equivariance"] = to_json(a.equivariance, tol.equivariance);
  j["frame"] = frame_json(a.frame, tol.frame);
  j["normal_form"] =
      Json{{"homological_residual",
            checked(a.normalized.homological_residual, tol.homological)},
           {"invariance_residual",
            checked(a.normalized.invariance_residual, tol.homological)}};
  j["coefficients"] = coefficients_json(a.coeffs, tol.fit);
  j["verdict"] = Json{{"classification", to_string(a.verdict.classification)},
                      {"f1_sign_change", a.verdict.f1_sign_change},
                      {"sigma_prime", a.verdict.sigma_prime}};
  j["spectral_check"] = checked(a.spectral_check, 1e-8);
  j["hypotheses"] = hypotheses_json(a.hypotheses);
  return j;
}

Json so3_analysis_json(double b1, double b2, double b3) {
  const Z3Analysis z3 = so3_z3_analysis(b1, b2, b3);
  Json j;
  j["model"] = "so3_rep5";
  j["params"] = Json{{"b1", b1}, {"b2", b2}, {"b3", b3}};
  auto mat = [](const Mat& M) {
    Json rows = Json::array();
    for (int r = 0; r < M.rows(); ++r) {
      Json row = Json::array();
      for (int c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  j["z3_reduction"] =
      Json{{"c_hat_symbolic", mat(z3.c_hat_symbolic)},
           {"c_hat_sampled", mat(z3.c_hat_sampled)},
           {"agreement", checked(z3.agreement, 1e-10)},
           {"leak_residual", checked(z3.leak_residual, 1e-10)},
           {"delta", Json::array({z3.delta(0), z3.delta(1)})},
           {"rank_ok", z3.rank_ok},
           {"c1", z3.c1}};
  Json lattice = Json::array();
  for (const IsotropyRecord& rec : so3_isotropy_lattice()) {
    Json entry{{"isotropy", rec.name},
               {"fixed_dim", rec.fixed_dim},
               {"normalizer", rec.normalizer_label},
               {"verdict", to_string(rec.verdict)}};
    if (rec.has_quotient) {
      entry["quotient"] = to_string(rec.quotient);
      entry["count"] = rec.count;
    }
    lattice.push_back(entry);
  }
  j["isotropy_lattice"] = lattice;
  return j;
}

Json resonance_result_json(const ResonanceResult& r, const Tolerances& tol) {
  Json j;
  j["tolerances"] = to_json(tol);
  j["hopf_events"] = Json::array({to_json(r.event)});
  j["resonance"] = resonance_json(r.resonance);
  j["equivariance"] = to_json(r.equivariance, tol.equivariance);
  return j;
}

Json branches_json(const BranchesResult& b, const Tolerances& tol) {
  Json j;
  j["tolerances"] = to_json(tol);
  j["kernel_frame"] =
      Json{{"kappa", b.kappa},
           {"a", b.cframe.a},
           {"b", b.cframe.b},
           {"fit_residual", checked(b.cframe.fit_residual, tol.fit)},
           {"weight_residual", checked(b.cframe.weight_residual, tol.fit)},
           {"tau_residual", checked(b.cframe.tau_residual, tol.fit)}};
  Json arr = Json::array();
  for (const auto& p : b.points) {
    Json row{{"r", p.r},
             {"type", to_string(p.prediction.type)},
             {"lambda", p.prediction.lambda},
             {"alpha", p.prediction.alpha},
             {"xi", p.prediction.xi},
             {"pi1", p.prediction.pi1},
             {"pi2", p.prediction.pi2},
             {"admissible", p.prediction.admissible}};
    if (p.prediction.admissible) {
      row["tau"] = p.tau;
      row["amplitude_ambient"] = p.v_ambient.norm();
    }
    arr.push_back(row);
  }
  j["points"] = arr;
  return j;
}

Json certificate_json(const RpoCertificate& c, const Tolerances& tol) {
  Json j;
  j["tolerances"] = to_json(tol);
  j["certificate"] =
      Json{{"lambda", c.lambda},
           {"tau", c.tau},
           {"tau_predicted", c.tau_predicted},
           {"tau_deviation", checked(c.tau_deviation, 0.05)},
           {"shoot_residual", c.shoot_residual},
           {"rpo_residual", checked(c.residual, tol.certify)},
           {"energy_drift", checked(c.energy_drift, 1e-8)},
           {"iterations", c.iterations},
           {"accepted", c.accepted}};
  return j;
}

Json sweep_json(const std::vector<SweepRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json row{{"lambda", r.lambda}};
    Json mus = Json::array();
    for (const Complex& m : r.mu)
      mus.push_back(Json{{"re", m.real()}, {"im", m.imag()}});
    row["mu"] = mus;
    row["sigma"] = r.sigma;
    row["rho"] = r.rho;
    row["tau"] = r.tau;
    row["psi"] = r.psi;
    row["f1"] = r.f1;
    arr.push_back(row);
  }
  return Json{{"rows", arr}};
}

Json error_json(const std::string& code, const std::string& message,
                bool hypothesis_failure) {
  return Json{{"error", Json{{"code", code},
                             {"message", message},
                             {"hypothesis_failure", hypothesis_failure}}}};
}

Json wrap_report(const std::string& kind, Json body) {
  Json j;
  j["meta"] = Json{{"tool", "hopf"},
                   {"version", version()},
                   {"kind", kind},
                   {"generated_at", utc_now()}};
  j["report"] = std::move(body);
  return j;
}

std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

namespace {

void flatten(const Json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (j.is_array()) {
    int i = 0;
    for (const auto& value : j) {
      flatten(value, prefix + "[" + std::to_string(i++) + "]", out);
    }
  } else {
    out += prefix;
    out += ',';
    if (j.is_number_float()) {
      out += num17(j.get<double>());
    } else {
      const std::string d = j.dump();
      out += d;
    }
    out += '\n';
  }
}

}  // namespace

std::string render_csv(const Json& j) {
  std::string out = "key,value\n";
  flatten(j, "", out);
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "lambda,re_mu1,im_mu1,re_mu2,im_mu2,re_mu3,im_mu3,re_mu4,im_mu4,"
      "sigma,rho,tau,psi,f1\n";
  for (const auto& r : rows) {
    out += num17(r.lambda);
    for (const Complex& m : r.mu) {
      out += ',' + num17(m.real()) + ',' + num17(m.imag());
    }
    out += ',' + num17(r.sigma) + ',' + num17(r.rho) + ',' + num17(r.tau) +
           ',' + num17(r.psi) + ',' + num17(r.f1) + '\n';
  }
  return out;
}

namespace {

[[noreturn]] void schema_fail(const std::string& ptr, const std::string& msg) {
  throw HopfError(ErrorCode::SCHEMA_ERROR, ptr + ": " + msg);
}

double need_number(const Json& j, const std::string& ptr) {
  if (!j.is_number()) schema_fail(ptr, "expected a number");
  return j.get<double>();
}

int need_int(const Json& j, const std::string& ptr) {
  if (!j.is_number_integer()) schema_fail(ptr, "expected an integer");
  return j.get<int>();
}

Mat need_matrix(const Json& j, int dim, const std::string& ptr) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    schema_fail(ptr, "expected a " + std::to_string(dim) + "x" +
                         std::to_string(dim) + " matrix");
  }
  Mat M(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      schema_fail(ptr + "/" + std::to_string(r),
                  "expected a row of length " + std::to_string(dim));
    }
    for (int c = 0; c < dim; ++c)
      M(r, c) = need_number(row[c], ptr + "/" + std::to_string(r) + "/" +
                                        std::to_string(c));
  }
  return M;
}

HamiltonianFamily parse_inline_model(const Json& m) {
  static const char* keys[] = {"name", "dim",   "max_degree",
                               "terms", "omega", "group"};
  for (const auto& [key, value] : m.items()) {
    (void)value;
    if (std::find_if(std::begin(keys), std::end(keys), [&](const char* k) {
          return key == k;
        }) == std::end(keys)) {
      schema_fail("/model/" + key, "unknown key");
    }
  }
  if (!m.contains("dim")) schema_fail("/model/dim", "missing");
  const int dim = need_int(m["dim"], "/model/dim");
  if (dim < 2 || dim > 16 || dim % 2 != 0) {
    schema_fail("/model/dim", "expected an even dimension between 2 and 16");
  }
  int max_degree = 4;
  if (m.contains("max_degree")) {
    max_degree = need_int(m["max_degree"], "/model/max_degree");
    if (max_degree < 2 || max_degree > 4)
      schema_fail("/model/max_degree", "expected 2..4");
  }
  if (!m.contains("terms") || !m["terms"].is_array()) {
    schema_fail("/model/terms", "expected an array of terms");
  }

  HamiltonianFamily fam;
  fam.name = m.value("name", std::string("inline"));
  fam.jet = PolyJet(dim, max_degree);
  int ti = 0;
  for (const Json& term : m["terms"]) {
    const std::string tp = "/model/terms/" + std::to_string(ti++);
    if (!term.is_object()) schema_fail(tp, "expected an object");
    if (!term.contains("exponents") || !term["exponents"].is_array() ||
        static_cast<int>(term["exponents"].size()) != dim) {
      schema_fail(tp + "/exponents",
                  "expected " + std::to_string(dim) + " exponents");
    }
    std::vector<int> exps(dim);
    int degree = 0;
    for (int k = 0; k < dim; ++k) {
      exps[k] = need_int(term["exponents"][k],
                         tp + "/exponents/" + std::to_string(k));
      if (exps[k] < 0) schema_fail(tp + "/exponents", "negative exponent");
      degree += exps[k];
    }
    if (!term.contains("coefficients") || !term["coefficients"].is_array() ||
        term["coefficients"].empty()) {
      schema_fail(tp + "/coefficients", "expected a nonempty array");
    }
    std::vector<double> coef;
    int ci = 0;
    for (const Json& c : term["coefficients"]) {
      coef.push_back(
          need_number(c, tp + "/coefficients/" + std::to_string(ci++)));
    }
    const bool nonzero =
        std::any_of(coef.begin(), coef.end(), [](double c) { return c != 0.0; });
    if (degree < 2 && nonzero) {
      throw HopfError(ErrorCode::H1_VIOLATION,
                      tp + ": constant or linear term breaks the "
                           "equilibrium hypothesis (H1)");
    }
    if (degree > max_degree) {
      schema_fail(tp + "/exponents", "total degree above the jet order");
    }
    LambdaPoly lp;
    for (int k = static_cast<int>(coef.size()) - 1; k >= 0; --k)
      lp += LambdaPoly::monomial(k, coef[k]);
    fam.jet.add_term(exps, lp);
  }

  if (m.contains("omega")) {
    fam.omega = need_matrix(m["omega"], dim, "/model/omega");
    try {
      require_symplectic_form(fam.omega);
    } catch (const HopfError& e) {
      schema_fail("/model/omega", e.what());
    }
  } else {
    fam.omega = standard_omega(dim);
  }

  if (m.contains("group")) {
    const Json& g = m["group"];
    if (!g.is_object()) schema_fail("/model/group", "expected an object");
    for (const auto& [key, value] : g.items()) {
      (void)value;
      if (key != "finite" && key != "algebra" && key != "finite_names" &&
          key != "algebra_names") {
        schema_fail("/model/group/" + key, "unknown key");
      }
    }
    auto parse_gens = [&](const char* key, std::vector<Mat>& out) {
      if (!g.contains(key)) return;
      const std::string gp = std::string("/model/group/") + key;
      if (!g[key].is_array()) schema_fail(gp, "expected an array");
      int gi = 0;
      for (const Json& gen : g[key]) {
        out.push_back(need_matrix(gen, dim, gp + "/" + std::to_string(gi++)));
      }
    };
    parse_gens("finite", fam.group.finite_generators);
    parse_gens("algebra", fam.group.algebra_generators);
    auto parse_names = [&](const char* key, std::vector<std::string>& out,
                           size_t want, const char* stem) {
      if (g.contains(key)) {
        const std::string gp = std::string("/model/group/") + key;
        if (!g[key].is_array() || g[key].size() != want) {
          schema_fail(gp, "expected one name per generator");
        }
        for (const Json& n : g[key]) {
          if (!n.is_string()) schema_fail(gp, "expected strings");
          out.push_back(n.get<std::string>());
        }
      } else {
        for (size_t i = 0; i < want; ++i)
          out.push_back(stem + std::to_string(i));
      }
    };
    parse_names("finite_names", fam.group.finite_names,
                fam.group.finite_generators.size(), "finite");
    parse_names("algebra_names", fam.group.algebra_names,
                fam.group.algebra_generators.size(), "algebra");
  }
  return fam;
}

}  // namespace

RunConfig parse_config(const Json& j) {
  if (!j.is_object()) schema_fail("", "expected a configuration object");
  static const char* keys[] = {"schema_version", "model", "params",
                               "lambda_interval", "tolerances", "radii",
                               "detunings", "products", "point_index",
                               "steps_per_period", "npoints", "outputs"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find_if(std::begin(keys), std::end(keys), [&](const char* k) {
          return key == k;
        }) == std::end(keys)) {
      schema_fail("/" + key, "unknown key");
    }
  }

  RunConfig cfg;
  if (j.contains("schema_version")) {
    if (need_int(j["schema_version"], "/schema_version") != 1) {
      schema_fail("/schema_version", "unsupported version (expected 1)");
    }
  }
  if (!j.contains("model")) schema_fail("/model", "missing");
  const Json& model = j["model"];
  if (model.is_string()) {
    const std::string name = model.get<std::string>();
    if (name != "coupled_oscillator" && name != "so3_rep5") {
      schema_fail("/model", "unknown model '" + name + "'");
    }
    cfg.named_model = true;
    cfg.so3_model = name == "so3_rep5";
    if (j.contains("params")) {
      const Json& p = j["params"];
      if (!p.is_object()) schema_fail("/params", "expected an object");
      for (const auto& [key, value] : p.items()) {
        if (!cfg.so3_model && key == "mass") {
          cfg.params.mass = need_number(value, "/params/mass");
        } else if (!cfg.so3_model && key == "gamma") {
          cfg.params.gamma = need_number(value, "/params/gamma");
        } else if (!cfg.so3_model && key == "eps") {
          cfg.params.eps = need_number(value, "/params/eps");
        } else if (cfg.so3_model && key == "b1") {
          cfg.so3_b1 = need_number(value, "/params/b1");
        } else if (cfg.so3_model && key == "b2") {
          cfg.so3_b2 = need_number(value, "/params/b2");
        } else if (cfg.so3_model && key == "b3") {
          cfg.so3_b3 = need_number(value, "/params/b3");
        } else {
          schema_fail("/params/" + key, "unknown key");
        }
      }
      if (cfg.params.mass <= 0.0) schema_fail("/params/mass", "must be > 0");
      if (cfg.params.gamma <= 0.0) schema_fail("/params/gamma", "must be > 0");
    }
    if (!cfg.so3_model) cfg.family = coupled_oscillator_family(cfg.params);
  } else if (model.is_object()) {
    if (j.contains("params")) {
      schema_fail("/params", "only valid with a named model");
    }
    cfg.family = parse_inline_model(model);
  } else {
    schema_fail("/model", "expected a name or an inline model object");
  }

  if (!j.contains("lambda_interval")) {
    // The representation study has no family parameter.
    if (!cfg.so3_model) schema_fail("/lambda_interval", "missing");
  } else {
    const Json& iv = j["lambda_interval"];
    if (!iv.is_array() || iv.size() != 2) {
      schema_fail("/lambda_interval", "expected [lo, hi]");
    }
    cfg.lo = need_number(iv[0], "/lambda_interval/0");
    cfg.hi = need_number(iv[1], "/lambda_interval/1");
    if (!(cfg.lo < cfg.hi)) {
      schema_fail("/lambda_interval", "expected lo < hi");
    }
  }

  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    if (!t.is_object()) schema_fail("/tolerances", "expected an object");
    for (const auto& [key, value] : t.items()) {
      const double v = need_number(value, "/tolerances/" + key);
      if (v <= 0.0) schema_fail("/tolerances/" + key, "must be > 0");
      if (!cfg.tol.set(key, v)) {
        schema_fail("/tolerances/" + key, "unknown tolerance");
      }
    }
  }

  if (j.contains("radii")) {
    if (!j["radii"].is_array() || j["radii"].empty()) {
      schema_fail("/radii", "expected a nonempty array");
    }
    cfg.radii.clear();
    int i = 0;
    for (const Json& r : j["radii"]) {
      const double v = need_number(r, "/radii/" + std::to_string(i++));
      if (v <= 0.0) schema_fail("/radii", "amplitudes must be > 0");
      cfg.radii.push_back(v);
    }
  }
  if (j.contains("detunings")) {
    if (!j["detunings"].is_array()) schema_fail("/detunings", "expected an array");
    int i = 0;
    for (const Json& d : j["detunings"]) {
      const std::string dp = "/detunings/" + std::to_string(i++);
      if (!d.is_array() || d.size() != 2) schema_fail(dp, "expected [alpha, xi]");
      cfg.detunings.emplace_back(need_number(d[0], dp + "/0"),
                                 need_number(d[1], dp + "/1"));
    }
  }
  if (j.contains("products")) {
    if (!j["products"].is_array()) schema_fail("/products", "expected an array");
    int i = 0;
    for (const Json& p : j["products"]) {
      cfg.products.push_back(need_number(p, "/products/" + std::to_string(i++)));
    }
  }
  if (j.contains("point_index")) {
    cfg.point_index = need_int(j["point_index"], "/point_index");
    if (cfg.point_index < 0) schema_fail("/point_index", "must be >= 0");
  }
  if (j.contains("steps_per_period")) {
    cfg.steps_per_period = need_int(j["steps_per_period"], "/steps_per_period");
    if (cfg.steps_per_period < 16) {
      schema_fail("/steps_per_period", "must be >= 16");
    }
  }
  if (j.contains("npoints")) {
    cfg.npoints = need_int(j["npoints"], "/npoints");
    if (cfg.npoints < 2) schema_fail("/npoints", "must be >= 2");
  }
  if (j.contains("outputs")) {
    const Json& o = j["outputs"];
    if (!o.is_object()) schema_fail("/outputs", "expected an object");
    for (const auto& [key, value] : o.items()) {
      if (key == "path") {
        if (!value.is_string()) schema_fail("/outputs/path", "expected a string");
        cfg.out_path = value.get<std::string>();
      } else if (key == "format") {
        if (!value.is_string() ||
            (value != "json" && value != "csv")) {
          schema_fail("/outputs/format", "expected \"json\" or \"csv\"");
        }
        cfg.format = value.get<std::string>();
      } else {
        schema_fail("/outputs/" + key, "unknown key");
      }
    }
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    schema_fail("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

std::string branches_csv(const BranchesResult& b) {
  std::string out = "r,type,lambda,alpha,xi,pi1,pi2,admissible,tau\n";
  for (const auto& p : b.points) {
    out += num17(p.r);
    out += ',';
    out += to_string(p.prediction.type);
    out += ',' + num17(p.prediction.lambda) + ',' +
           num17(p.prediction.alpha) + ',' + num17(p.prediction.xi) + ',' +
           num17(p.prediction.pi1) + ',' + num17(p.prediction.pi2) + ',' +
           (p.prediction.admissible ? "1" : "0") + ',' +
           (p.prediction.admissible ? num17(p.tau) : "") + '\n';
  }
  return out;
}

}  // namespace hopf
