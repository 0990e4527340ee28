#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hopf/pipeline.hpp"

namespace hopf {

using Json = nlohmann::ordered_json;

/// Tool version reported in every document.
const char* version();

/// Everything a run needs, parsed from the JSON config document.
struct RunConfig {
  HamiltonianFamily family;
  OscillatorParams params;  // populated when the named model is used
  bool named_model = false;
  bool so3_model = false;   // representation study, analyze only
  double so3_b1 = 1.0, so3_b2 = 1.0, so3_b3 = 1.0;
  double lo = 0.0;
  double hi = 0.0;
  Tolerances tol;
  std::vector<double> radii{0.05};
  std::vector<std::pair<double, double>> detunings;  // explicit (alpha, xi)
  std::vector<double> products;  // alpha*xi values, split after analysis
  int point_index = 0;
  int steps_per_period = 256;
  int npoints = 101;
  std::string out_path;       // empty = stdout
  std::string format = "json";
};

/// Validates and builds a RunConfig.  Violations throw SCHEMA_ERROR with a
/// JSON-pointer path; constant or linear inline terms throw H1_VIOLATION.
RunConfig parse_config(const Json& j);
RunConfig parse_config_text(const std::string& text);

/// {"value": v, "tol": t, "pass": v <= t} so that no number appears without
/// the threshold it was judged against.
Json checked(double value, double tol);

Json to_json(const Tolerances& tol);
Json to_json(const HopfEvent& e);
Json to_json(const EquivarianceReport& r, double tol);
Json resonance_json(const ResonanceData& r);
Json frame_json(const CanonicalFrame& f, double tol);
Json coefficients_json(const HessianCoefficients& c, double tol);
Json analysis_json(const AnalysisResult& a, const Tolerances& tol);
Json so3_analysis_json(double b1, double b2, double b3);
Json resonance_result_json(const ResonanceResult& r, const Tolerances& tol);
Json branches_json(const BranchesResult& b, const Tolerances& tol);
Json certificate_json(const RpoCertificate& c, const Tolerances& tol);
Json sweep_json(const std::vector<SweepRow>& rows);

/// Error document for a failed run.
Json error_json(const std::string& code, const std::string& message,
                bool hypothesis_failure);

/// Wraps a deterministic report body with volatile metadata (timestamp),
/// kept outside the body so reruns stay byte-identical there.
Json wrap_report(const std::string& kind, Json body);

/// Serialization used everywhere: 2-space indent, trailing newline.
std::string render_json(const Json& j);

/// Flat key,value CSV of an arbitrary report body (row order = document
/// order, LF endings, 17 significant digits).
std::string render_csv(const Json& j);

/// Dedicated layouts with pinned headers.
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string branches_csv(const BranchesResult& b);

}  // namespace hopf
