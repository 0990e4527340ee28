#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "hopf/branches.hpp"
#include "hopf/dynamics.hpp"
#include "hopf/models.hpp"

namespace hopf {

/// Tunable thresholds, exposed through the CLI as --tol name=value.
struct Tolerances {
  double spectral = 1e-7;        // eigenvalue clustering, relative to ||A||
  double collision = 1e-10;      // bisection width for the event parameter
  double frame = 1e-8;           // canonical frame residuals
  double equivariance = 1e-8;    // generator compatibility residuals
  double homological = 1e-9;     // normal-form defect
  double fit = 1e-8;             // coefficient extraction residual
  double transversality = 1e-8;  // |sigma'| floor for the split test
  double certify = 1e-6;         // rpo residual acceptance threshold

  bool set(const std::string& name, double value);
  std::vector<std::pair<std::string, double>> items() const;
};

/// One structural hypothesis with the numeric evidence backing the verdict.
struct HypothesisCheck {
  std::string name;
  bool passed = false;
  double evidence = 0.0;
  std::string detail;
};

struct ResonanceResult {
  HopfEvent event;
  ResonanceData resonance;
  EquivarianceReport equivariance;
};

/// Collision location plus resonance-space construction on [lo, hi].
ResonanceResult run_resonance(const HamiltonianFamily& fam, double lo,
                              double hi, const Tolerances& tol = {});

struct AnalysisResult {
  HopfEvent event;
  ResonanceData resonance;
  EquivarianceReport equivariance;
  CanonicalFrame frame;
  NormalizedJet normalized;
  HessianCoefficients coeffs;
  KreinVerdict verdict;
  std::vector<HypothesisCheck> hypotheses;
  double spectral_check = 0.0;  // closed form vs eigensolver over a grid

  bool hypotheses_ok() const;
};

/// Full pass: event location, resonance space, canonical frame, circle
/// normalization, coefficient extraction and the collision-split test.
AnalysisResult run_analysis(const HamiltonianFamily& fam, double lo, double hi,
                            const Tolerances& tol = {});

/// One predicted point on a bifurcating branch, ready for verification.
struct BranchPoint {
  double r = 0.0;  // kernel amplitude sqrt(pi1 + pi2)
  BranchPrediction prediction;
  Vec v0_kernel;   // kernel block coordinates (2n)
  Vec v_frame;     // pre-transform frame coordinates (4n)
  Vec v_ambient;   // ambient phase-space point
  double tau = 0.0;  // relative period 2 pi / (nu0 (1 + alpha))
  Mat drift;         // ambient drift generator, xi times unit-weight rotation
};

struct BranchesResult {
  ComplexFrameO2 cframe;
  double kappa = 0.0;  // rotation weight on the kernel
  std::vector<BranchPoint> points;
};

/// O(2) branch table over kernel amplitudes and detuning pairs (alpha, xi).
BranchesResult run_branches(const HamiltonianFamily& fam,
                            const AnalysisResult& analysis,
                            const std::vector<double>& radii,
                            const std::vector<std::pair<double, double>>& detunings,
                            const Tolerances& tol = {});

struct RpoCertificate {
  double lambda = 0.0;
  double tau = 0.0;            // refined relative period
  double tau_predicted = 0.0;  // from the branch prediction
  double tau_deviation = 0.0;  // |tau - 2 pi/nu*| / (2 pi/nu*)
  double shoot_residual = 0.0;
  double residual = 0.0;       // rpo defect of the plain flow
  double energy_drift = 0.0;
  int iterations = 0;
  bool accepted = false;
};

/// Shooting refinement on the shifted Hamiltonian h - K^xi followed by an
/// rpo check of the plain flow against the drift element.
RpoCertificate verify_rpo(const HamiltonianFamily& fam,
                          const AnalysisResult& analysis,
                          const BranchPoint& pt, int steps_per_period = 256,
                          const Tolerances& tol = {});

struct SweepRow {
  double lambda = 0.0;
  std::array<Complex, 4> mu{};
  double sigma = 0.0, rho = 0.0, tau = 0.0, psi = 0.0, f1 = 0.0;
};

/// Closed-form spectral data of the normalized quadratic part on a grid.
std::vector<SweepRow> run_sweep(const HessianCoefficients& c, double lo,
                                double hi, int npoints);

}  // namespace hopf
