#pragma once

#include <vector>

#include "hopf/poly.hpp"

namespace hopf {

/// Quadratic jet 1/2 v^T H v for symmetric H.
PolyJet quadratic_form_jet(const Mat& H);

/// Hamiltonian vector field of a jet frozen at one parameter value:
/// X(v) = -omega^{-1} grad h(v).
class FlowSystem {
 public:
  FlowSystem() = default;
  FlowSystem(const PolyJet& h, double lambda, const Mat& omega);

  int dim() const { return static_cast<int>(poisson_.rows()); }
  Vec field(const Vec& v) const { return poisson_ * grad_.eval(v); }
  double energy(const Vec& v) const { return h_.eval(v, 0.0); }
  const Mat& poisson() const { return poisson_; }

 private:
  PolyJet h_;  // frozen at lambda
  CompiledGradient grad_;
  Mat poisson_;
};

struct IntegrateOptions {
  int max_fixed_point_iter = 100;
  double fixed_point_tol = 1e-13;
};

/// One step of the fourth-order triple-jump composition of implicit midpoint
/// substeps (gamma1 = 1/(2 - 2^{1/3}), gamma2 = 1 - 2 gamma1).  Symmetric,
/// symplectic, preserves quadratic invariants of the field.  Throws
/// NONCONVERGENT when a midpoint fixed-point iteration stalls.
Vec step(const FlowSystem& sys, const Vec& v, double dt,
         const IntegrateOptions& opt = {});

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
};

Trajectory integrate(const FlowSystem& sys, const Vec& v0, double t_end,
                     int steps, const IntegrateOptions& opt = {});

/// End state only.
Vec flow_to(const FlowSystem& sys, const Vec& v0, double t_end, int steps,
            const IntegrateOptions& opt = {});

struct ShiftReport {
  double max_deviation = 0.0;   // sup_t |G_t(v) - e^{-t xi} F_t(v)|
  double noether_residual = 0.0;
};

/// Checks the shifted-flow identity: the flow G of h - K^xi equals
/// e^{-t xi} composed with the flow F of h.  The Noether precheck samples
/// the bracket {h, K^xi} near v0 and throws NOETHER_VIOLATION when K is not
/// conserved by h, before any integration happens.
ShiftReport shifted_flow_check(const PolyJet& h, double lambda,
                               const Mat& omega, const Mat& xi, const Vec& v0,
                               double t_end, int steps, int samples = 16);

/// sup over the grid t_i = i tau / samples of
/// |F_{t+tau}(v) - g F_t(v)| / max_t |F_t(v)|.
double rpo_residual(const FlowSystem& sys, const Vec& v, double tau,
                    const Mat& g, double dt, int samples = 32);

struct ShootingResult {
  Vec v;
  double tau = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Gauss-Newton refinement of a closed orbit of sys: unknowns (v, tau),
/// residuals are the return defect flow_tau(v) - v, a section pin against
/// the flow direction at v_guess, one pin per phase generator, and an energy
/// pin h(v) = h(v_guess).  Throws SECTION_DEGENERATE when the flow vanishes
/// at v_guess, NEWTON_DIVERGED when the residual stops improving.
ShootingResult shooting_refine(const FlowSystem& sys, const Vec& v_guess,
                               double tau_guess,
                               const std::vector<Mat>& phase_generators,
                               double dt, int max_iter = 30);

}  // namespace hopf
