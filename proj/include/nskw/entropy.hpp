#pragma once

#include <vector>

#include "nskw/dynamics.hpp"

namespace nskw {

// Reference solution slice: density r and velocity v on the working grid.
struct ReferencePair {
  ScalarField r;
  VectorField v;
};

// Reference solution sampled at uniformly spaced times. Time derivatives of
// reference quantities are taken by second-order differences between slices
// (centered inside, one-sided at the ends), so at least three slices are
// required wherever a time derivative appears.
struct ReferenceSeries {
  std::vector<ReferencePair> slices;
  std::vector<double> times;

  int size() const { return static_cast<int>(slices.size()); }
  double dt() const;  // common spacing; throws if the times are not uniform
};

// Sup-norms of the reference over all slices, the ingredients of the
// stability constant.
struct ReferenceBounds {
  double r_min = 0.0;
  double r_max = 0.0;
  double gradv_max = 0.0;  // max Frobenius norm of grad v
  double Sv_max = 0.0;     // max Frobenius norm of S(Dv)
  double divv_max = 0.0;
};

ReferenceBounds reference_bounds(const StressModel& S, const ReferenceSeries& ref);

// grad(ln rho) evaluated as 2 grad(sqrt rho) / sqrt rho with the square root
// floored at sqrt(rho_min): bounded wherever the density is, and the form in
// which the capillary part of the relative entropy is measured.
VectorField grad_log(const ScalarField& rho, double rho_min);

// E = 1/2 int(|m|^2/rho + 4 kappa |grad sqrt rho|^2) + int H(rho)
double energy(const SimConfig& cfg, const State& s);

// Instantaneous dissipation integrals:
//   S:  int rho S(Du):Du            nu: nu int |Du|^q
//   kw: kappa eps int rho |hess ln rho|^2
//   p:  eps int H''(rho) |grad rho|^2
struct DissipationRates {
  double S = 0.0;
  double nu = 0.0;
  double kw = 0.0;
  double p = 0.0;
  double total() const { return S + nu + kw + p; }
};

DissipationRates dissipation_rates(const SimConfig& cfg, const State& s);

// Energy balance along a trajectory: residual[k] = E(t_k) - E(0) plus the
// cumulative trapezoid of the total dissipation rate. Zero for the exact
// system; the trapezoid quadrature on the output cadence dominates the
// numerical value.
struct EnergyBudget {
  std::vector<double> energy;
  std::vector<double> dissipated;
  std::vector<double> residual;
  double worst_residual = 0.0;  // max |residual|
};

EnergyBudget energy_budget(const SimConfig& cfg, const Trajectory& traj);

// Relative entropy against one reference slice:
//   1/2 int rho |u - v|^2 + kappa/2 int rho |grad ln rho - grad ln r|^2
//   + int (H(rho) - H(r) - H'(r)(rho - r))
double relative_entropy(const SimConfig& cfg, const State& s, const ReferencePair& ref);

// Residuals measuring how far the reference is from an exact strong
// solution, evaluated at slice k. A2 and A3 vanish identically whenever
// (r, v) satisfies the continuity equation; A1 additionally needs the
// velocity-form momentum equation (without the eps/nu regularization, which
// the reference never carries).
//   A1 = dt v + (v.grad) v + grad H'(r) - div(r S(Dv))/r - kappa div(r hess ln r)/r
//   A2 = dt grad ln r + (v.grad) grad ln r + div(r (grad v)^T)/r
//   A3 = dt H'(r) + v.grad H'(r) + p'(r) div v
VectorField residual_A1(const SimConfig& cfg, const ReferenceSeries& ref, int k);
VectorField residual_A2(const ReferenceSeries& ref, int k, double rho_min);
ScalarField residual_A3(const PressureLaw& law, const ReferenceSeries& ref, int k,
                        double rho_min);

// Time series built on the shared output times: the instantaneous integrand
// and its cumulative trapezoid.
struct ErrorSeries {
  std::vector<double> integrand;
  std::vector<double> cumulative;
};

// b(t): the residual pairings that drive the relative-entropy inequality,
//   -int rho (u-v).A1 - kappa int rho (grad ln rho - grad ln r).A2
//   -int (rho - r) A3,
// accumulated in time. States must sit on the reference grid and times.
ErrorSeries error_b(const SimConfig& cfg, const std::vector<State>& states,
                    const ReferenceSeries& ref);

// b_app(t): the extra pairings produced by the eps/nu regularization,
//   nu int |Du|^{q-2} Du : Dv
//   + kappa eps int rho hess(ln rho) : hess(ln r)
//   + eps int v . [(grad rho . grad)(u - v)]
//   + kappa eps int rho (grad ln rho - grad ln r) . (hess(ln r) grad ln rho)
//   + eps int grad rho . grad H'(r)
ErrorSeries error_b_app(const SimConfig& cfg, const std::vector<State>& states,
                        const ReferenceSeries& ref);

// Stability constant of the relative-entropy inequality:
//   C = sup|S(Dv)|/2 + sup|grad v| + (gamma - 1) sup|div v|
// with sups over all slices and points.
double gronwall_constant(const SimConfig& cfg, const ReferenceSeries& ref);

// Checks E(t_k) <= E(0) e^{C t_k} + B(t_k) + C int_0^{t_k} B(s) e^{C(t_k-s)} ds
// where B = b (plus b_app when the configuration is regularized). margin[k]
// is rhs[k] - entropy[k]; the check passes when the worst margin stays above
// -1e-6 (1 + E(0)). smallest_passing_C scans [0, C] for the least constant
// that still passes, as a sharpness report.
struct GronwallReport {
  double C = 0.0;
  std::vector<double> entropy;
  std::vector<double> rhs;
  std::vector<double> margin;
  ErrorSeries b;
  ErrorSeries b_app;  // empty when the configuration has eps = nu = 0
  bool used_b_app = false;
  double worst_margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double smallest_passing_C = 0.0;
};

GronwallReport gronwall_check(const SimConfig& cfg, const std::vector<State>& states,
                              const ReferenceSeries& ref);

// One row of the run diagnostics. The reference columns are NaN when no
// reference is attached.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double diss_S = 0.0;
  double diss_nu = 0.0;
  double diss_kw = 0.0;
  double diss_p = 0.0;
  double rel_entropy = 0.0;
  double gronwall_rhs = 0.0;
  double margin = 0.0;
};

std::vector<DiagnosticsRecord> diagnostics(const SimConfig& cfg, const Trajectory& traj);
std::vector<DiagnosticsRecord> diagnostics(const SimConfig& cfg, const Trajectory& traj,
                                           const ReferenceSeries& ref);

}  // namespace nskw
