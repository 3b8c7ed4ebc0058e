#pragma once

#include <string>
#include <vector>

#include "nskw/config.hpp"
#include "nskw/entropy.hpp"
#include "nskw/lemmas.hpp"

namespace nskw {

// Fixed zero-mean low-mode velocity perturbation w used to displace the
// initial data: component c is sin(2 pi x_c). Its scale is order one, so the
// delta-scaling of the relative entropy stays clean.
VectorField perturbation_profile(const Grid& g);

// Subsample a fine-grid trajectory onto the coarse grid: slice k keeps the
// fine density at every refine-th node and the fine velocity m/rho restricted
// the same way. Output times must match the coarse cadence, which holds when
// the fine run uses dt / refine^2 and output_every * refine^2.
ReferenceSeries restrict_reference(const SimConfig& coarse_cfg, const SimConfig& fine_cfg,
                                   const Trajectory& fine);

// Least-squares slope of log(y) against log(x); x, y > 0, sizes equal, >= 2.
double fit_exponent(const std::vector<double>& x, const std::vector<double>& y);

// A plain forward run with its diagnostics bundle.
struct RunResult {
  Trajectory traj;
  std::vector<DiagnosticsRecord> diag;
  EnergyBudget budget;
  double mass_drift = 0.0;  // max |mass(t) - mass(0)| / mass(0)
};

RunResult run_single(const RunConfig& rc);

// Writes diagnostics.csv, manifest.cfg, state_final.ckpt and (optional) SVG
// plots into rc.outdir. Returns the paths written.
std::vector<std::string> emit_run_outputs(const RunConfig& rc, const RunResult& result);

struct WeakStrongCase {
  double delta = 0.0;
  bool completed = false;
  std::string status;
  double entropy0 = 0.0;     // relative entropy at t = 0
  double max_entropy = 0.0;  // max over output times
  GronwallReport gronwall;
  std::vector<DiagnosticsRecord> diag;
};

// Reference: fine-grid unregularized run restricted to the coarse grid. Each
// case restarts from the reference data with velocity v + delta w. Exponents
// are least-squares fits over the delta > 0 cases.
struct WeakStrongReport {
  bool completed = false;  // reference run finished; case failures are per-case
  std::string status;
  int fine_n = 0;
  std::vector<DiagnosticsRecord> reference_diag;  // fine run, on its own grid
  std::vector<WeakStrongCase> cases;
  double exponent_initial = 0.0;  // entropy0 vs delta
  double exponent_max = 0.0;      // max_entropy vs delta
  bool margins_ok = false;
};

WeakStrongReport run_weak_strong(const RunConfig& rc, const std::vector<double>& deltas);
std::vector<std::string> emit_weak_strong_outputs(const RunConfig& rc,
                                                  const WeakStrongReport& rep);

struct VanishCase {
  double eps = 0.0;  // nu = eps for these runs
  bool completed = false;
  std::string status;
  double max_abs_b_app = 0.0;
  GronwallReport gronwall;
  std::vector<DiagnosticsRecord> diag;
};

// Runs the regularized system for each eps (nu = eps) against the eps = 0 run
// of the same configuration as the fixed smooth reference. successive[k] is
// the largest relative entropy over time between the runs at eps[k+1] and
// eps[k] (the latter as reference), the Cauchy-trend diagnostic.
struct VanishReport {
  bool completed = false;
  std::string status;
  std::vector<VanishCase> cases;
  std::vector<double> successive;
  bool b_app_decreasing = false;
  bool successive_decreasing = false;
  bool margins_ok = false;
};

VanishReport run_vanish_regularization(const RunConfig& rc, const std::vector<double>& eps_list);
std::vector<std::string> emit_vanish_outputs(const RunConfig& rc, const VanishReport& rep);

// One line per report: LEMMA <id> pass=<bool> worst_margin=<float>
// samples=<int> seed=<int>. Returns the concatenated text.
std::string lemma_lines(const std::vector<LemmaReport>& reports);

}  // namespace nskw
