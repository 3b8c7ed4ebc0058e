#pragma once

#include <string>
#include <vector>

#include "nskw/constitutive.hpp"
#include "nskw/fields.hpp"

namespace nskw {

// Conservative state (rho, m) with m = rho u.
struct State {
  ScalarField rho;
  VectorField m;
  double t = 0.0;

  State() = default;
  explicit State(const Grid& g) : rho(g), m(g) {}
};

enum class Integrator { RK4, SSPRK3 };

struct SimConfig {
  int d = 1;
  int n = 64;
  double kappa = 1.0;   // capillarity coefficient
  double eps = 0.0;     // density diffusion of the regularized system
  double nu = 0.0;      // strength of the |Du|^{q-2} Du regularization
  double q = 4.0;       // its exponent; q > max(3, 3p/2) whenever nu > 0
  StressModel stress_model = StressModel::newtonian(1.0);
  PressureLaw pressure_law = PressureLaw(1.0, 2.0, 1.0);
  double dt = 1e-4;
  double t_end = 0.1;
  double rho_min = 1e-8;
  int output_every = 10;
  Integrator integrator = Integrator::RK4;
  double cfl_safety = 0.9;

  Grid grid() const { return Grid(d, n, /*dealias=*/true); }
  void validate() const;  // throws std::invalid_argument naming the violated constraint
};

// Named initial profiles; see the README for the exact formulas.
struct InitSpec {
  std::string profile = "sine";  // uniform | sine | bump
  double rho0 = 1.0;
  double amp_rho = 0.2;
  double amp_u = 0.1;
  int mode = 1;
  double width = 0.5;  // bump sharpness
};

State make_initial(const Grid& g, const InitSpec& init);

// u = m / max(rho, rho_min), projected per the grid's dealias policy. The
// same quotient feeds the right-hand sides and every diagnostic.
VectorField velocity(const SimConfig& cfg, const State& s);

// d rho/dt = -div(m) + eps lap(rho)
ScalarField continuity_rhs(const SimConfig& cfg, const State& s);

// d m/dt = -div(rho u (x) u) + div(rho S(Du)) - grad p(rho)
//          + kappa 2 rho grad(lap(sqrt rho)/sqrt rho)
//          - eps (grad rho . grad) u + nu div(|Du|^{q-2} Du)
VectorField momentum_rhs(const SimConfig& cfg, const State& s);

// One explicit step. Throws "step rejected" when the updated state has
// non-finite samples or density below -1e-12 (tiny negative round-off is
// clamped to zero), "blow-up detected" when samples exceed 1e12, and lets
// "vacuum region" propagate from stage evaluations.
State step(const SimConfig& cfg, const State& s, double dt);

// Largest advisory stable dt at the given state: acoustic transport,
// diffusive (eps and effective viscosity) and dispersive (capillarity under
// the explicit integrator) restrictions, scaled by cfl_safety.
double cfl_limit(const SimConfig& cfg, const State& s);

struct Trajectory {
  std::vector<State> snapshots;  // output cadence; snapshots[0] is t = 0
  std::vector<double> times;
  bool completed = false;
  std::string status;        // "completed" or the failure reason
  double min_density = 0.0;  // smallest sample seen over all steps
  // Lower bound min(rho_0) exp(-int ||div u||_inf dt) accumulated on the
  // output cadence, and the worst ratio min(rho)/bound observed there.
  double density_lower_bound = 0.0;
  double density_bound_ratio = 0.0;
  double cfl_dt = 0.0;  // advisory limit at t = 0
  bool cfl_ok = true;
};

// Integrates from the (projected) initial state to t_end. Failures terminate
// the run early; everything recorded up to the last good step is kept.
Trajectory run(const SimConfig& cfg, const State& initial);

}  // namespace nskw
