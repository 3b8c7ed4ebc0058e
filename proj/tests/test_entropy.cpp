#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "nskw/entropy.hpp"

using namespace nskw;

namespace {

// Composite Simpson on [0,1], n even.
double simpson(const std::function<double(double)>& f, int n = 20000) {
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) s += f(i / static_cast<double>(n)) * (i % 2 ? 4.0 : 2.0);
  return s / (3.0 * n);
}

const double TP = 2.0 * M_PI;

// r(x, t) = 1 + a sin(2 pi (x - c t)), v = c: an exact solution of the
// continuity equation used as a kinematic reference.
ReferenceSeries traveling_wave(const Grid& g, double a, double c, double dt, int slices) {
  ReferenceSeries ref;
  for (int k = 0; k < slices; ++k) {
    const double t = k * dt;
    ReferencePair p;
    p.r = sample(g, [&](double x) { return 1.0 + a * std::sin(TP * (x - c * t)); });
    p.v = VectorField(g);
    p.v[0] = ScalarField(g, c);
    ref.slices.push_back(p);
    ref.times.push_back(t);
  }
  return ref;
}

double max_abs_vec(const VectorField& u) {
  double m = 0.0;
  for (int c = 0; c < u.grid.d; ++c) m = std::max(m, max_abs(u[c]));
  return m;
}

}  // namespace

TEST_CASE("energy matches quadrature of the closed-form integrand") {
  SimConfig cfg;
  cfg.d = 1;
  cfg.n = 128;
  cfg.kappa = 0.03;
  cfg.pressure_law = PressureLaw(1.0, 2.0, 1.0);

  const Grid g = cfg.grid();
  State s(g);
  s.rho = sample(g, [](double x) { return 1.0 + 0.3 * std::sin(TP * x); });
  ScalarField u = sample(g, [](double x) { return 0.2 * std::cos(TP * x); });
  s.m[0] = pointwise(s.rho, u, [](double r, double v) { return r * v; });

  // kinetic 1/2 int rho u^2 = 0.01 and int H = 0.045 are exact means of
  // trigonometric polynomials; the capillary part needs quadrature.
  const double cap = simpson([](double x) {
    const double rho = 1.0 + 0.3 * std::sin(TP * x);
    const double drho = 0.3 * TP * std::cos(TP * x);
    return drho * drho / (4.0 * rho);
  });
  const double expect = 0.01 + 2.0 * cfg.kappa * cap + 0.045;
  CHECK(energy(cfg, s) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("dissipation rates match their closed forms") {
  SimConfig cfg;
  cfg.d = 1;
  cfg.n = 128;
  cfg.kappa = 0.5;
  cfg.eps = 0.25;
  cfg.nu = 0.8;
  cfg.q = 4.0;
  cfg.stress_model = StressModel::newtonian(1.5);
  cfg.pressure_law = PressureLaw(1.0, 2.0, 1.0);

  const Grid g = cfg.grid();
  State s(g);
  s.rho = sample(g, [](double x) { return 1.0 + 0.3 * std::sin(TP * x); });
  ScalarField u = sample(g, [](double x) { return 0.2 * std::cos(TP * x); });
  s.m[0] = pointwise(s.rho, u, [](double r, double v) { return r * v; });

  DissipationRates d = dissipation_rates(cfg, s);

  // S: 1.5 int (1 + 0.3 sin)(0.4 pi sin)^2 = 1.5 (0.4 pi)^2 / 2 = 0.12 pi^2
  CHECK(d.S == doctest::Approx(0.12 * M_PI * M_PI).epsilon(1e-10));
  // nu: 0.8 (0.4 pi)^4 int sin^4 = 0.8 (0.4 pi)^4 (3/8)
  CHECK(d.nu == doctest::Approx(0.8 * std::pow(0.4 * M_PI, 4) * 0.375).epsilon(1e-10));
  // p: 0.25 int 2 (0.6 pi cos)^2 = 0.09 pi^2
  CHECK(d.p == doctest::Approx(0.09 * M_PI * M_PI).epsilon(1e-10));
  // kw: 0.5 * 0.25 int rho (d_xx ln rho)^2 by quadrature
  const double kw = simpson([](double x) {
    const double rho = 1.0 + 0.3 * std::sin(TP * x);
    const double d1 = 0.3 * TP * std::cos(TP * x);
    const double d2 = -0.3 * TP * TP * std::sin(TP * x);
    const double ddlog = (d2 * rho - d1 * d1) / (rho * rho);
    return rho * ddlog * ddlog;
  });
  CHECK(d.kw == doctest::Approx(0.5 * 0.25 * kw).epsilon(1e-9));
}

TEST_CASE("energy balances against the dissipation with second-order residual") {
  SimConfig cfg;
  cfg.d = 1;
  cfg.n = 64;
  cfg.kappa = 0.05;
  cfg.eps = 0.01;
  cfg.nu = 0.005;
  cfg.q = 4.0;
  cfg.stress_model = StressModel::newtonian(0.05);
  cfg.dt = 2e-4;
  cfg.t_end = 0.04;
  cfg.output_every = 5;

  InitSpec init;
  init.amp_rho = 0.3;
  init.amp_u = 0.2;
  State s0 = make_initial(cfg.grid(), init);

  Trajectory traj = run(cfg, s0);
  REQUIRE(traj.completed);
  EnergyBudget budget = energy_budget(cfg, traj);
  const double E0 = budget.energy.front();

  CHECK(budget.worst_residual <= 1e-5 * E0);
  CHECK(budget.energy.back() < E0);      // strictly dissipative flow
  CHECK(budget.dissipated.back() > 0.0);

  // halving dt halves the output spacing, so the trapezoid-dominated
  // residual should drop by about four
  SimConfig fine = cfg;
  fine.dt = 1e-4;
  Trajectory traj2 = run(fine, s0);
  REQUIRE(traj2.completed);
  EnergyBudget budget2 = energy_budget(fine, traj2);
  const double order = std::log2(budget.worst_residual / budget2.worst_residual);
  CHECK(order > 1.7);
}

TEST_CASE("relative entropy vanishes exactly on the reference itself") {
  SimConfig cfg;
  cfg.d = 1;
  cfg.n = 64;
  cfg.kappa = 0.2;

  const Grid g = cfg.grid();
  State s(g);
  s.rho = sample(g, [](double x) { return 1.0 + 0.2 * std::sin(TP * x); });
  s.m[0] = sample(g, [](double x) { return 0.1 * std::cos(TP * x); });

  ReferencePair ref;
  ref.r = s.rho;
  ref.v = velocity(cfg, s);
  CHECK(relative_entropy(cfg, s, ref) == 0.0);
}

TEST_CASE("relative entropy is exactly quadratic in a velocity perturbation") {
  SimConfig cfg;
  cfg.d = 1;
  cfg.n = 64;
  cfg.kappa = 0.2;
  cfg.pressure_law = PressureLaw(1.0, 2.0, 1.0);

  const Grid g = cfg.grid();
  ScalarField rho = sample(g, [](double x) { return 1.0 + 0.2 * std::sin(TP * x); });
  ScalarField v = sample(g, [](double x) { return 0.1 * std::cos(TP * x); });
  ScalarField w = sample(g, [](double x) { return std::cos(TP * x); });

  ReferencePair ref;
  ref.r = rho;
  ref.v = VectorField(g);
  ref.v[0] = dealias(v);

  auto entropy_at = [&](double delta) {
    State s(g);
    s.rho = rho;
    s.m[0] = pointwise(rho, v + delta * w, [](double r, double u) { return r * u; });
    return relative_entropy(cfg, s, ref);
  };

  // E(delta) = delta^2/2 int rho w^2 = 0.25 delta^2 for this data
  const double e1 = entropy_at(0.1);
  const double e2 = entropy_at(0.2);
  CHECK(e1 == doctest::Approx(0.25 * 0.01).epsilon(1e-12));
  CHECK(e2 / e1 == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("relative entropy reduces to the quadratic gamma-law distance") {
  SimConfig cfg;
  cfg.d = 1;
  cfg.n = 64;
  cfg.kappa = 0.0;  // isolate the pressure part
  cfg.pressure_law = PressureLaw(1.0, 2.0, 1.0);

  const Grid g = cfg.grid();
  State s(g);
  s.rho = sample(g, [](double x) { return 1.0 + 0.3 * std::sin(TP * x); });

  ReferencePair ref;
  ref.r = sample(g, [](double x) { return 1.0 + 0.1 * std::sin(TP * x); });
  ref.v = VectorField(g);

  // int (rho - r)^2 = int (0.2 sin)^2 = 0.02
  CHECK(relative_entropy(cfg, s, ref) == doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("kinematic residuals vanish for a static reference") {
  const Grid g(1, 64);
  ReferenceSeries ref;
  for (int k = 0; k < 5; ++k) {
    ReferencePair p;
    p.r = sample(g, [](double x) { return 1.0 + 0.3 * std::sin(TP * x); });
    p.v = VectorField(g);
    ref.slices.push_back(p);
    ref.times.push_back(k * 1e-3);
  }

  PressureLaw law(1.0, 2.0, 1.0);
  for (int k : {0, 2, 4}) {
    CHECK(max_abs_vec(residual_A2(ref, k, 1e-8)) == 0.0);
    CHECK(max_abs(residual_A3(law, ref, k, 1e-8)) == 0.0);
  }
}

TEST_CASE("kinematic residuals converge to zero for a traveling wave") {
  // For r, v satisfying the continuity equation the residuals cancel
  // pointwise; what remains is the second-order time-difference error.
  const Grid g(1, 64);
  PressureLaw law(1.0, 2.0, 1.0);

  auto worst = [&](double dt) {
    ReferenceSeries ref = traveling_wave(g, 0.3, 0.7, dt, 5);
    double m2 = 0.0, m3 = 0.0;
    for (int k = 0; k < 5; ++k) {
      m2 = std::max(m2, max_abs_vec(residual_A2(ref, k, 1e-8)));
      m3 = std::max(m3, max_abs(residual_A3(law, ref, k, 1e-8)));
    }
    return std::pair<double, double>(m2, m3);
  };

  auto [a2_coarse, a3_coarse] = worst(2e-3);
  auto [a2_fine, a3_fine] = worst(1e-3);
  CHECK(a2_coarse < 1e-3);
  CHECK(a3_coarse < 1e-3);
  CHECK(a2_coarse / a2_fine > 3.5);
  CHECK(a3_coarse / a3_fine > 3.5);
}

TEST_CASE("kinematic residuals stay small for a two-dimensional traveling wave") {
  const Grid g(2, 32);
  PressureLaw law(1.0, 2.0, 1.0);
  const double c1 = 0.4, c2 = -0.3, dt = 1e-3;

  ReferenceSeries ref;
  for (int k = 0; k < 5; ++k) {
    const double t = k * dt;
    ReferencePair p;
    p.r = sample(g, [&](double x, double y) {
      return 1.0 + 0.2 * std::sin(TP * (x - c1 * t)) * std::sin(TP * (y - c2 * t));
    });
    p.v = VectorField(g);
    p.v[0] = ScalarField(g, c1);
    p.v[1] = ScalarField(g, c2);
    ref.slices.push_back(p);
    ref.times.push_back(t);
  }

  for (int k : {0, 2, 4}) {
    CHECK(max_abs_vec(residual_A2(ref, k, 1e-8)) < 1e-3);
    CHECK(max_abs(residual_A3(law, ref, k, 1e-8)) < 1e-3);
  }
}

TEST_CASE("momentum residual matches a manufactured reference") {
  // r = 1, v = (sin 2 pi x, 0), steady: the entropy gradient and capillary
  // terms vanish, leaving
  //   A1_x = v_x d_x v_x - mu d_x(d_x v_x) = pi sin 4 pi x + 4 pi^2 mu sin 2 pi x
  SimConfig cfg;
  cfg.d = 2;
  cfg.n = 64;
  cfg.kappa = 0.3;
  cfg.stress_model = StressModel::newtonian(0.7);
  cfg.pressure_law = PressureLaw(1.0, 2.0, 1.0);

  const Grid g = cfg.grid();
  ReferenceSeries ref;
  for (int k = 0; k < 3; ++k) {
    ReferencePair p;
    p.r = ScalarField(g, 1.0);
    p.v = VectorField(g);
    p.v[0] = sample(g, [](double x, double) { return std::sin(TP * x); });
    ref.slices.push_back(p);
    ref.times.push_back(k * 1e-3);
  }

  VectorField A1 = residual_A1(cfg, ref, 1);
  ScalarField expect = sample(g, [](double x, double) {
    return M_PI * std::sin(2.0 * TP * x) + 4.0 * M_PI * M_PI * 0.7 * std::sin(TP * x);
  });
  double err = 0.0;
  for (size_t i = 0; i < expect.values.size(); ++i) {
    err = std::max(err, std::abs(A1[0].values[i] - expect.values[i]));
  }
  CHECK(err < 1e-8);
  CHECK(max_abs(A1[1]) < 1e-10);
}

TEST_CASE("error term vanishes when the state equals the reference") {
  SimConfig cfg;
  cfg.d = 1;
  cfg.n = 64;
  cfg.kappa = 0.1;

  const Grid g = cfg.grid();
  ReferenceSeries ref = traveling_wave(g, 0.3, 0.7, 1e-3, 5);

  std::vector<State> states;
  for (int k = 0; k < 5; ++k) {
    State s(g);
    s.rho = ref.slices[k].r;
    s.m[0] = pointwise(s.rho, ref.slices[k].v[0], [](double r, double v) { return r * v; });
    s.t = ref.times[k];
    states.push_back(s);
  }

  // the three pairings each carry a factor that is zero up to the round-off
  // of the velocity quotient, so the integrand sits at the round-off floor
  ErrorSeries b = error_b(cfg, states, ref);
  for (double v : b.integrand) CHECK(std::abs(v) < 1e-12);
  for (double v : b.cumulative) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("reference bounds and the stability constant have closed forms") {
  SimConfig cfg;
  cfg.d = 2;
  cfg.n = 64;
  cfg.stress_model = StressModel::newtonian(2.0);
  cfg.pressure_law = PressureLaw(1.0, 1.4, 1.0);

  const Grid g = cfg.grid();
  ReferenceSeries ref;
  for (int k = 0; k < 3; ++k) {
    ReferencePair p;
    p.r = sample(g, [](double x, double) { return 1.0 + 0.3 * std::sin(TP * x); });
    p.v = VectorField(g);
    p.v[0] = sample(g, [](double x, double) { return 0.2 * std::sin(TP * x); });
    ref.slices.push_back(p);
    ref.times.push_back(k * 1e-3);
  }

  ReferenceBounds b = reference_bounds(cfg.stress_model, ref);
  CHECK(b.r_min == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(b.r_max == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(b.gradv_max == doctest::Approx(0.4 * M_PI).epsilon(1e-12));
  CHECK(b.divv_max == doctest::Approx(0.4 * M_PI).epsilon(1e-12));
  CHECK(b.Sv_max == doctest::Approx(0.8 * M_PI).epsilon(1e-12));

  // C = Sv/2 + gradv + (gamma - 1) divv = (0.4 + 0.4 + 0.16) pi
  CHECK(gronwall_constant(cfg, ref) == doctest::Approx(0.96 * M_PI).epsilon(1e-12));
}

TEST_CASE("gronwall check passes with zero margin on a self-reference") {
  SimConfig cfg;
  cfg.d = 1;
  cfg.n = 32;
  cfg.kappa = 0.05;
  cfg.stress_model = StressModel::newtonian(0.01);
  cfg.dt = 2.5e-4;
  cfg.t_end = 40 * cfg.dt;
  cfg.output_every = 10;

  InitSpec init;
  init.amp_rho = 0.2;
  init.amp_u = 0.1;
  State s0 = make_initial(cfg.grid(), init);
  Trajectory traj = run(cfg, s0);
  REQUIRE(traj.completed);

  ReferenceSeries ref;
  for (size_t k = 0; k < traj.snapshots.size(); ++k) {
    ReferencePair p;
    p.r = traj.snapshots[k].rho;
    p.v = velocity(cfg, traj.snapshots[k]);
    ref.slices.push_back(p);
    ref.times.push_back(traj.times[k]);
  }

  GronwallReport rep = gronwall_check(cfg, traj.snapshots, ref);
  CHECK(rep.pass);
  CHECK(rep.worst_margin == 0.0);
  CHECK(rep.smallest_passing_C == 0.0);
  CHECK_FALSE(rep.used_b_app);
  CHECK(rep.b_app.integrand.empty());

  SUBCASE("a perturbed run stays under the bound") {
    State s1 = s0;
    ScalarField w = sample(cfg.grid(), [](double x) { return std::cos(TP * x); });
    s1.m[0] = s1.m[0] + pointwise(s1.rho, w, [](double r, double v) { return 1e-3 * r * v; });
    Trajectory pert = run(cfg, s1);
    REQUIRE(pert.completed);

    GronwallReport rep2 = gronwall_check(cfg, pert.snapshots, ref);
    CHECK(rep2.entropy.front() > 0.0);
    CHECK(rep2.pass);
  }
}

TEST_CASE("misaligned series are rejected") {
  SimConfig cfg;
  cfg.d = 1;
  cfg.n = 32;
  const Grid g = cfg.grid();

  ReferenceSeries ref = traveling_wave(g, 0.2, 0.5, 1e-3, 4);
  std::vector<State> states;
  for (int k = 0; k < 4; ++k) {
    State s(g);
    s.rho = ref.slices[k].r;
    s.t = ref.times[k];
    states.push_back(s);
  }

  states[2].t += 1e-6;
  CHECK_THROWS_WITH_AS(error_b(cfg, states, ref),
                       "reference series misaligned: times differ", std::invalid_argument);

  states[2].t = ref.times[2];
  states.pop_back();
  CHECK_THROWS_WITH_AS(error_b(cfg, states, ref),
                       "reference series misaligned: slice counts differ",
                       std::invalid_argument);

  ReferenceSeries skew = ref;
  skew.times[3] = skew.times[2] + 2e-3;
  CHECK_THROWS_AS(skew.dt(), std::invalid_argument);

  ReferenceSeries tiny;
  tiny.slices.push_back(ref.slices[0]);
  tiny.times.push_back(0.0);
  CHECK_THROWS_AS(tiny.dt(), std::invalid_argument);
}
