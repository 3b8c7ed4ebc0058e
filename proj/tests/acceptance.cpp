// Acceptance gate. Each criterion prints exactly one line
//
//   ACCEPTANCE <k> <name>: PASS|FAIL (<details>)
//
// and the binary exits 0 only if every line is a PASS. Tolerances and time
// budgets are pinned here as named constants; the runs are small enough that
// the whole gate finishes in well under a minute on one core.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nskw/experiments.hpp"
#include "nskw/io.hpp"
#include "nskw/lemmas.hpp"
#include "nskw/random_fields.hpp"

using namespace nskw;

namespace {

// ---- pinned tolerances -----------------------------------------------------
constexpr int kLemmaSamples = 10000;
constexpr double kLemmaBudgetSec = 120.0;

constexpr double kIdentityTol = 1e-7;  // residuals on the documented profiles
constexpr double kDecayFactor = 10.0;  // required shrink from n=32 to n=128

constexpr double kPressureGamma2Tol = 1e-9;   // |C - 1| for the gamma = 2 law
constexpr double kQuadraticEntropyTol = 1e-12;

constexpr double kBudgetRelTol = 1e-5;  // worst residual relative to E(0)
constexpr double kOrderMin = 1.9;       // quadrature order under dt halving
constexpr double kEnergyBudgetSec = 60.0;

constexpr double kMassDriftTol = 1e-10;

constexpr double kFloorTol = 1e-8;      // delta = 0 relative entropy
constexpr double kExponentTarget = 2.0;
constexpr double kExponentTol = 0.05;
constexpr double kWeakStrongBudgetSec = 300.0;

constexpr double kVanishBudgetSec = 300.0;
// -----------------------------------------------------------------------------

const double TP = 2.0 * M_PI;

struct Line {
  int k = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// Shared d = 1 configuration: kappa = 1, Newtonian stress, gamma = 2 law,
// sine profile rho = 1 + 0.2 sin(2 pi x), u = 0.1 sin(2 pi x).
RunConfig base_config() {
  RunConfig rc;
  rc.sim.d = 1;
  rc.sim.n = 64;
  rc.sim.kappa = 1.0;
  rc.sim.eps = 0.0;
  rc.sim.nu = 0.0;
  rc.sim.stress_model = StressModel::newtonian(1.0);
  rc.sim.pressure_law = PressureLaw(1.0, 2.0, 1.0);
  rc.sim.dt = 5e-5;
  rc.sim.t_end = 0.1;
  rc.sim.output_every = 2;
  rc.init.profile = "sine";
  rc.init.rho0 = 1.0;
  rc.init.amp_rho = 0.2;
  rc.init.amp_u = 0.1;
  rc.init.mode = 1;
  return rc;
}

double mass_drift_of(const std::vector<DiagnosticsRecord>& diag) {
  if (diag.empty()) return 0.0;
  const double m0 = diag.front().mass;
  double worst = 0.0;
  for (const auto& row : diag) worst = std::max(worst, std::fabs(row.mass - m0));
  return worst / std::fabs(m0);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  std::vector<Line> lines;
  std::vector<double> drifts;  // one entry per simulation the gate performs

  // 1. Full randomized check suite: zero violations at the documented scale.
  {
    auto t0 = std::chrono::steady_clock::now();
    const auto reports = lemma_suite(0, kLemmaSamples);
    const double sec = seconds_since(t0);
    bool all = true;
    double worst = 0.0;
    std::string worst_id = "-";
    for (const auto& r : reports) {
      all = all && r.pass;
      if (r.worst_margin < worst || worst_id == "-") {
        worst = r.worst_margin;
        worst_id = r.id;
      }
    }
    const bool pass = all && sec < kLemmaBudgetSec;
    lines.push_back({1, "lemma-suite",
                     pass,
                     fmt("%zu checks x %d samples, worst margin %.3g (%s), %.1fs < %.0fs",
                         reports.size(), kLemmaSamples, worst, worst_id.c_str(), sec,
                         kLemmaBudgetSec)});
  }

  // 2. Capillary identities: small residuals on the documented smooth
  //    profiles at n = 128, and at least a 10x collapse from n = 32 to
  //    n = 128 on band-limited draws (the closed-form profiles already sit
  //    at the round-off floor on the coarse grid, so they cannot show decay).
  {
    bool pass = true;
    double worst_fine = 0.0;
    double worst_ratio = 0.0;

    auto residuals = [](const ScalarField& rho) {
      return std::vector<double>{delta_rho_residual(rho), grad_identity_residual(rho),
                                 bohm_agreement_residual(rho)};
    };

    Grid g1(1, 128);
    std::vector<ScalarField> profiles;
    profiles.push_back(sample(g1, [](double x) { return std::exp(std::sin(TP * x)); }));
    profiles.push_back(sample(g1, [](double x) { return 1.0 + 0.4 * std::sin(TP * x); }));
    Grid g2(2, 128);
    profiles.push_back(sample(g2, [](double x, double y) {
      return 1.0 + 0.2 * std::sin(TP * x) * std::sin(TP * y);
    }));
    for (const auto& rho : profiles)
      for (double r : residuals(rho)) {
        worst_fine = std::max(worst_fine, r);
        pass = pass && r < kIdentityTol;
      }

    for (int d : {1, 2}) {
      BandLimitedSample s = draw_band_limited(d, d == 1 ? 11 : 12, 4);
      Grid coarse(d, 32), fine(d, 128);
      BandLimitedSample sc = scaled_to_range(s, coarse, 0.5, 2.0);
      const auto rc = residuals(sc.evaluate(coarse));
      const auto rf = residuals(sc.evaluate(fine));
      for (size_t i = 0; i < rc.size(); ++i) {
        worst_fine = std::max(worst_fine, rf[i]);
        const double ratio = rf[i] > 0.0 ? rc[i] / rf[i] : HUGE_VAL;
        worst_ratio = worst_ratio == 0.0 ? ratio : std::min(worst_ratio, ratio);
        pass = pass && rf[i] < kIdentityTol && rf[i] * kDecayFactor < rc[i];
      }
    }
    lines.push_back({2, "capillary-identities",
                     pass,
                     fmt("worst residual %.3g < %.0e at n=128, draw decay >= %.3gx",
                         worst_fine, kIdentityTol, worst_ratio)});
  }

  // 3. gamma = 2 closed forms: the pressure-vs-entropy bound constant is
  //    exactly gamma - 1 = 1, and H(rho | r) = (rho - r)^2.
  {
    const PressureLaw law(1.0, 2.0, 1.0);
    const double C = pressure_bound_constant(law, 0.5, 2.0, 256);
    bool pass = std::fabs(C - 1.0) <= kPressureGamma2Tol;
    double worst_dev = 0.0;
    for (int i = 0; i <= 60; ++i)
      for (int j = 0; j <= 30; ++j) {
        const double rho = 0.05 * i;        // [0, 3]
        const double r = 0.5 + 0.05 * j;    // [0.5, 2]
        const double quad = (rho - r) * (rho - r);
        const double dev = std::fabs(law.entropy_relative(rho, r) - quad);
        worst_dev = std::max(worst_dev, dev / (1.0 + quad));
        pass = pass && dev <= kQuadraticEntropyTol * (1.0 + quad);
      }
    lines.push_back({3, "gamma-two-forms",
                     pass,
                     fmt("|C - 1| = %.3g <= %.0e, worst |H_rel - (rho-r)^2| = %.3g <= %.0e",
                         std::fabs(C - 1.0), kPressureGamma2Tol, worst_dev,
                         kQuadraticEntropyTol)});
  }

  // 4. Conservative energy balance: the budget residual is pure output-cadence
  //    quadrature error, small against E(0) and second order under dt halving
  //    with the cadence count held fixed.
  {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig rc = base_config();
    const RunResult coarse = run_single(rc);
    rc.sim.dt = 2.5e-5;
    const RunResult fine = run_single(rc);
    const double sec = seconds_since(t0);
    drifts.push_back(coarse.mass_drift);
    drifts.push_back(fine.mass_drift);

    const double e0 = coarse.diag.front().energy;
    const double rel = coarse.budget.worst_residual / e0;
    const double order = std::log2(coarse.budget.worst_residual / fine.budget.worst_residual);
    const bool pass = coarse.traj.completed && fine.traj.completed &&
                      rel <= kBudgetRelTol && order >= kOrderMin && sec < kEnergyBudgetSec;
    lines.push_back({4, "energy-balance",
                     pass,
                     fmt("residual/E(0) = %.3g <= %.0e, order %.3f >= %.1f, %.1fs < %.0fs",
                         rel, kBudgetRelTol, order, kOrderMin, sec, kEnergyBudgetSec)});
  }

  // 6. Weak-strong stability: zero perturbation stays at the floor, the
  //    initial relative entropy scales as delta^2, and every Gronwall margin
  //    clears the documented tolerance.
  {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig rc = base_config();
    rc.sim.output_every = 20;
    rc.refine = 4;
    const std::vector<double> deltas{0.0, 1e-2, 5e-3, 2.5e-3};
    const WeakStrongReport rep = run_weak_strong(rc, deltas);
    const double sec = seconds_since(t0);

    bool pass = rep.completed;
    drifts.push_back(mass_drift_of(rep.reference_diag));
    double floor_val = HUGE_VAL;
    for (const auto& c : rep.cases) {
      pass = pass && c.completed;
      drifts.push_back(mass_drift_of(c.diag));
      if (c.delta == 0.0) floor_val = c.max_entropy;
    }
    pass = pass && floor_val < kFloorTol;
    pass = pass && std::fabs(rep.exponent_initial - kExponentTarget) <= kExponentTol;
    pass = pass && rep.margins_ok;
    pass = pass && sec < kWeakStrongBudgetSec;
    lines.push_back({6, "weak-strong",
                     pass,
                     fmt("floor %.3g < %.0e, exponent %.4f = %.1f +- %.2f, margins %s, "
                         "%.1fs < %.0fs",
                         floor_val, kFloorTol, rep.exponent_initial, kExponentTarget,
                         kExponentTol, rep.margins_ok ? "ok" : "VIOLATED", sec,
                         kWeakStrongBudgetSec)});
  }

  // 7. Vanishing regularization: |b_app| shrinks strictly with eps = nu and
  //    the Gronwall margins stay nonnegative throughout. The eps = 0 entry
  //    pins the tail of the trend at exactly zero.
  {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig rc = base_config();
    rc.sim.output_every = 20;
    rc.sim.q = 4.0;
    const std::vector<double> eps{1e-2, 1e-3, 1e-4, 0.0};
    const VanishReport rep = run_vanish_regularization(rc, eps);
    const double sec = seconds_since(t0);

    bool pass = rep.completed;
    std::string trend;
    for (const auto& c : rep.cases) {
      pass = pass && c.completed;
      drifts.push_back(mass_drift_of(c.diag));
      trend += fmt("%s%.3g", trend.empty() ? "" : " > ", c.max_abs_b_app);
    }
    pass = pass && rep.b_app_decreasing && rep.margins_ok && sec < kVanishBudgetSec;
    lines.push_back({7, "vanishing-regularization",
                     pass,
                     fmt("max|b_app| %s, margins %s, %.1fs < %.0fs", trend.c_str(),
                         rep.margins_ok ? "ok" : "VIOLATED", sec, kVanishBudgetSec)});
  }

  // 8. Determinism: repeating a run reproduces the diagnostics table and the
  //    emitted files byte for byte.
  {
    RunConfig rc = base_config();
    const RunResult a = run_single(rc);
    const RunResult b = run_single(rc);
    drifts.push_back(a.mass_drift);
    drifts.push_back(b.mass_drift);
    const std::string csv_a = diagnostics_csv(a.diag);
    const std::string csv_b = diagnostics_csv(b.diag);

    rc.outdir = "acceptance_out/det_a";
    emit_run_outputs(rc, a);
    rc.outdir = "acceptance_out/det_b";
    emit_run_outputs(rc, b);
    bool files_equal = true;
    for (const char* f : {"diagnostics.csv", "state_final.ckpt"}) {
      const std::string pa = std::string("acceptance_out/det_a/") + f;
      const std::string pb = std::string("acceptance_out/det_b/") + f;
      files_equal = files_equal && !slurp(pa).empty() && slurp(pa) == slurp(pb);
    }
    // The manifests record their own landing directory; everything else in
    // them must match byte for byte.
    auto drop_outdir = [](const std::string& text) {
      std::istringstream in(text);
      std::string out, line;
      while (std::getline(in, line))
        if (line.rfind("outdir", 0) != 0) out += line + "\n";
      return out;
    };
    const std::string man_a = slurp("acceptance_out/det_a/manifest.cfg");
    const std::string man_b = slurp("acceptance_out/det_b/manifest.cfg");
    files_equal = files_equal && !man_a.empty() && drop_outdir(man_a) == drop_outdir(man_b);
    const bool pass = csv_a == csv_b && files_equal;
    lines.push_back({8, "determinism",
                     pass,
                     fmt("%zu-byte diagnostics %s, emitted files %s", csv_a.size(),
                         csv_a == csv_b ? "identical" : "DIFFER",
                         files_equal ? "identical" : "DIFFER")});
  }

  // 5. Mass conservation across every run the gate performed above.
  {
    double worst = 0.0;
    for (double d : drifts) worst = std::max(worst, d);
    lines.push_back({5, "mass-conservation",
                     worst < kMassDriftTol,
                     fmt("worst drift %.3g < %.0e over %zu runs", worst, kMassDriftTol,
                         drifts.size())});
  }

  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.k < b.k; });
  int failures = 0;
  for (const auto& l : lines) {
    std::printf("ACCEPTANCE %d %s: %s (%s)\n", l.k, l.name.c_str(), l.pass ? "PASS" : "FAIL",
                l.detail.c_str());
    if (!l.pass) ++failures;
  }
  if (failures == 0)
    std::printf("ACCEPTANCE RESULT: ALL PASS (%zu/%zu)\n", lines.size(), lines.size());
  else
    std::printf("ACCEPTANCE RESULT: %d FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
