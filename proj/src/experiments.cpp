#include "nskw/experiments.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "nskw/io.hpp"
#include "parallel.hpp"

namespace nskw {
namespace {

const double TP = 2.0 * M_PI;

ScalarField subsample(const Grid& coarse, const ScalarField& fine, int refine) {
  ScalarField out(coarse);
  const int nc = coarse.n, nf = fine.grid.n;
  if (coarse.d == 1) {
    for (int i = 0; i < nc; ++i) out.values[static_cast<size_t>(i)] = fine.values[static_cast<size_t>(i * refine)];
  } else {
    for (int i = 0; i < nc; ++i) {
      for (int j = 0; j < nc; ++j) {
        out.values[static_cast<size_t>(i) * nc + j] =
            fine.values[static_cast<size_t>(i * refine) * nf + static_cast<size_t>(j) * refine];
      }
    }
  }
  return out;
}

ScalarField times_field(const ScalarField& a, const ScalarField& b) {
  return pointwise(a, b, [](double x, double y) { return x * y; });
}

std::string fmt(const char* format, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// Shared summary-row helpers so every experiment CSV prints doubles the same
// way as the diagnostics table.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double max_series_entropy(const SimConfig& cfg, const std::vector<State>& states,
                          const ReferenceSeries& ref) {
  double worst = 0.0;
  for (size_t k = 0; k < states.size() && k < ref.slices.size(); ++k) {
    worst = std::max(worst, relative_entropy(cfg, states[k], ref.slices[k]));
  }
  return worst;
}

std::vector<std::pair<std::string, std::vector<double>>> one_series(const std::string& name,
                                                                    std::vector<double> v) {
  std::vector<std::pair<std::string, std::vector<double>>> s;
  s.emplace_back(name, std::move(v));
  return s;
}

}  // namespace

VectorField perturbation_profile(const Grid& g) {
  VectorField w(g);
  if (g.d == 1) {
    w[0] = sample(g, [](double x) { return std::sin(TP * x); });
  } else {
    w[0] = sample(g, [](double x, double) { return std::sin(TP * x); });
    w[1] = sample(g, [](double, double y) { return std::sin(TP * y); });
  }
  return w;
}

ReferenceSeries restrict_reference(const SimConfig& coarse_cfg, const SimConfig& fine_cfg,
                                   const Trajectory& fine) {
  if (fine_cfg.n != coarse_cfg.n * (fine_cfg.n / coarse_cfg.n) || fine_cfg.n <= coarse_cfg.n) {
    throw std::invalid_argument("fine grid must be a multiple refinement of the coarse grid");
  }
  const int refine = fine_cfg.n / coarse_cfg.n;
  const Grid gc = coarse_cfg.grid();

  ReferenceSeries ref;
  for (size_t k = 0; k < fine.snapshots.size(); ++k) {
    const State& s = fine.snapshots[k];
    VectorField u = velocity(fine_cfg, s);
    ReferencePair p;
    p.r = subsample(gc, s.rho, refine);
    p.v = VectorField(gc);
    for (int c = 0; c < gc.d; ++c) p.v[c] = subsample(gc, u[c], refine);
    ref.slices.push_back(std::move(p));
    ref.times.push_back(fine.times[k]);
  }
  return ref;
}

double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("exponent fit needs at least two (x, y) pairs");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw std::invalid_argument("exponent fit needs positive values");
    }
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RunResult run_single(const RunConfig& rc) {
  const Grid g = rc.sim.grid();
  RunResult res;
  res.traj = run(rc.sim, make_initial(g, rc.init));
  res.diag = diagnostics(rc.sim, res.traj);
  res.budget = energy_budget(rc.sim, res.traj);
  double drift = 0.0;
  if (!res.diag.empty() && res.diag.front().mass != 0.0) {
    for (const DiagnosticsRecord& r : res.diag) {
      drift = std::max(drift, std::abs(r.mass - res.diag.front().mass));
    }
    drift /= std::abs(res.diag.front().mass);
  }
  res.mass_drift = drift;
  return res;
}

std::vector<std::string> emit_run_outputs(const RunConfig& rc, const RunResult& result) {
  ensure_directory(rc.outdir);
  std::vector<std::string> paths;
  auto emit = [&](const std::string& name, const std::string& content) {
    const std::string path = rc.outdir + "/" + name;
    write_text_file(path, content);
    paths.push_back(path);
  };

  emit("diagnostics.csv", diagnostics_csv(result.diag));
  emit("manifest.cfg", manifest_text(rc));
  if (!result.traj.snapshots.empty()) {
    const std::string path = rc.outdir + "/state_final.ckpt";
    write_checkpoint(path, rc.sim, result.traj.snapshots.back());
    paths.push_back(path);
  }
  if (rc.svg) {
    std::vector<double> e;
    for (const DiagnosticsRecord& r : result.diag) e.push_back(r.energy);
    emit("energy.svg", svg_line_plot("energy", result.traj.times, one_series("E(t)", e)));
  }
  return paths;
}

WeakStrongReport run_weak_strong(const RunConfig& rc, const std::vector<double>& deltas) {
  if (deltas.empty()) throw std::invalid_argument("need at least one delta");
  for (double d : deltas) {
    if (!(d >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  }
  if (!(rc.sim.kappa > 0.0)) {
    throw std::invalid_argument("weak-strong experiment requires kappa > 0");
  }

  // Both legs run the unregularized system; the regularization knobs apply to
  // the vanishing-parameter experiment only.
  SimConfig coarse = rc.sim;
  coarse.eps = 0.0;
  coarse.nu = 0.0;

  SimConfig fine = coarse;
  fine.n = coarse.n * rc.refine;
  fine.dt = coarse.dt / (rc.refine * rc.refine);
  fine.output_every = coarse.output_every * rc.refine * rc.refine;

  WeakStrongReport rep;
  rep.fine_n = fine.n;

  const Trajectory fine_traj = run(fine, make_initial(fine.grid(), rc.init));
  if (!fine_traj.completed) {
    rep.completed = false;
    rep.status = "reference run failed: " + fine_traj.status;
    return rep;
  }
  const ReferenceSeries ref = restrict_reference(coarse, fine, fine_traj);
  rep.reference_diag = diagnostics(fine, fine_traj);
  rep.completed = true;
  rep.status = "completed";

  const Grid gc = coarse.grid();
  const VectorField w = perturbation_profile(gc);
  rep.cases.resize(deltas.size());

  detail::parallel_for(deltas.size(), [&](size_t i) {
    WeakStrongCase c;
    c.delta = deltas[i];
    State init(gc);
    init.rho = ref.slices[0].r;
    for (int comp = 0; comp < gc.d; ++comp) {
      ScalarField vel = pointwise(ref.slices[0].v[comp], w[comp],
                                  [&](double v, double pw) { return v + c.delta * pw; });
      init.m[comp] = times_field(init.rho, vel);
    }
    Trajectory traj = run(coarse, init);
    c.completed = traj.completed;
    c.status = traj.status;
    if (traj.completed && traj.snapshots.size() == ref.slices.size()) {
      c.gronwall = gronwall_check(coarse, traj.snapshots, ref);
      c.diag = diagnostics(coarse, traj, ref);
      c.entropy0 = c.gronwall.entropy.front();
      c.max_entropy = *std::max_element(c.gronwall.entropy.begin(), c.gronwall.entropy.end());
    }
    rep.cases[i] = std::move(c);
  });

  rep.margins_ok = true;
  for (const WeakStrongCase& c : rep.cases) {
    rep.margins_ok = rep.margins_ok && c.completed && c.gronwall.pass;
  }

  std::vector<double> ds, e0, emax;
  for (const WeakStrongCase& c : rep.cases) {
    if (c.delta > 0.0 && c.completed && c.entropy0 > 0.0) {
      ds.push_back(c.delta);
      e0.push_back(c.entropy0);
      emax.push_back(c.max_entropy);
    }
  }
  if (ds.size() >= 2) {
    rep.exponent_initial = fit_exponent(ds, e0);
    rep.exponent_max = fit_exponent(ds, emax);
  } else {
    rep.exponent_initial = std::numeric_limits<double>::quiet_NaN();
    rep.exponent_max = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

std::vector<std::string> emit_weak_strong_outputs(const RunConfig& rc,
                                                  const WeakStrongReport& rep) {
  ensure_directory(rc.outdir);
  std::vector<std::string> paths;
  auto emit = [&](const std::string& name, const std::string& content) {
    const std::string path = rc.outdir + "/" + name;
    write_text_file(path, content);
    paths.push_back(path);
  };

  std::string summary = "delta,entropy0,max_entropy,worst_margin,completed,pass\n";
  std::vector<std::pair<std::string, std::vector<double>>> entropy_series;
  std::vector<double> ts;
  for (const WeakStrongCase& c : rep.cases) {
    emit("delta_" + fmt("%g", c.delta) + ".csv", diagnostics_csv(c.diag));
    summary += num(c.delta) + "," + num(c.entropy0) + "," + num(c.max_entropy) + "," +
               num(c.gronwall.worst_margin) + "," + (c.completed ? "true" : "false") + "," +
               (c.completed && c.gronwall.pass ? "true" : "false") + "\n";
    if (rc.svg && c.completed) {
      if (ts.empty()) {
        for (const DiagnosticsRecord& r : c.diag) ts.push_back(r.t);
      }
      entropy_series.emplace_back("delta=" + fmt("%g", c.delta), std::vector<double>());
      for (const DiagnosticsRecord& r : c.diag) entropy_series.back().second.push_back(r.rel_entropy);
    }
  }
  emit("summary.csv", summary);
  emit("exponents.csv", "fit,exponent\nentropy0_vs_delta," + num(rep.exponent_initial) +
                            "\nmax_entropy_vs_delta," + num(rep.exponent_max) + "\n");
  emit("manifest.cfg", manifest_text(rc));
  if (rc.svg && !entropy_series.empty()) {
    emit("entropy.svg", svg_line_plot("relative entropy", ts, entropy_series));
  }
  return paths;
}

VanishReport run_vanish_regularization(const RunConfig& rc,
                                       const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw std::invalid_argument("need at least one eps");
  for (size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw std::invalid_argument("eps list must be strictly decreasing");
    }
  }

  SimConfig base = rc.sim;
  base.eps = 0.0;
  base.nu = 0.0;
  if (eps_list.front() > 0.0) {
    SimConfig check = base;
    check.eps = check.nu = eps_list.front();
    check.validate();  // the q > max(3, 3p/2) condition bites once nu > 0
  }

  VanishReport rep;
  const Grid g = base.grid();
  const State init = make_initial(g, rc.init);

  const Trajectory ref_traj = run(base, init);
  if (!ref_traj.completed) {
    rep.completed = false;
    rep.status = "reference run failed: " + ref_traj.status;
    return rep;
  }
  ReferenceSeries ref;
  for (size_t k = 0; k < ref_traj.snapshots.size(); ++k) {
    ReferencePair p;
    p.r = ref_traj.snapshots[k].rho;
    p.v = velocity(base, ref_traj.snapshots[k]);
    ref.slices.push_back(std::move(p));
    ref.times.push_back(ref_traj.times[k]);
  }

  rep.cases.resize(eps_list.size());
  std::vector<std::vector<State>> case_states(eps_list.size());

  detail::parallel_for(eps_list.size(), [&](size_t i) {
    VanishCase c;
    c.eps = eps_list[i];
    SimConfig cfg = base;
    cfg.eps = cfg.nu = c.eps;
    const Trajectory traj = c.eps == 0.0 ? ref_traj : run(cfg, init);
    c.completed = traj.completed;
    c.status = traj.status;
    if (traj.completed && traj.snapshots.size() == ref.slices.size()) {
      c.gronwall = gronwall_check(cfg, traj.snapshots, ref);
      c.diag = diagnostics(cfg, traj, ref);
      for (double b : c.gronwall.b_app.cumulative) {
        c.max_abs_b_app = std::max(c.max_abs_b_app, std::abs(b));
      }
      case_states[i] = traj.snapshots;
    }
    rep.cases[i] = std::move(c);
  });

  rep.completed = true;
  rep.status = "completed";
  rep.margins_ok = true;
  for (const VanishCase& c : rep.cases) {
    rep.margins_ok = rep.margins_ok && c.completed && c.gronwall.pass;
  }

  rep.b_app_decreasing = true;
  for (size_t i = 1; i < rep.cases.size(); ++i) {
    rep.b_app_decreasing =
        rep.b_app_decreasing && rep.cases[i].max_abs_b_app < rep.cases[i - 1].max_abs_b_app;
  }

  for (size_t i = 0; i + 1 < rep.cases.size(); ++i) {
    if (case_states[i].empty() || case_states[i + 1].empty()) {
      rep.successive.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    ReferenceSeries prev;
    for (size_t k = 0; k < case_states[i].size(); ++k) {
      SimConfig cfg_prev = base;
      cfg_prev.eps = cfg_prev.nu = rep.cases[i].eps;
      ReferencePair p;
      p.r = case_states[i][k].rho;
      p.v = velocity(cfg_prev, case_states[i][k]);
      prev.slices.push_back(std::move(p));
      prev.times.push_back(ref.times[k]);
    }
    rep.successive.push_back(max_series_entropy(base, case_states[i + 1], prev));
  }
  rep.successive_decreasing = true;
  for (size_t i = 1; i < rep.successive.size(); ++i) {
    rep.successive_decreasing =
        rep.successive_decreasing && rep.successive[i] < rep.successive[i - 1];
  }
  return rep;
}

std::vector<std::string> emit_vanish_outputs(const RunConfig& rc, const VanishReport& rep) {
  ensure_directory(rc.outdir);
  std::vector<std::string> paths;
  auto emit = [&](const std::string& name, const std::string& content) {
    const std::string path = rc.outdir + "/" + name;
    write_text_file(path, content);
    paths.push_back(path);
  };

  std::string summary = "eps,max_abs_b_app,worst_margin,completed,pass\n";
  for (const VanishCase& c : rep.cases) {
    emit("eps_" + fmt("%g", c.eps) + ".csv", diagnostics_csv(c.diag));
    summary += num(c.eps) + "," + num(c.max_abs_b_app) + "," + num(c.gronwall.worst_margin) +
               "," + (c.completed ? "true" : "false") + "," +
               (c.completed && c.gronwall.pass ? "true" : "false") + "\n";
  }
  emit("summary.csv", summary);

  std::string successive = "eps_from,eps_to,max_rel_entropy\n";
  for (size_t i = 0; i + 1 < rep.cases.size(); ++i) {
    successive += num(rep.cases[i].eps) + "," + num(rep.cases[i + 1].eps) + "," +
                  num(rep.successive[i]) + "\n";
  }
  emit("successive.csv", successive);
  emit("manifest.cfg", manifest_text(rc));

  if (rc.svg) {
    std::vector<double> xs, ys;
    for (const VanishCase& c : rep.cases) {
      if (c.eps > 0.0 && c.max_abs_b_app > 0.0) {
        xs.push_back(std::log10(c.eps));
        ys.push_back(std::log10(c.max_abs_b_app));
      }
    }
    if (!xs.empty()) {
      emit("b_app.svg",
           svg_line_plot("log10 max|b_app| vs log10 eps", xs, one_series("b_app", ys)));
    }
  }
  return paths;
}

std::string lemma_lines(const std::vector<LemmaReport>& reports) {
  std::string out;
  for (const LemmaReport& r : reports) {
    char buf[192];
    std::snprintf(buf, sizeof buf, "LEMMA %s pass=%s worst_margin=%.6g samples=%d seed=%" PRIu64 "\n",
                  r.id.c_str(), r.pass ? "true" : "false", r.worst_margin, r.samples, r.seed);
    out += buf;
  }
  return out;
}

}  // namespace nskw
