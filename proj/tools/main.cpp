#include <CLI11.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nskw/experiments.hpp"
#include "nskw/io.hpp"

using namespace nskw;

namespace {

RunConfig load(const std::string& path, const std::string& outdir_override) {
  RunConfig rc = parse_config(path);
  if (!outdir_override.empty()) rc.outdir = outdir_override;
  return rc;
}

void print_paths(const std::vector<std::string>& paths) {
  for (const std::string& p : paths) std::printf("wrote %s\n", p.c_str());
}

int cmd_run(const std::string& config_path, const std::string& outdir) {
  const RunConfig rc = load(config_path, outdir);
  const RunResult res = run_single(rc);
  print_paths(emit_run_outputs(rc, res));

  std::printf("status: %s\n", res.traj.status.c_str());
  std::printf("outputs: %zu  t_final: %.17g\n", res.traj.times.size(),
              res.traj.times.empty() ? 0.0 : res.traj.times.back());
  if (!res.diag.empty()) {
    std::printf("mass drift: %.6g\n", res.mass_drift);
    std::printf("energy: %.17g -> %.17g\n", res.diag.front().energy, res.diag.back().energy);
    std::printf("worst energy-budget residual: %.6g\n", res.budget.worst_residual);
    std::printf("min density: %.6g (lower bound %.6g)\n", res.traj.min_density,
                res.traj.density_lower_bound);
  }
  if (!res.traj.cfl_ok) {
    std::fprintf(stderr, "warning: dt=%.6g exceeds the advisory CFL limit %.6g at t=0\n",
                 rc.sim.dt, res.traj.cfl_dt);
  }
  return res.traj.completed ? 0 : 3;
}

int cmd_verify_lemmas(std::uint64_t seed, int samples) {
  const std::vector<LemmaReport> reports = lemma_suite(seed, samples);
  std::fputs(lemma_lines(reports).c_str(), stdout);
  bool all = true;
  for (const LemmaReport& r : reports) all = all && r.pass;
  std::printf("verify-lemmas: %s\n", all ? "all checks passed" : "CHECK FAILED");
  return all ? 0 : 1;
}

int cmd_weak_strong(const std::string& config_path, const std::string& outdir,
                    const std::vector<double>& deltas) {
  const RunConfig rc = load(config_path, outdir);
  const WeakStrongReport rep = run_weak_strong(rc, deltas);
  if (!rep.completed) {
    std::fprintf(stderr, "error: %s\n", rep.status.c_str());
    return 3;
  }
  print_paths(emit_weak_strong_outputs(rc, rep));

  std::printf("REFERENCE n=%d slices=%zu\n", rep.fine_n,
              rep.cases.empty() ? 0 : rep.cases.front().gronwall.entropy.size());
  bool all_completed = true;
  for (const WeakStrongCase& c : rep.cases) {
    std::printf("WEAK-STRONG delta=%g entropy0=%.6g max_entropy=%.6g worst_margin=%.6g "
                "C=%.6g pass=%s\n",
                c.delta, c.entropy0, c.max_entropy, c.gronwall.worst_margin, c.gronwall.C,
                c.completed && c.gronwall.pass ? "true" : "false");
    if (!c.completed) {
      all_completed = false;
      std::fprintf(stderr, "warning: delta=%g run ended early: %s\n", c.delta, c.status.c_str());
    }
  }
  std::printf("EXPONENT entropy0_vs_delta=%.4f max_entropy_vs_delta=%.4f\n",
              rep.exponent_initial, rep.exponent_max);
  return (rep.margins_ok && all_completed) ? 0 : 1;
}

int cmd_vanish(const std::string& config_path, const std::string& outdir,
               const std::vector<double>& eps_list) {
  const RunConfig rc = load(config_path, outdir);
  const VanishReport rep = run_vanish_regularization(rc, eps_list);
  if (!rep.completed) {
    std::fprintf(stderr, "error: %s\n", rep.status.c_str());
    return 3;
  }
  print_paths(emit_vanish_outputs(rc, rep));

  bool all_completed = true;
  for (const VanishCase& c : rep.cases) {
    std::printf("VANISH eps=%g max_abs_b_app=%.6g worst_margin=%.6g pass=%s\n", c.eps,
                c.max_abs_b_app, c.gronwall.worst_margin,
                c.completed && c.gronwall.pass ? "true" : "false");
    if (!c.completed) {
      all_completed = false;
      std::fprintf(stderr, "warning: eps=%g run ended early: %s\n", c.eps, c.status.c_str());
    }
  }
  for (size_t i = 0; i < rep.successive.size(); ++i) {
    std::printf("SUCCESSIVE eps=%g -> eps=%g max_rel_entropy=%.6g\n", rep.cases[i].eps,
                rep.cases[i + 1].eps, rep.successive[i]);
  }
  std::printf("TREND b_app_decreasing=%s successive_decreasing=%s margins_ok=%s\n",
              rep.b_app_decreasing ? "true" : "false",
              rep.successive_decreasing ? "true" : "false", rep.margins_ok ? "true" : "false");
  return (rep.b_app_decreasing && rep.successive_decreasing && rep.margins_ok && all_completed)
             ? 0
             : 1;
}

int cmd_compare(const std::string& path1, const std::string& path2) {
  const Checkpoint a = read_checkpoint(path1);
  const Checkpoint b = read_checkpoint(path2);

  auto require_match = [&](const char* field, double va, double vb) {
    if (va != vb) {
      throw std::invalid_argument(std::string("checkpoint parameter mismatch: ") + field);
    }
  };
  require_match("d", a.cfg.d, b.cfg.d);
  require_match("n", a.cfg.n, b.cfg.n);
  require_match("gamma", a.cfg.pressure_law.gamma, b.cfg.pressure_law.gamma);
  require_match("a_p", a.cfg.pressure_law.a_p, b.cfg.pressure_law.a_p);
  require_match("rho_bar", a.cfg.pressure_law.rho_bar, b.cfg.pressure_law.rho_bar);
  require_match("kappa", a.cfg.kappa, b.cfg.kappa);
  if (a.state.t != b.state.t) {
    std::fprintf(stderr, "warning: checkpoint times differ (%.17g vs %.17g), comparing anyway\n",
                 a.state.t, b.state.t);
  }

  ReferencePair ref;
  ref.r = b.state.rho;
  ref.v = velocity(b.cfg, b.state);
  const double dist = relative_entropy(b.cfg, a.state, ref);

  std::printf("checkpoint 1: t=%.17g mass=%.17g energy=%.17g (eps=%g nu=%g q=%g)\n", a.state.t,
              integrate(a.state.rho), energy(a.cfg, a.state), a.cfg.eps, a.cfg.nu, a.cfg.q);
  std::printf("checkpoint 2: t=%.17g mass=%.17g energy=%.17g (eps=%g nu=%g q=%g)\n", b.state.t,
              integrate(b.state.rho), energy(b.cfg, b.state), b.cfg.eps, b.cfg.nu, b.cfg.q);
  std::printf("relative entropy (first against second as reference): %.17g\n", dist);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral simulator and entropy diagnostics for compressible "
               "capillary flow with shear-dependent viscosity on the periodic torus.\n"
               "NSKW_THREADS caps worker parallelism."};
  app.set_version_flag("--version", "nskw 0.1.0");
  app.require_subcommand(1);

  std::string config_path, outdir, ckpt1, ckpt2;
  std::uint64_t seed = 0;
  int samples = 10000;
  std::vector<double> deltas, eps_list;
  std::function<int()> action;

  CLI::App* run_cmd = app.add_subcommand("run", "Integrate a configured run and write outputs");
  run_cmd->add_option("config", config_path, "configuration file")->required();
  run_cmd->add_option("--outdir", outdir, "override the configured output directory");
  run_cmd->callback([&] { action = [&] { return cmd_run(config_path, outdir); }; });

  CLI::App* lem_cmd =
      app.add_subcommand("verify-lemmas", "Randomized checks of the supporting inequalities");
  lem_cmd->add_option("--seed", seed, "base seed (default 0)");
  lem_cmd->add_option("--samples", samples, "samples per check (default 10000)");
  lem_cmd->callback([&] { action = [&] { return cmd_verify_lemmas(seed, samples); }; });

  CLI::App* ws_cmd = app.add_subcommand(
      "weak-strong", "Relative-entropy decay against a fine-grid reference run");
  ws_cmd->add_option("config", config_path, "configuration file")->required();
  ws_cmd->add_option("--deltas", deltas, "comma-separated perturbation sizes")
      ->required()
      ->delimiter(',');
  ws_cmd->add_option("--outdir", outdir, "override the configured output directory");
  ws_cmd->callback([&] { action = [&] { return cmd_weak_strong(config_path, outdir, deltas); }; });

  CLI::App* v_cmd = app.add_subcommand(
      "vanish", "Vanishing-regularization sweep with nu = eps along the list");
  v_cmd->add_option("config", config_path, "configuration file")->required();
  v_cmd->add_option("--eps", eps_list, "comma-separated, strictly decreasing")
      ->required()
      ->delimiter(',');
  v_cmd->add_option("--outdir", outdir, "override the configured output directory");
  v_cmd->callback([&] { action = [&] { return cmd_vanish(config_path, outdir, eps_list); }; });

  CLI::App* cmp_cmd = app.add_subcommand(
      "compare", "Relative entropy between two checkpoints (second as reference)");
  cmp_cmd->add_option("checkpoint1", ckpt1, "state to measure")->required();
  cmp_cmd->add_option("checkpoint2", ckpt2, "reference state")->required();
  cmp_cmd->callback([&] { action = [&] { return cmd_compare(ckpt1, ckpt2); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
