// Python surface: configuration, runs, diagnostics and the check suite.
// Fields cross the boundary as plain lists (row-major samples), which keeps
// the module free of third-party array dependencies.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "nskw/experiments.hpp"
#include "nskw/io.hpp"
#include "nskw/lemmas.hpp"

namespace py = pybind11;
using namespace nskw;

namespace {

ScalarField to_scalar(const Grid& g, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != g.size())
    throw std::invalid_argument("field length does not match the grid");
  ScalarField f(g);
  f.values = v;
  return f;
}

VectorField to_vector(const Grid& g, const std::vector<std::vector<double>>& comps) {
  if (static_cast<int>(comps.size()) != g.d)
    throw std::invalid_argument("need one velocity component per axis");
  VectorField u(g);
  for (int c = 0; c < g.d; ++c) u[c] = to_scalar(g, comps[c]);
  return u;
}

std::vector<std::vector<double>> from_vector(const VectorField& u) {
  std::vector<std::vector<double>> out;
  out.reserve(u.comp.size());
  for (const auto& c : u.comp) out.push_back(c.values);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "pseudo-spectral torus solver for the isothermal capillary "
            "Navier-Stokes system, with its entropy diagnostics";

  py::class_<Grid>(m, "Grid")
      .def(py::init<int, int, bool>(), py::arg("d"), py::arg("n"), py::arg("dealias") = true)
      .def_readonly("d", &Grid::d)
      .def_readonly("n", &Grid::n)
      .def_readonly("dealias", &Grid::dealias)
      .def("size", &Grid::size)
      .def("__repr__", [](const Grid& g) {
        return "Grid(d=" + std::to_string(g.d) + ", n=" + std::to_string(g.n) + ")";
      });

  py::class_<StressModel>(m, "StressModel")
      .def_static("newtonian", &StressModel::newtonian, py::arg("mu"))
      .def_static("power_law", &StressModel::power_law, py::arg("p"))
      .def_static("regularized_bingham", &StressModel::regularized_bingham, py::arg("delta"))
      .def_static("composite", &StressModel::composite, py::arg("mu0"), py::arg("mu1"),
                  py::arg("delta"))
      .def_readonly("mu", &StressModel::mu)
      .def_readonly("p", &StressModel::p)
      .def_readonly("delta", &StressModel::delta)
      .def_readonly("mu0", &StressModel::mu0)
      .def_readonly("mu1", &StressModel::mu1)
      .def("growth_exponent", &StressModel::growth_exponent)
      .def("name", &StressModel::name)
      .def("__repr__", [](const StressModel& s) { return "StressModel(" + s.name() + ")"; });

  py::class_<PressureLaw>(m, "PressureLaw")
      .def(py::init<double, double, double>(), py::arg("a_p") = 1.0, py::arg("gamma") = 2.0,
           py::arg("rho_bar") = 1.0)
      .def_readonly("a_p", &PressureLaw::a_p)
      .def_readonly("gamma", &PressureLaw::gamma)
      .def_readonly("rho_bar", &PressureLaw::rho_bar)
      .def("pressure", py::overload_cast<double>(&PressureLaw::pressure, py::const_))
      .def("pressure_prime", py::overload_cast<double>(&PressureLaw::pressure_prime, py::const_))
      .def("entropy", &PressureLaw::entropy)
      .def("entropy_prime", &PressureLaw::entropy_prime)
      .def("entropy_relative", &PressureLaw::entropy_relative, py::arg("rho"), py::arg("r"));

  py::enum_<Integrator>(m, "Integrator")
      .value("RK4", Integrator::RK4)
      .value("SSPRK3", Integrator::SSPRK3);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("d", &SimConfig::d)
      .def_readwrite("n", &SimConfig::n)
      .def_readwrite("kappa", &SimConfig::kappa)
      .def_readwrite("eps", &SimConfig::eps)
      .def_readwrite("nu", &SimConfig::nu)
      .def_readwrite("q", &SimConfig::q)
      .def_readwrite("stress_model", &SimConfig::stress_model)
      .def_readwrite("pressure_law", &SimConfig::pressure_law)
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("t_end", &SimConfig::t_end)
      .def_readwrite("rho_min", &SimConfig::rho_min)
      .def_readwrite("output_every", &SimConfig::output_every)
      .def_readwrite("integrator", &SimConfig::integrator)
      .def_readwrite("cfl_safety", &SimConfig::cfl_safety)
      .def("grid", &SimConfig::grid)
      .def("validate", &SimConfig::validate);

  py::class_<InitSpec>(m, "InitSpec")
      .def(py::init<>())
      .def_readwrite("profile", &InitSpec::profile)
      .def_readwrite("rho0", &InitSpec::rho0)
      .def_readwrite("amp_rho", &InitSpec::amp_rho)
      .def_readwrite("amp_u", &InitSpec::amp_u)
      .def_readwrite("mode", &InitSpec::mode)
      .def_readwrite("width", &InitSpec::width);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("sim", &RunConfig::sim)
      .def_readwrite("init", &RunConfig::init)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("outdir", &RunConfig::outdir)
      .def_readwrite("svg", &RunConfig::svg)
      .def_readwrite("refine", &RunConfig::refine);

  m.def("parse_config", &parse_config, py::arg("path"));
  m.def("parse_config_text", &parse_config_text, py::arg("text"), py::arg("name") = "<config>");
  m.def("manifest_text", &manifest_text, py::arg("config"));

  py::class_<State>(m, "State")
      .def_readonly("t", &State::t)
      .def_property_readonly("grid", [](const State& s) { return s.rho.grid; })
      .def_property_readonly("density", [](const State& s) { return s.rho.values; })
      .def_property_readonly("momentum", [](const State& s) { return from_vector(s.m); });

  m.def(
      "make_state",
      [](const Grid& g, const std::vector<double>& rho,
         const std::vector<std::vector<double>>& mom, double t) {
        State s(g);
        s.rho = to_scalar(g, rho);
        s.m = to_vector(g, mom);
        s.t = t;
        return s;
      },
      py::arg("grid"), py::arg("density"), py::arg("momentum"), py::arg("t") = 0.0);
  m.def("make_initial", &make_initial, py::arg("grid"), py::arg("init"));
  m.def(
      "velocity",
      [](const SimConfig& cfg, const State& s) { return from_vector(velocity(cfg, s)); },
      py::arg("config"), py::arg("state"));
  m.def("energy", &energy, py::arg("config"), py::arg("state"));
  m.def(
      "relative_entropy",
      [](const SimConfig& cfg, const State& s, const std::vector<double>& ref_density,
         const std::vector<std::vector<double>>& ref_velocity) {
        ReferencePair ref;
        ref.r = to_scalar(cfg.grid(), ref_density);
        ref.v = to_vector(cfg.grid(), ref_velocity);
        return relative_entropy(cfg, s, ref);
      },
      py::arg("config"), py::arg("state"), py::arg("ref_density"), py::arg("ref_velocity"));

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("snapshots", &Trajectory::snapshots)
      .def_readonly("times", &Trajectory::times)
      .def_readonly("completed", &Trajectory::completed)
      .def_readonly("status", &Trajectory::status)
      .def_readonly("min_density", &Trajectory::min_density)
      .def_readonly("density_lower_bound", &Trajectory::density_lower_bound)
      .def_readonly("cfl_dt", &Trajectory::cfl_dt)
      .def_readonly("cfl_ok", &Trajectory::cfl_ok);

  py::class_<DiagnosticsRecord>(m, "DiagnosticsRecord")
      .def_readonly("t", &DiagnosticsRecord::t)
      .def_readonly("mass", &DiagnosticsRecord::mass)
      .def_readonly("energy", &DiagnosticsRecord::energy)
      .def_readonly("diss_S", &DiagnosticsRecord::diss_S)
      .def_readonly("diss_nu", &DiagnosticsRecord::diss_nu)
      .def_readonly("diss_kw", &DiagnosticsRecord::diss_kw)
      .def_readonly("diss_p", &DiagnosticsRecord::diss_p)
      .def_readonly("rel_entropy", &DiagnosticsRecord::rel_entropy)
      .def_readonly("gronwall_rhs", &DiagnosticsRecord::gronwall_rhs)
      .def_readonly("margin", &DiagnosticsRecord::margin);

  py::class_<EnergyBudget>(m, "EnergyBudget")
      .def_readonly("energy", &EnergyBudget::energy)
      .def_readonly("dissipated", &EnergyBudget::dissipated)
      .def_readonly("residual", &EnergyBudget::residual)
      .def_readonly("worst_residual", &EnergyBudget::worst_residual);

  py::class_<GronwallReport>(m, "GronwallReport")
      .def_readonly("C", &GronwallReport::C)
      .def_readonly("entropy", &GronwallReport::entropy)
      .def_readonly("rhs", &GronwallReport::rhs)
      .def_readonly("margin", &GronwallReport::margin)
      .def_readonly("used_b_app", &GronwallReport::used_b_app)
      .def_readonly("worst_margin", &GronwallReport::worst_margin)
      .def_readonly("tolerance", &GronwallReport::tolerance)
      .def_readonly("pass_", &GronwallReport::pass)
      .def_readonly("smallest_passing_C", &GronwallReport::smallest_passing_C);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("traj", &RunResult::traj)
      .def_readonly("diag", &RunResult::diag)
      .def_readonly("budget", &RunResult::budget)
      .def_readonly("mass_drift", &RunResult::mass_drift);

  m.def("run_single", &run_single, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("emit_run_outputs", &emit_run_outputs, py::arg("config"), py::arg("result"));
  m.def("diagnostics_csv", &diagnostics_csv, py::arg("rows"));

  py::class_<WeakStrongCase>(m, "WeakStrongCase")
      .def_readonly("delta", &WeakStrongCase::delta)
      .def_readonly("completed", &WeakStrongCase::completed)
      .def_readonly("status", &WeakStrongCase::status)
      .def_readonly("entropy0", &WeakStrongCase::entropy0)
      .def_readonly("max_entropy", &WeakStrongCase::max_entropy)
      .def_readonly("gronwall", &WeakStrongCase::gronwall)
      .def_readonly("diag", &WeakStrongCase::diag);

  py::class_<WeakStrongReport>(m, "WeakStrongReport")
      .def_readonly("completed", &WeakStrongReport::completed)
      .def_readonly("status", &WeakStrongReport::status)
      .def_readonly("fine_n", &WeakStrongReport::fine_n)
      .def_readonly("cases", &WeakStrongReport::cases)
      .def_readonly("exponent_initial", &WeakStrongReport::exponent_initial)
      .def_readonly("exponent_max", &WeakStrongReport::exponent_max)
      .def_readonly("margins_ok", &WeakStrongReport::margins_ok);

  m.def("run_weak_strong", &run_weak_strong, py::arg("config"), py::arg("deltas"),
        py::call_guard<py::gil_scoped_release>());
  m.def("emit_weak_strong_outputs", &emit_weak_strong_outputs, py::arg("config"),
        py::arg("report"));

  py::class_<VanishCase>(m, "VanishCase")
      .def_readonly("eps", &VanishCase::eps)
      .def_readonly("completed", &VanishCase::completed)
      .def_readonly("status", &VanishCase::status)
      .def_readonly("max_abs_b_app", &VanishCase::max_abs_b_app)
      .def_readonly("gronwall", &VanishCase::gronwall)
      .def_readonly("diag", &VanishCase::diag);

  py::class_<VanishReport>(m, "VanishReport")
      .def_readonly("completed", &VanishReport::completed)
      .def_readonly("status", &VanishReport::status)
      .def_readonly("cases", &VanishReport::cases)
      .def_readonly("successive", &VanishReport::successive)
      .def_readonly("b_app_decreasing", &VanishReport::b_app_decreasing)
      .def_readonly("successive_decreasing", &VanishReport::successive_decreasing)
      .def_readonly("margins_ok", &VanishReport::margins_ok);

  m.def("run_vanish_regularization", &run_vanish_regularization, py::arg("config"),
        py::arg("eps_list"), py::call_guard<py::gil_scoped_release>());
  m.def("emit_vanish_outputs", &emit_vanish_outputs, py::arg("config"), py::arg("report"));

  py::class_<LemmaReport>(m, "LemmaReport")
      .def_readonly("id", &LemmaReport::id)
      .def_readonly("samples", &LemmaReport::samples)
      .def_readonly("seed", &LemmaReport::seed)
      .def_readonly("worst_margin", &LemmaReport::worst_margin)
      .def_readonly("tolerance", &LemmaReport::tolerance)
      .def_readonly("witness", &LemmaReport::witness)
      .def_readonly("pass_", &LemmaReport::pass);

  m.def("lemma_suite", &lemma_suite, py::arg("seed"), py::arg("samples"),
        py::call_guard<py::gil_scoped_release>());
  m.def("lemma_lines", &lemma_lines, py::arg("reports"));
  m.def("cq_constant", &cq_constant, py::arg("q"));
  m.def("pressure_bound_constant", &pressure_bound_constant, py::arg("law"), py::arg("r_min"),
        py::arg("r_max"), py::arg("rho_grid") = 256);

  py::class_<Checkpoint>(m, "Checkpoint")
      .def_readonly("cfg", &Checkpoint::cfg)
      .def_readonly("state", &Checkpoint::state);

  m.def("read_checkpoint", &read_checkpoint, py::arg("path"));
  m.def("write_checkpoint", &write_checkpoint, py::arg("path"), py::arg("config"),
        py::arg("state"));

  m.attr("__version__") = "0.1.0";
}
