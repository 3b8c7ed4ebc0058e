#include "nskw/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace nskw {
namespace {

// Staged raw values; the typed RunConfig is assembled (and validated) only
// after the whole file has been read, so key order never matters.
struct Raw {
  int d = 1, n = 64, mode = 1, output_every = 10, refine = 4;
  double kappa = 1.0, eps = 0.0, nu = 0.0, q = 4.0;
  std::string stress = "newtonian";
  double mu = 1.0, p = 2.0, delta = 1.0, mu0 = 1.0, mu1 = 1.0;
  double gamma = 2.0, a_p = 1.0, rho_bar = 1.0;
  double dt = 1e-4, t_end = 0.1, rho_min = 1e-8, cfl_safety = 0.9;
  std::string integrator = "rk4";
  std::string profile = "sine";
  double rho0 = 1.0, amp_rho = 0.2, amp_u = 0.1, width = 0.5;
  std::uint64_t seed = 0;
  std::string outdir = "out";
  bool svg = false;
  std::string version = "0.1.0";
};

[[noreturn]] void fail(const std::string& name, int line, const std::string& what) {
  throw std::invalid_argument(name + ":" + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& name, int line, const std::string& key,
                  const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty() || !std::isfinite(x)) {
    fail(name, line, "invalid value for '" + key + "': " + v);
  }
  return x;
}

long long parse_ll(const std::string& name, int line, const std::string& key,
                   const std::string& v) {
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty()) {
    fail(name, line, "invalid value for '" + key + "': " + v);
  }
  return x;
}

std::uint64_t parse_u64(const std::string& name, int line, const std::string& key,
                        const std::string& v) {
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || v[0] == '-') {
    fail(name, line, "invalid value for '" + key + "': " + v);
  }
  return x;
}

bool parse_bool(const std::string& name, int line, const std::string& key,
                const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(name, line, "invalid value for '" + key + "': expected true or false");
}

void fmt_real(std::string& out, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
  out += buf;
}

void fmt_int(std::string& out, const char* key, long long v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s = %lld\n", key, v);
  out += buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name) {
  Raw raw;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const size_t eq = line.find('=');
    if (eq == std::string::npos) fail(name, lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail(name, lineno, "expected key = value");
    if (val.empty()) fail(name, lineno, "missing value for '" + key + "'");
    if (!seen.insert(key).second) fail(name, lineno, "duplicate key '" + key + "'");

    auto real = [&] { return parse_real(name, lineno, key, val); };
    auto as_int = [&] {
      const long long x = parse_ll(name, lineno, key, val);
      if (x < -(1LL << 31) || x > (1LL << 31)) fail(name, lineno, "value out of range for '" + key + "'");
      return static_cast<int>(x);
    };

    if (key == "d") raw.d = as_int();
    else if (key == "n") raw.n = as_int();
    else if (key == "kappa") raw.kappa = real();
    else if (key == "eps") raw.eps = real();
    else if (key == "nu") raw.nu = real();
    else if (key == "q") raw.q = real();
    else if (key == "stress") {
      if (val != "newtonian" && val != "power_law" && val != "bingham" && val != "composite") {
        fail(name, lineno, "unknown stress model '" + val + "'");
      }
      raw.stress = val;
    } else if (key == "mu") raw.mu = real();
    else if (key == "p") raw.p = real();
    else if (key == "delta") raw.delta = real();
    else if (key == "mu0") raw.mu0 = real();
    else if (key == "mu1") raw.mu1 = real();
    else if (key == "gamma") raw.gamma = real();
    else if (key == "a_p") raw.a_p = real();
    else if (key == "rho_bar") raw.rho_bar = real();
    else if (key == "dt") raw.dt = real();
    else if (key == "t_end") raw.t_end = real();
    else if (key == "rho_min") raw.rho_min = real();
    else if (key == "output_every") raw.output_every = as_int();
    else if (key == "integrator") {
      if (val != "rk4" && val != "ssprk3") fail(name, lineno, "unknown integrator '" + val + "'");
      raw.integrator = val;
    } else if (key == "cfl_safety") raw.cfl_safety = real();
    else if (key == "profile") {
      if (val != "uniform" && val != "sine" && val != "bump") {
        fail(name, lineno, "unknown profile '" + val + "'");
      }
      raw.profile = val;
    } else if (key == "rho0") raw.rho0 = real();
    else if (key == "amp_rho") raw.amp_rho = real();
    else if (key == "amp_u") raw.amp_u = real();
    else if (key == "mode") raw.mode = as_int();
    else if (key == "width") raw.width = real();
    else if (key == "seed") raw.seed = parse_u64(name, lineno, key, val);
    else if (key == "outdir") raw.outdir = val;
    else if (key == "svg") raw.svg = parse_bool(name, lineno, key, val);
    else if (key == "refine") {
      raw.refine = as_int();
      if (raw.refine != 2 && raw.refine != 4) {
        fail(name, lineno, "constraint violated: refine in {2, 4}");
      }
    } else if (key == "version") raw.version = val;
    else fail(name, lineno, "unknown key '" + key + "'");
  }

  RunConfig rc;
  try {
    rc.sim.d = raw.d;
    rc.sim.n = raw.n;
    rc.sim.kappa = raw.kappa;
    rc.sim.eps = raw.eps;
    rc.sim.nu = raw.nu;
    rc.sim.q = raw.q;
    if (raw.stress == "newtonian") rc.sim.stress_model = StressModel::newtonian(raw.mu);
    else if (raw.stress == "power_law") rc.sim.stress_model = StressModel::power_law(raw.p);
    else if (raw.stress == "bingham") rc.sim.stress_model = StressModel::regularized_bingham(raw.delta);
    else rc.sim.stress_model = StressModel::composite(raw.mu0, raw.mu1, raw.delta);
    rc.sim.pressure_law = PressureLaw(raw.a_p, raw.gamma, raw.rho_bar);
    rc.sim.dt = raw.dt;
    rc.sim.t_end = raw.t_end;
    rc.sim.rho_min = raw.rho_min;
    rc.sim.output_every = raw.output_every;
    rc.sim.integrator = raw.integrator == "rk4" ? Integrator::RK4 : Integrator::SSPRK3;
    rc.sim.cfl_safety = raw.cfl_safety;
    rc.sim.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(name + ": " + e.what());
  }

  rc.init.profile = raw.profile;
  rc.init.rho0 = raw.rho0;
  rc.init.amp_rho = raw.amp_rho;
  rc.init.amp_u = raw.amp_u;
  rc.init.mode = raw.mode;
  rc.init.width = raw.width;
  rc.seed = raw.seed;
  rc.outdir = raw.outdir;
  rc.svg = raw.svg;
  rc.refine = raw.refine;
  rc.version = raw.version;
  return rc;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open config: " + path);
  std::ostringstream content;
  content << f.rdbuf();
  return parse_config_text(content.str(), path);
}

std::string manifest_text(const RunConfig& rc) {
  std::string out;
  out += "# run manifest; feed back through `run` to reproduce\n";
  fmt_int(out, "d", rc.sim.d);
  fmt_int(out, "n", rc.sim.n);
  fmt_real(out, "kappa", rc.sim.kappa);
  fmt_real(out, "eps", rc.sim.eps);
  fmt_real(out, "nu", rc.sim.nu);
  fmt_real(out, "q", rc.sim.q);
  const StressModel& sm = rc.sim.stress_model;
  switch (sm.kind) {
    case StressKind::Newtonian: out += "stress = newtonian\n"; break;
    case StressKind::PowerLaw: out += "stress = power_law\n"; break;
    case StressKind::RegularizedBingham: out += "stress = bingham\n"; break;
    case StressKind::Composite: out += "stress = composite\n"; break;
  }
  fmt_real(out, "mu", sm.mu);
  fmt_real(out, "p", sm.p);
  fmt_real(out, "delta", sm.delta);
  fmt_real(out, "mu0", sm.mu0);
  fmt_real(out, "mu1", sm.mu1);
  fmt_real(out, "gamma", rc.sim.pressure_law.gamma);
  fmt_real(out, "a_p", rc.sim.pressure_law.a_p);
  fmt_real(out, "rho_bar", rc.sim.pressure_law.rho_bar);
  fmt_real(out, "dt", rc.sim.dt);
  fmt_real(out, "t_end", rc.sim.t_end);
  fmt_real(out, "rho_min", rc.sim.rho_min);
  fmt_int(out, "output_every", rc.sim.output_every);
  out += rc.sim.integrator == Integrator::RK4 ? "integrator = rk4\n" : "integrator = ssprk3\n";
  fmt_real(out, "cfl_safety", rc.sim.cfl_safety);
  out += "profile = " + rc.init.profile + "\n";
  fmt_real(out, "rho0", rc.init.rho0);
  fmt_real(out, "amp_rho", rc.init.amp_rho);
  fmt_real(out, "amp_u", rc.init.amp_u);
  fmt_int(out, "mode", rc.init.mode);
  fmt_real(out, "width", rc.init.width);
  char buf[64];
  std::snprintf(buf, sizeof buf, "seed = %" PRIu64 "\n", rc.seed);
  out += buf;
  out += "outdir = " + rc.outdir + "\n";
  out += rc.svg ? "svg = true\n" : "svg = false\n";
  fmt_int(out, "refine", rc.refine);
  out += "version = " + rc.version + "\n";
  return out;
}

}  // namespace nskw
