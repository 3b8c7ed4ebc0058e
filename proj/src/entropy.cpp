#include "nskw/entropy.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "nskw/korteweg.hpp"

namespace nskw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ScalarField project(const ScalarField& f) { return f.grid.dealias ? dealias(f) : f; }

ScalarField floored_log(const ScalarField& rho, double rho_min) {
  return project(pointwise(rho, [&](double v) { return std::log(std::max(v, rho_min)); }));
}

TensorField hess_log(const ScalarField& rho, double rho_min) {
  return hessian(floored_log(rho, rho_min));
}

// Second-order difference of extract(j) at slice k: centered inside the
// series, one-sided at the two ends. Assembled from slice differences so a
// time-independent sequence yields an exact zero.
ScalarField time_derivative(const std::function<ScalarField(int)>& extract, int k, int n,
                            double dt) {
  if (n < 3) throw std::invalid_argument("reference series too short for time derivatives");
  if (k == 0) {
    ScalarField f0 = extract(0);
    return (0.5 / dt) * (4.0 * (extract(1) - f0) - (extract(2) - f0));
  }
  if (k == n - 1) {
    ScalarField fn = extract(n - 1);
    return (0.5 / dt) * (4.0 * (fn - extract(n - 2)) - (fn - extract(n - 3)));
  }
  return (0.5 / dt) * (extract(k + 1) - extract(k - 1));
}

double frobenius_sq(const TensorField& A, int idx) {
  double s = 0.0;
  for (int i = 0; i < A.grid.d; ++i)
    for (int j = 0; j < A.grid.d; ++j) {
      const double v = A.entry(i, j).values[static_cast<size_t>(idx)];
      s += v * v;
    }
  return s;
}

void check_alignment(const std::vector<State>& states, const ReferenceSeries& ref) {
  if (states.size() != ref.slices.size()) {
    throw std::invalid_argument("reference series misaligned: slice counts differ");
  }
  if (states.empty()) throw std::invalid_argument("empty state series");
  require_same_grid(states.front().rho.grid, ref.slices.front().r.grid);
  for (size_t k = 0; k < states.size(); ++k) {
    if (std::abs(states[k].t - ref.times[k]) > 1e-12 * (1.0 + std::abs(ref.times[k]))) {
      throw std::invalid_argument("reference series misaligned: times differ");
    }
  }
}

// Cumulative trapezoid of a rate sampled on `times`.
std::vector<double> cumulative_trapezoid(const std::vector<double>& rate,
                                         const std::vector<double>& times) {
  std::vector<double> out(rate.size(), 0.0);
  for (size_t k = 1; k < rate.size(); ++k) {
    out[k] = out[k - 1] + 0.5 * (rate[k - 1] + rate[k]) * (times[k] - times[k - 1]);
  }
  return out;
}

}  // namespace

double ReferenceSeries::dt() const {
  if (times.size() < 2) throw std::invalid_argument("reference series too short");
  const double step = times[1] - times[0];
  for (size_t k = 1; k + 1 < times.size(); ++k) {
    if (std::abs(times[k + 1] - times[k] - step) > 1e-12 * (1.0 + std::abs(step))) {
      throw std::invalid_argument("reference series times not uniform");
    }
  }
  return step;
}

ReferenceBounds reference_bounds(const StressModel& S, const ReferenceSeries& ref) {
  if (ref.slices.empty()) throw std::invalid_argument("empty reference series");
  ReferenceBounds b;
  b.r_min = std::numeric_limits<double>::infinity();
  for (const ReferencePair& slice : ref.slices) {
    b.r_min = std::min(b.r_min, min_value(slice.r));
    b.r_max = std::max(b.r_max, max_value(slice.r));
    TensorField gv = grad_vector(slice.v);
    TensorField Dv = sym_gradient(slice.v);
    TensorField Sv = stress(S, Dv);
    b.divv_max = std::max(b.divv_max, max_abs(divergence(slice.v)));
    const int total = slice.r.grid.size();
    for (int idx = 0; idx < total; ++idx) {
      b.gradv_max = std::max(b.gradv_max, std::sqrt(frobenius_sq(gv, idx)));
      b.Sv_max = std::max(b.Sv_max, std::sqrt(frobenius_sq(Sv, idx)));
    }
  }
  return b;
}

VectorField grad_log(const ScalarField& rho, double rho_min) {
  const double sfloor = std::sqrt(rho_min);
  ScalarField s = project(pointwise(rho, [&](double v) {
    return std::sqrt(std::max(v, rho_min));
  }));
  VectorField g = gradient(s);
  for (int c = 0; c < rho.grid.d; ++c) {
    g[c] = pointwise(g[c], s, [&](double gs, double sv) {
      return 2.0 * gs / std::max(sv, sfloor);
    });
  }
  return g;
}

double energy(const SimConfig& cfg, const State& s) {
  const Grid& g = s.rho.grid;

  ScalarField kinetic(g);
  for (int c = 0; c < g.d; ++c) {
    kinetic = kinetic + pointwise(s.m[c], s.rho, [&](double mi, double r) {
      return 0.5 * mi * mi / std::max(r, cfg.rho_min);
    });
  }
  double E = integrate(kinetic);

  if (cfg.kappa != 0.0) {
    ScalarField sq = project(pointwise(s.rho, [&](double v) {
      return std::sqrt(std::max(v, cfg.rho_min));
    }));
    VectorField gs = gradient(sq);
    ScalarField cap(g);
    for (int c = 0; c < g.d; ++c) {
      cap = cap + pointwise(gs[c], [](double v) { return v * v; });
    }
    E += 2.0 * cfg.kappa * integrate(cap);
  }

  E += integrate(entropy_H(cfg.pressure_law, s.rho));
  return E;
}

DissipationRates dissipation_rates(const SimConfig& cfg, const State& s) {
  const Grid& g = s.rho.grid;
  DissipationRates out;

  VectorField u = velocity(cfg, s);
  TensorField Du = sym_gradient(u);

  ScalarField sd = stress_dissipation(cfg.stress_model, Du);
  out.S = integrate(pointwise(s.rho, sd, [](double r, double v) { return r * v; }));

  if (cfg.nu > 0.0) {
    ScalarField dq(g);
    const int total = g.size();
    for (int idx = 0; idx < total; ++idx) {
      dq.values[static_cast<size_t>(idx)] =
          std::pow(frobenius_sq(Du, idx), 0.5 * cfg.q);
    }
    out.nu = cfg.nu * integrate(dq);
  }

  if (cfg.eps > 0.0) {
    if (cfg.kappa != 0.0) {
      TensorField HL = hess_log(s.rho, cfg.rho_min);
      ScalarField hn(g);
      const int total = g.size();
      for (int idx = 0; idx < total; ++idx) {
        hn.values[static_cast<size_t>(idx)] =
            s.rho.values[static_cast<size_t>(idx)] * frobenius_sq(HL, idx);
      }
      out.kw = cfg.kappa * cfg.eps * integrate(hn);
    }

    VectorField gr = gradient(s.rho);
    ScalarField gp(g);
    for (int c = 0; c < g.d; ++c) {
      gp = gp + pointwise(gr[c], [](double v) { return v * v; });
    }
    ScalarField hpp = pointwise(s.rho, [&](double v) {
      return cfg.pressure_law.entropy_second(std::max(v, cfg.rho_min));
    });
    out.p = cfg.eps * integrate(pointwise(hpp, gp, [](double a, double b) { return a * b; }));
  }

  return out;
}

EnergyBudget energy_budget(const SimConfig& cfg, const Trajectory& traj) {
  EnergyBudget out;
  std::vector<double> rate;
  for (const State& s : traj.snapshots) {
    out.energy.push_back(energy(cfg, s));
    rate.push_back(dissipation_rates(cfg, s).total());
  }
  out.dissipated = cumulative_trapezoid(rate, traj.times);
  const double E0 = out.energy.empty() ? 0.0 : out.energy.front();
  for (size_t k = 0; k < out.energy.size(); ++k) {
    out.residual.push_back(out.energy[k] + out.dissipated[k] - E0);
    out.worst_residual = std::max(out.worst_residual, std::abs(out.residual[k]));
  }
  return out;
}

double relative_entropy(const SimConfig& cfg, const State& s, const ReferencePair& ref) {
  const Grid& g = s.rho.grid;
  require_same_grid(g, ref.r.grid);

  VectorField u = velocity(cfg, s);
  ScalarField quad(g);
  for (int c = 0; c < g.d; ++c) {
    ScalarField du = u[c] + -1.0 * ref.v[c];
    quad = quad + pointwise(du, s.rho, [](double dv, double r) { return 0.5 * r * dv * dv; });
  }
  double E = integrate(quad);

  if (cfg.kappa != 0.0) {
    VectorField glr = grad_log(s.rho, cfg.rho_min);
    VectorField glref = grad_log(ref.r, cfg.rho_min);
    ScalarField cap(g);
    for (int c = 0; c < g.d; ++c) {
      ScalarField dg = glr[c] + -1.0 * glref[c];
      cap = cap + pointwise(dg, s.rho, [](double dv, double r) { return r * dv * dv; });
    }
    E += 0.5 * cfg.kappa * integrate(cap);
  }

  E += integrate(entropy_H_relative(cfg.pressure_law, s.rho, ref.r));
  return E;
}

VectorField residual_A1(const SimConfig& cfg, const ReferenceSeries& ref, int k) {
  const ReferencePair& slice = ref.slices[static_cast<size_t>(k)];
  const Grid& g = slice.r.grid;
  const int d = g.d;
  const double step = ref.dt();

  VectorField out(g);
  for (int c = 0; c < d; ++c) {
    out[c] = time_derivative(
        [&](int j) { return ref.slices[static_cast<size_t>(j)].v[c]; }, k, ref.size(), step);
  }

  // (v.grad) v
  TensorField gv = grad_vector(slice.v);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      out[i] = out[i] + pointwise(slice.v[j], gv.entry(i, j),
                                  [](double a, double b) { return a * b; });
    }
  }

  // grad H'(r)
  VectorField gh = gradient(project(entropy_H_prime(cfg.pressure_law, slice.r)));
  for (int i = 0; i < d; ++i) out[i] = out[i] + gh[i];

  // -div(r S(Dv)) / r
  TensorField S = stress(cfg.stress_model, sym_gradient(slice.v));
  TensorField rS(g, /*symmetric=*/true);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rS.entry(i, j) = product(slice.r, S.entry(i, j));
  VectorField visc = tensor_divergence(rS);
  for (int i = 0; i < d; ++i) {
    out[i] = out[i] + pointwise(visc[i], slice.r, [&](double a, double r) {
      return -a / std::max(r, cfg.rho_min);
    });
  }

  // -kappa div(r hess ln r) / r
  if (cfg.kappa != 0.0) {
    VectorField kw = korteweg_div_form_b(DensityProfile(slice.r, cfg.rho_min));
    for (int i = 0; i < d; ++i) {
      out[i] = out[i] + pointwise(kw[i], slice.r, [&](double a, double r) {
        return -cfg.kappa * a / std::max(r, cfg.rho_min);
      });
    }
  }

  return out;
}

VectorField residual_A2(const ReferenceSeries& ref, int k, double rho_min) {
  const ReferencePair& slice = ref.slices[static_cast<size_t>(k)];
  const Grid& g = slice.r.grid;
  const int d = g.d;
  const double step = ref.dt();

  VectorField out(g);
  for (int c = 0; c < d; ++c) {
    out[c] = time_derivative(
        [&](int j) { return grad_log(ref.slices[static_cast<size_t>(j)].r, rho_min)[c]; }, k,
        ref.size(), step);
  }

  // (v.grad) grad ln r
  VectorField gl = grad_log(slice.r, rho_min);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      ScalarField dgl = derivative(gl[i], j);
      out[i] = out[i] + pointwise(slice.v[j], dgl, [](double a, double b) { return a * b; });
    }
  }

  // div(r (grad v)^T) / r, entry (i,j) of (grad v)^T being d_i v_j
  TensorField gv = grad_vector(slice.v);
  TensorField rgvT(g);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rgvT.entry(i, j) = product(slice.r, gv.entry(j, i));
  VectorField divT = tensor_divergence(rgvT);
  for (int i = 0; i < d; ++i) {
    out[i] = out[i] + pointwise(divT[i], slice.r, [&](double a, double r) {
      return a / std::max(r, rho_min);
    });
  }

  return out;
}

ScalarField residual_A3(const PressureLaw& law, const ReferenceSeries& ref, int k,
                        double rho_min) {
  const ReferencePair& slice = ref.slices[static_cast<size_t>(k)];
  const Grid& g = slice.r.grid;
  const double step = ref.dt();

  ScalarField out = time_derivative(
      [&](int j) { return entropy_H_prime(law, ref.slices[static_cast<size_t>(j)].r); }, k,
      ref.size(), step);

  ScalarField hp = entropy_H_prime(law, slice.r);
  for (int j = 0; j < g.d; ++j) {
    ScalarField dhp = derivative(hp, j);
    out = out + pointwise(slice.v[j], dhp, [](double a, double b) { return a * b; });
  }

  ScalarField pp = pointwise(slice.r, [&](double r) {
    return law.pressure_prime(std::max(r, rho_min));
  });
  out = out + pointwise(pp, divergence(slice.v), [](double a, double b) { return a * b; });
  return out;
}

ErrorSeries error_b(const SimConfig& cfg, const std::vector<State>& states,
                    const ReferenceSeries& ref) {
  check_alignment(states, ref);
  ErrorSeries out;

  for (int k = 0; k < ref.size(); ++k) {
    const State& s = states[static_cast<size_t>(k)];
    const ReferencePair& slice = ref.slices[static_cast<size_t>(k)];
    const Grid& g = s.rho.grid;

    VectorField A1 = residual_A1(cfg, ref, k);
    VectorField u = velocity(cfg, s);
    ScalarField acc(g);
    for (int c = 0; c < g.d; ++c) {
      ScalarField du = u[c] + -1.0 * slice.v[c];
      acc = acc + pointwise(du, A1[c], [](double a, double b) { return a * b; });
    }
    double rate = -integrate(pointwise(s.rho, acc, [](double r, double v) { return r * v; }));

    if (cfg.kappa != 0.0) {
      VectorField A2 = residual_A2(ref, k, cfg.rho_min);
      VectorField glr = grad_log(s.rho, cfg.rho_min);
      VectorField glref = grad_log(slice.r, cfg.rho_min);
      ScalarField acc2(g);
      for (int c = 0; c < g.d; ++c) {
        ScalarField dg = glr[c] + -1.0 * glref[c];
        acc2 = acc2 + pointwise(dg, A2[c], [](double a, double b) { return a * b; });
      }
      rate -= cfg.kappa *
              integrate(pointwise(s.rho, acc2, [](double r, double v) { return r * v; }));
    }

    ScalarField A3 = residual_A3(cfg.pressure_law, ref, k, cfg.rho_min);
    ScalarField drho = s.rho + -1.0 * slice.r;
    rate -= integrate(pointwise(drho, A3, [](double a, double b) { return a * b; }));

    out.integrand.push_back(rate);
  }

  out.cumulative = cumulative_trapezoid(out.integrand, ref.times);
  return out;
}

ErrorSeries error_b_app(const SimConfig& cfg, const std::vector<State>& states,
                        const ReferenceSeries& ref) {
  check_alignment(states, ref);
  ErrorSeries out;

  for (int k = 0; k < ref.size(); ++k) {
    const State& s = states[static_cast<size_t>(k)];
    const ReferencePair& slice = ref.slices[static_cast<size_t>(k)];
    const Grid& g = s.rho.grid;
    const int d = g.d;
    const int total = g.size();

    VectorField u = velocity(cfg, s);
    double rate = 0.0;

    if (cfg.nu > 0.0) {
      TensorField Du = sym_gradient(u);
      TensorField Dv = sym_gradient(slice.v);
      ScalarField f(g);
      for (int idx = 0; idx < total; ++idx) {
        const double n2 = frobenius_sq(Du, idx);
        const double w = n2 == 0.0 ? 0.0 : std::pow(n2, 0.5 * (cfg.q - 2.0));
        double dot = 0.0;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            dot += Du.entry(i, j).values[static_cast<size_t>(idx)] *
                   Dv.entry(i, j).values[static_cast<size_t>(idx)];
          }
        f.values[static_cast<size_t>(idx)] = w * dot;
      }
      rate += cfg.nu * integrate(f);
    }

    if (cfg.eps > 0.0) {
      VectorField grho = gradient(s.rho);

      if (cfg.kappa != 0.0) {
        TensorField Hrho = hess_log(s.rho, cfg.rho_min);
        TensorField Href = hess_log(slice.r, cfg.rho_min);
        VectorField glr = grad_log(s.rho, cfg.rho_min);
        VectorField glref = grad_log(slice.r, cfg.rho_min);

        ScalarField f(g);
        for (int idx = 0; idx < total; ++idx) {
          const size_t ix = static_cast<size_t>(idx);
          double hh = 0.0;   // hess(ln rho) : hess(ln r)
          double gHg = 0.0;  // (grad ln rho - grad ln r) . hess(ln r) grad ln rho
          for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
              hh += Hrho.entry(i, j).values[ix] * Href.entry(i, j).values[ix];
              gHg += (glr[i].values[ix] - glref[i].values[ix]) *
                     Href.entry(i, j).values[ix] * glr[j].values[ix];
            }
          }
          f.values[ix] = s.rho.values[ix] * (hh + gHg);
        }
        rate += cfg.kappa * cfg.eps * integrate(f);
      }

      // eps int v . [(grad rho . grad)(u - v)]
      ScalarField f(g);
      for (int i = 0; i < d; ++i) {
        ScalarField dui = u[i] + -1.0 * slice.v[i];
        for (int j = 0; j < d; ++j) {
          ScalarField dj = derivative(dui, j);
          ScalarField term = pointwise(grho[j], dj, [](double a, double b) { return a * b; });
          f = f + pointwise(slice.v[i], term, [](double a, double b) { return a * b; });
        }
      }
      rate += cfg.eps * integrate(f);

      // eps int grad rho . grad H'(r)
      VectorField gh = gradient(project(entropy_H_prime(cfg.pressure_law, slice.r)));
      ScalarField f2(g);
      for (int j = 0; j < d; ++j) {
        f2 = f2 + pointwise(grho[j], gh[j], [](double a, double b) { return a * b; });
      }
      rate += cfg.eps * integrate(f2);
    }

    out.integrand.push_back(rate);
  }

  out.cumulative = cumulative_trapezoid(out.integrand, ref.times);
  return out;
}

double gronwall_constant(const SimConfig& cfg, const ReferenceSeries& ref) {
  ReferenceBounds b = reference_bounds(cfg.stress_model, ref);
  const double Cp = cfg.pressure_law.gamma - 1.0;
  return 0.5 * b.Sv_max + b.gradv_max + Cp * b.divv_max;
}

namespace {

// rhs of the inequality at each time for the given constant.
std::vector<double> gronwall_rhs_series(double E0, double C, const std::vector<double>& b_total,
                                        const std::vector<double>& times) {
  const size_t n = times.size();
  std::vector<double> rhs(n, 0.0);
  for (size_t k = 0; k < n; ++k) {
    const double t = times[k];
    double conv = 0.0;  // trapezoid of b(s) e^{C(t-s)} over s in [0, t]
    for (size_t j = 1; j <= k; ++j) {
      const double f0 = b_total[j - 1] * std::exp(C * (t - times[j - 1]));
      const double f1 = b_total[j] * std::exp(C * (t - times[j]));
      conv += 0.5 * (f0 + f1) * (times[j] - times[j - 1]);
    }
    rhs[k] = E0 * std::exp(C * t) + b_total[k] + C * conv;
  }
  return rhs;
}

}  // namespace

GronwallReport gronwall_check(const SimConfig& cfg, const std::vector<State>& states,
                              const ReferenceSeries& ref) {
  check_alignment(states, ref);
  GronwallReport rep;

  for (int k = 0; k < ref.size(); ++k) {
    rep.entropy.push_back(
        relative_entropy(cfg, states[static_cast<size_t>(k)], ref.slices[static_cast<size_t>(k)]));
  }

  rep.b = error_b(cfg, states, ref);
  rep.used_b_app = cfg.eps > 0.0 || cfg.nu > 0.0;
  std::vector<double> b_total = rep.b.cumulative;
  if (rep.used_b_app) {
    rep.b_app = error_b_app(cfg, states, ref);
    for (size_t k = 0; k < b_total.size(); ++k) b_total[k] += rep.b_app.cumulative[k];
  }

  rep.C = gronwall_constant(cfg, ref);
  const double E0 = rep.entropy.front();
  rep.tolerance = -1e-6 * (1.0 + E0);

  rep.rhs = gronwall_rhs_series(E0, rep.C, b_total, ref.times);
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < rep.rhs.size(); ++k) {
    rep.margin.push_back(rep.rhs[k] - rep.entropy[k]);
    rep.worst_margin = std::min(rep.worst_margin, rep.margin.back());
  }
  rep.pass = rep.worst_margin >= rep.tolerance;

  // sharpness scan: least constant on a uniform grid of [0, C] that passes
  rep.smallest_passing_C = rep.pass ? rep.C : kNaN;
  const int scan = 200;
  for (int i = 0; i <= scan && rep.pass; ++i) {
    const double Ci = rep.C * i / scan;
    std::vector<double> rhs = gronwall_rhs_series(E0, Ci, b_total, ref.times);
    double worst = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < rhs.size(); ++k) worst = std::min(worst, rhs[k] - rep.entropy[k]);
    if (worst >= rep.tolerance) {
      rep.smallest_passing_C = Ci;
      break;
    }
  }

  return rep;
}

std::vector<DiagnosticsRecord> diagnostics(const SimConfig& cfg, const Trajectory& traj) {
  std::vector<DiagnosticsRecord> out;
  for (size_t k = 0; k < traj.snapshots.size(); ++k) {
    const State& s = traj.snapshots[k];
    DiagnosticsRecord rec;
    rec.t = traj.times[k];
    rec.mass = integrate(s.rho);
    rec.energy = energy(cfg, s);
    DissipationRates d = dissipation_rates(cfg, s);
    rec.diss_S = d.S;
    rec.diss_nu = d.nu;
    rec.diss_kw = d.kw;
    rec.diss_p = d.p;
    rec.rel_entropy = kNaN;
    rec.gronwall_rhs = kNaN;
    rec.margin = kNaN;
    out.push_back(rec);
  }
  return out;
}

std::vector<DiagnosticsRecord> diagnostics(const SimConfig& cfg, const Trajectory& traj,
                                           const ReferenceSeries& ref) {
  std::vector<DiagnosticsRecord> out = diagnostics(cfg, traj);
  GronwallReport rep = gronwall_check(cfg, traj.snapshots, ref);
  for (size_t k = 0; k < out.size(); ++k) {
    out[k].rel_entropy = rep.entropy[k];
    out[k].gronwall_rhs = rep.rhs[k];
    out[k].margin = rep.margin[k];
  }
  return out;
}

}  // namespace nskw
