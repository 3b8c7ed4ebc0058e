#include "nskw/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nskw/korteweg.hpp"

namespace nskw {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

ScalarField project(const ScalarField& f) { return f.grid.dealias ? dealias(f) : f; }

}  // namespace

VectorField velocity(const SimConfig& cfg, const State& s) {
  VectorField u(s.rho.grid);
  for (int c = 0; c < s.rho.grid.d; ++c) {
    u[c] = project(pointwise(s.m[c], s.rho, [&](double mi, double r) {
      return mi / std::max(r, cfg.rho_min);
    }));
  }
  return u;
}

void SimConfig::validate() const {
  if (d != 1 && d != 2) throw std::invalid_argument("constraint violated: d in {1, 2}");
  if (n < 8 || !power_of_two(n)) {
    throw std::invalid_argument("constraint violated: n a power of two, n >= 8");
  }
  if (kappa < 0.0) throw std::invalid_argument("constraint violated: kappa >= 0");
  if (eps < 0.0) throw std::invalid_argument("constraint violated: eps >= 0");
  if (nu < 0.0) throw std::invalid_argument("constraint violated: nu >= 0");
  if (nu > 0.0) {
    const double p = stress_model.growth_exponent();
    if (!(q > std::max(3.0, 1.5 * p))) {
      throw std::invalid_argument("constraint violated: q > max(3, 3p/2) when nu > 0");
    }
  }
  if (!(dt > 0.0)) throw std::invalid_argument("constraint violated: dt > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("constraint violated: t_end >= 0");
  const double steps = t_end / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
    throw std::invalid_argument("constraint violated: t_end a multiple of dt");
  }
  if (!(rho_min > 0.0)) throw std::invalid_argument("constraint violated: rho_min > 0");
  if (output_every < 1) throw std::invalid_argument("constraint violated: output_every >= 1");
  if (!(cfl_safety > 0.0)) throw std::invalid_argument("constraint violated: cfl_safety > 0");
}

State make_initial(const Grid& g, const InitSpec& init) {
  if (init.rho0 <= 0.0) throw std::invalid_argument("constraint violated: rho0 > 0");
  State s(g);
  const double twopi = 2.0 * M_PI;
  const int mode = init.mode;

  if (init.profile == "uniform") {
    s.rho = ScalarField(g, init.rho0);
  } else if (init.profile == "sine") {
    if (g.d == 1) {
      s.rho = sample(g, [&](double x) { return init.rho0 + init.amp_rho * std::sin(twopi * mode * x); });
      auto u = sample(g, [&](double x) { return init.amp_u * std::sin(twopi * mode * x); });
      s.m[0] = pointwise(s.rho, u, [](double r, double v) { return r * v; });
    } else {
      s.rho = sample(g, [&](double x, double y) {
        return init.rho0 + init.amp_rho * std::sin(twopi * mode * x) * std::sin(twopi * mode * y);
      });
      auto ux = sample(g, [&](double, double y) { return init.amp_u * std::sin(twopi * mode * y); });
      auto uy = sample(g, [&](double x, double) { return init.amp_u * std::sin(twopi * mode * x); });
      s.m[0] = pointwise(s.rho, ux, [](double r, double v) { return r * v; });
      s.m[1] = pointwise(s.rho, uy, [](double r, double v) { return r * v; });
    }
  } else if (init.profile == "bump") {
    const double w = init.width;
    if (g.d == 1) {
      s.rho = sample(g, [&](double x) {
        return init.rho0 + init.amp_rho * std::exp((std::cos(twopi * x) - 1.0) / (w * w));
      });
    } else {
      s.rho = sample(g, [&](double x, double y) {
        return init.rho0 + init.amp_rho *
               std::exp((std::cos(twopi * x) + std::cos(twopi * y) - 2.0) / (w * w));
      });
    }
  } else {
    throw std::invalid_argument("unknown initial profile '" + init.profile + "'");
  }

  if (min_value(s.rho) <= 0.0) throw std::invalid_argument("constraint violated: initial density positive");
  return s;
}

ScalarField continuity_rhs(const SimConfig& cfg, const State& s) {
  ScalarField rhs = -1.0 * divergence(s.m);
  if (cfg.eps > 0.0) rhs = rhs + cfg.eps * laplacian(s.rho);
  return rhs;
}

VectorField momentum_rhs(const SimConfig& cfg, const State& s) {
  const Grid& g = s.rho.grid;
  const int d = g.d;

  VectorField u = velocity(cfg, s);
  TensorField Du = sym_gradient(u);

  // -div(rho u (x) u), assembled as m_i u_j so only one quotient is needed
  TensorField conv(g);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) conv.entry(i, j) = product(s.m[i], u[j]);
  VectorField rhs = tensor_divergence(conv);
  for (int i = 0; i < d; ++i) rhs[i] = -1.0 * rhs[i];

  // + div(rho S(Du))
  TensorField S = stress(cfg.stress_model, Du);
  TensorField rhoS(g, /*symmetric=*/true);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rhoS.entry(i, j) = product(s.rho, S.entry(i, j));
  VectorField visc = tensor_divergence(rhoS);
  for (int i = 0; i < d; ++i) rhs[i] = rhs[i] + visc[i];

  // - grad p(rho)
  ScalarField p = project(pressure(cfg.pressure_law, s.rho));
  VectorField gp = gradient(p);
  for (int i = 0; i < d; ++i) rhs[i] = rhs[i] - gp[i];

  // + kappa 2 rho grad(lap(sqrt rho)/sqrt rho)
  if (cfg.kappa != 0.0) {
    VectorField kw = korteweg_div_form_b(DensityProfile(s.rho, cfg.rho_min));
    for (int i = 0; i < d; ++i) rhs[i] = rhs[i] + cfg.kappa * kw[i];
  }

  // - eps (grad rho . grad) u, componentwise sum_j d_j(rho) d_j(u_i)
  if (cfg.eps > 0.0) {
    VectorField grho = gradient(s.rho);
    TensorField gu = grad_vector(u);
    for (int i = 0; i < d; ++i) {
      ScalarField acc(g);
      for (int j = 0; j < d; ++j) acc = acc + product(grho[j], gu.entry(i, j));
      rhs[i] = rhs[i] - cfg.eps * acc;
    }
  }

  // + nu div(|Du|^{q-2} Du)
  if (cfg.nu > 0.0) {
    TensorField W(g, /*symmetric=*/true);
    const double expo = cfg.q - 2.0;
    const int total = g.size();
    for (int idx = 0; idx < total; ++idx) {
      double norm2 = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const double v = Du.entry(i, j).values[static_cast<size_t>(idx)];
          norm2 += v * v;
        }
      const double w = norm2 == 0.0 ? 0.0 : std::pow(norm2, 0.5 * expo);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          W.entry(i, j).values[static_cast<size_t>(idx)] =
              w * Du.entry(i, j).values[static_cast<size_t>(idx)];
        }
    }
    VectorField reg = tensor_divergence(g.dealias ? dealias(W) : W);
    for (int i = 0; i < d; ++i) rhs[i] = rhs[i] + cfg.nu * reg[i];
  }

  return rhs;
}

namespace {

struct Deriv {
  ScalarField drho;
  VectorField dm;
};

Deriv eval_rhs(const SimConfig& cfg, const State& s) {
  return {continuity_rhs(cfg, s), momentum_rhs(cfg, s)};
}

State lincomb(const State& base, double a, const State& x, double b, const Deriv& k) {
  // base ignored except for grid/t bookkeeping convenience; result = a*x + b*k
  State out(x.rho.grid);
  for (size_t i = 0; i < out.rho.values.size(); ++i) {
    out.rho.values[i] = a * x.rho.values[i] + b * k.drho.values[i];
  }
  for (int c = 0; c < x.rho.grid.d; ++c) {
    for (size_t i = 0; i < out.rho.values.size(); ++i) {
      out.m[c].values[i] = a * x.m[c].values[i] + b * k.dm[c].values[i];
    }
  }
  out.t = base.t;
  return out;
}

State blend(const State& x, double a, const State& y, double b) {
  State out(x.rho.grid);
  for (size_t i = 0; i < out.rho.values.size(); ++i) {
    out.rho.values[i] = a * x.rho.values[i] + b * y.rho.values[i];
  }
  for (int c = 0; c < x.rho.grid.d; ++c) {
    for (size_t i = 0; i < out.rho.values.size(); ++i) {
      out.m[c].values[i] = a * x.m[c].values[i] + b * y.m[c].values[i];
    }
  }
  out.t = x.t;
  return out;
}

void check_step(State& s) {
  double worst = 0.0;
  for (double v : s.rho.values) {
    if (!std::isfinite(v)) throw std::runtime_error("step rejected: non-finite density");
    if (std::abs(v) > 1e12) throw std::runtime_error("blow-up detected");
    worst = std::min(worst, v);
  }
  if (worst < -1e-12) throw std::runtime_error("step rejected: negative density");
  if (worst < 0.0) {
    for (double& v : s.rho.values) {
      if (v < 0.0) v = 0.0;
    }
  }
  for (int c = 0; c < s.rho.grid.d; ++c) {
    for (double v : s.m[c].values) {
      if (!std::isfinite(v)) throw std::runtime_error("step rejected: non-finite momentum");
      if (std::abs(v) > 1e12) throw std::runtime_error("blow-up detected");
    }
  }
}

}  // namespace

State step(const SimConfig& cfg, const State& s, double dt) {
  State out(s.rho.grid);

  if (cfg.integrator == Integrator::RK4) {
    const Deriv k1 = eval_rhs(cfg, s);
    const Deriv k2 = eval_rhs(cfg, lincomb(s, 1.0, s, 0.5 * dt, k1));
    const Deriv k3 = eval_rhs(cfg, lincomb(s, 1.0, s, 0.5 * dt, k2));
    const Deriv k4 = eval_rhs(cfg, lincomb(s, 1.0, s, dt, k3));
    out = s;
    const double w = dt / 6.0;
    for (size_t i = 0; i < out.rho.values.size(); ++i) {
      out.rho.values[i] += w * (k1.drho.values[i] + 2.0 * k2.drho.values[i] +
                                2.0 * k3.drho.values[i] + k4.drho.values[i]);
    }
    for (int c = 0; c < s.rho.grid.d; ++c) {
      for (size_t i = 0; i < out.rho.values.size(); ++i) {
        out.m[c].values[i] += w * (k1.dm[c].values[i] + 2.0 * k2.dm[c].values[i] +
                                   2.0 * k3.dm[c].values[i] + k4.dm[c].values[i]);
      }
    }
  } else {
    // Shu-Osher SSPRK3
    const Deriv k1 = eval_rhs(cfg, s);
    State u1 = lincomb(s, 1.0, s, dt, k1);
    const Deriv k2 = eval_rhs(cfg, u1);
    State u2 = blend(s, 0.75, lincomb(s, 1.0, u1, dt, k2), 0.25);
    const Deriv k3 = eval_rhs(cfg, u2);
    out = blend(s, 1.0 / 3.0, lincomb(s, 1.0, u2, dt, k3), 2.0 / 3.0);
  }

  out.t = s.t + dt;
  check_step(out);
  return out;
}

double cfl_limit(const SimConfig& cfg, const State& s) {
  const Grid& g = s.rho.grid;
  const double h = g.h();
  const double tiny = 1e-300;

  VectorField u = velocity(cfg, s);
  double umax = 0.0;
  for (int c = 0; c < g.d; ++c) umax = std::max(umax, max_abs(u[c]));
  const double cs = std::sqrt(cfg.pressure_law.pressure_prime(std::max(max_value(s.rho), cfg.rho_min)));
  double limit = h / (umax + cs + tiny);

  // effective kinematic viscosity from the stress at the initial shear scale
  TensorField Du = sym_gradient(u);
  double du_scale = 0.0;
  for (int i = 0; i < g.d; ++i)
    for (int j = 0; j < g.d; ++j) du_scale = std::max(du_scale, max_abs(Du.entry(i, j)));
  Mat A = Mat::identity(g.d);
  A *= std::max(du_scale, 1e-6);
  const double nu_eff = cfg.stress_model.stress(A).norm() / A.norm();
  limit = std::min(limit, h * h / (2.0 * g.d * nu_eff + tiny));
  if (cfg.eps > 0.0) limit = std::min(limit, h * h / (2.0 * g.d * cfg.eps));
  if (cfg.nu > 0.0) {
    const double nu_q = cfg.nu * std::pow(std::max(du_scale, 1e-6), cfg.q - 2.0);
    limit = std::min(limit, h * h / (2.0 * g.d * nu_q + tiny));
  }

  // dispersive capillarity: omega ~ sqrt(kappa/2) k^2 on the retained modes
  if (cfg.kappa > 0.0) {
    const double kmax = 2.0 * M_PI * (g.n / 3);
    limit = std::min(limit, 2.8 / (std::sqrt(0.5 * cfg.kappa) * kmax * kmax));
  }

  return cfg.cfl_safety * limit;
}

Trajectory run(const SimConfig& cfg, const State& initial) {
  cfg.validate();
  require_same_grid(cfg.grid(), initial.rho.grid);

  Trajectory traj;

  State s(initial.rho.grid);
  s.rho = dealias(initial.rho);
  for (int c = 0; c < cfg.d; ++c) s.m[c] = dealias(initial.m[c]);
  s.t = 0.0;

  traj.cfl_dt = cfl_limit(cfg, s);
  traj.cfl_ok = cfg.dt <= traj.cfl_dt;

  const double rho0_min = min_value(s.rho);
  traj.min_density = rho0_min;
  traj.density_lower_bound = rho0_min;
  traj.density_bound_ratio = 1.0;  // ratio at t = 0 by construction

  auto divu_max = [&](const State& st) {
    VectorField u = velocity(cfg, st);
    return max_abs(divergence(u));
  };

  double divu_prev = divu_max(s);
  double divu_integral = 0.0;
  double last_output_t = 0.0;

  traj.snapshots.push_back(s);
  traj.times.push_back(0.0);

  const long nsteps = std::lround(cfg.t_end / cfg.dt);
  traj.completed = true;
  traj.status = "completed";

  for (long k = 1; k <= nsteps; ++k) {
    try {
      s = step(cfg, s, cfg.dt);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << e.what() << " at t=" << (static_cast<double>(k) * cfg.dt);
      traj.status = os.str();
      traj.completed = false;
      break;
    }
    s.t = static_cast<double>(k) * cfg.dt;
    traj.min_density = std::min(traj.min_density, min_value(s.rho));

    if (k % cfg.output_every == 0 || k == nsteps) {
      const double divu_now = divu_max(s);
      divu_integral += 0.5 * (divu_prev + divu_now) * (s.t - last_output_t);
      divu_prev = divu_now;
      last_output_t = s.t;

      traj.snapshots.push_back(s);
      traj.times.push_back(s.t);

      const double bound = rho0_min * std::exp(-divu_integral);
      traj.density_lower_bound = bound;
      const double ratio = min_value(s.rho) / std::max(bound, 1e-300);
      traj.density_bound_ratio = std::min(traj.density_bound_ratio, ratio);
    }
  }

  return traj;
}

}  // namespace nskw
