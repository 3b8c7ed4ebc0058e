#include "nskw/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <utility>

#include "nskw/entropy.hpp"
#include "nskw/korteweg.hpp"
#include "nskw/random_fields.hpp"
#include "parallel.hpp"

namespace nskw {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent stream per (suite line, sample index).
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t line, std::uint64_t i) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (line + 1) + mix64(i));
}

template <typename... Args>
std::string strf(const char* fmt, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

int argmin(const std::vector<double>& v) {
  int w = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[i] < v[w]) w = i;
  return w;
}

ScalarField floored_power(const ScalarField& f, double e, double floor) {
  return dealias(pointwise(f, [=](double v) { return std::pow(std::max(v, floor), e); }));
}

ScalarField multiply_raw(const ScalarField& a, const ScalarField& b) {
  return pointwise(a, b, [](double x, double y) { return x * y; });
}

ScalarField frobenius_sq(const TensorField& T) {
  ScalarField out(T.grid);
  for (const ScalarField& c : T.comp)
    for (size_t i = 0; i < out.values.size(); ++i)
      out.values[i] += c.values[i] * c.values[i];
  return out;
}

ScalarField magnitude_sq(const VectorField& u) {
  ScalarField out(u.grid);
  for (const ScalarField& c : u.comp)
    for (size_t i = 0; i < out.values.size(); ++i)
      out.values[i] += c.values[i] * c.values[i];
  return out;
}

double lq_norm(const ScalarField& f, double q) {
  return std::pow(integrate(pointwise(f, [=](double v) { return std::pow(std::fabs(v), q); })), 1.0 / q);
}

double lq_norm_sq_mag(const ScalarField& mag_sq, double q) {
  return std::pow(integrate(pointwise(mag_sq, [=](double v) { return std::pow(v, 0.5 * q); })), 1.0 / q);
}

struct PoincareParts {
  double lhs = 0.0;        // ||u_i||_q
  double mean_term = 0.0;  // |integral rho u_i| / ||rho||_1
  double grad_norm = 0.0;  // || |grad u_i| ||_q
};

PoincareParts poincare_parts(const ScalarField& rho, const ScalarField& ui, double q,
                             double l1) {
  PoincareParts parts;
  parts.lhs = lq_norm(ui, q);
  parts.mean_term = std::fabs(integrate(multiply_raw(rho, ui))) / l1;
  parts.grad_norm = lq_norm_sq_mag(magnitude_sq(gradient(ui)), q);
  return parts;
}

double pressure_relative(const PressureLaw& law, double rho, double r) {
  return law.pressure(rho) - law.pressure(r) - law.pressure_prime(r) * (rho - r);
}

}  // namespace

double cq_constant(double q) {
  if (!(q > 2.0)) throw std::invalid_argument("q must exceed 2");
  return std::min(0.5, std::pow(2.0, 2.0 - q));
}

double check_monotonicity_bound(double q, const Mat& A, const Mat& B) {
  if (A.d != B.d) throw std::invalid_argument("matrix dimension mismatch");
  const double cq = cq_constant(q);
  auto F = [&](const Mat& M) {
    const double n = M.norm();
    return n == 0.0 ? Mat::zero(M.d) : std::pow(n, q - 2.0) * M;
  };
  const Mat diff = A - B;
  return (F(A) - F(B)).dot(diff) - cq * std::pow(diff.norm(), q);
}

double poincare_margin(const ScalarField& rho, const VectorField& u, double q,
                       double C) {
  require_same_grid(rho.grid, u.grid);
  if (!(q > rho.grid.d)) throw std::invalid_argument("q must exceed the dimension");
  const double l1 = integrate(pointwise(rho, [](double v) { return std::fabs(v); }));
  if (!(integrate(rho) > 0.0)) throw std::invalid_argument("density must have positive mass");
  double worst = 0.0;
  for (int c = 0; c < u.grid.d; ++c) {
    PoincareParts parts = poincare_parts(rho, u[c], q, l1);
    const double margin = parts.mean_term + C * parts.grad_norm - parts.lhs;
    if (c == 0 || margin < worst) worst = margin;
  }
  return worst;
}

double poincare_calibrate(int d, double q, int samples, std::uint64_t seed, int n) {
  if (d != 1 && d != 2) throw std::invalid_argument("dimension must be 1 or 2");
  if (!(q > d)) throw std::invalid_argument("q must exceed the dimension");
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const Grid g(d, n);

  double best = 0.0;
  auto consider = [&](const ScalarField& rho, const VectorField& u) {
    const double l1 = integrate(pointwise(rho, [](double v) { return std::fabs(v); }));
    for (int c = 0; c < d; ++c) {
      PoincareParts parts = poincare_parts(rho, u[c], q, l1);
      if (parts.grad_norm < 1e-12) continue;
      best = std::max(best, (parts.lhs - parts.mean_term) / parts.grad_norm);
    }
  };

  for (int i = 0; i < samples; ++i) {
    const std::uint64_t s = sample_seed(seed, 20 + static_cast<std::uint64_t>(d), i);
    consider(random_positive(g, s, 0.2, 2.0), random_velocity(g, mix64(s), 1.0, 0.5));
  }

  // Deterministic near-extremal pairs so the calibrated C dominates the whole
  // distribution, not just the sampled batch. A density concentrated at a
  // zero of u kills the weighted mean, and among such shapes the one-signed
  // arch u = (1 - cos 2 pi x)^s maximizes ||u||_q / ||grad u||_q (peak near
  // s ~ 0.8; pure sines only reach 1/(2 pi)). Sines are kept for the
  // odd-symmetry regime.
  const ScalarField bump =
      d == 1 ? sample(g, [](double x) { return 0.01 + std::pow(0.5 + 0.5 * std::cos(2.0 * M_PI * x), 8.0); })
             : sample(g, [](double x, double) { return 0.01 + std::pow(0.5 + 0.5 * std::cos(2.0 * M_PI * x), 8.0); });
  for (double s : {0.55, 0.75, 0.9, 1.0, 1.5}) {
    VectorField u(g);
    for (int c = 0; c < d; ++c)
      u[c] = d == 1 ? sample(g, [s](double x) { return std::pow(1.0 - std::cos(2.0 * M_PI * x), s); })
                    : sample(g, [s](double x, double) { return std::pow(1.0 - std::cos(2.0 * M_PI * x), s); });
    consider(bump, u);
  }
  for (int k = 1; k <= 3; ++k) {
    VectorField u(g);
    for (int c = 0; c < d; ++c)
      u[c] = d == 1 ? sample(g, [k](double x) { return std::sin(2.0 * M_PI * k * x); })
                    : sample(g, [k](double x, double) { return std::sin(2.0 * M_PI * k * x); });
    consider(bump, u);
  }

  return 1.1 * best;
}

double pressure_bound_constant(const PressureLaw& law, double r_min, double r_max,
                               int rho_grid) {
  if (!(0.0 < r_min && r_min <= r_max)) throw std::invalid_argument("invalid density range");
  if (rho_grid < 2) throw std::invalid_argument("need at least two grid points");

  std::vector<double> rhos;
  rhos.reserve(static_cast<size_t>(rho_grid) + 1);
  rhos.push_back(0.0);
  const double lo = 1e-4 * std::min(r_min, 1.0);
  const double hi = 10.0 * r_max;
  for (int j = 0; j < rho_grid; ++j)
    rhos.push_back(lo * std::pow(hi / lo, static_cast<double>(j) / (rho_grid - 1)));

  const int nr = std::min(rho_grid, 201);
  double best = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = nr == 1 ? r_min
                             : r_min + (r_max - r_min) * static_cast<double>(i) / (nr - 1);
    // Diagonal limit of the ratio by l'Hopital, twice.
    best = std::max(best, r * law.pressure_second(r) / law.pressure_prime(r));
    for (double rho : rhos) {
      if (std::fabs(rho - r) < 1e-3 * r) continue;  // covered by the limit
      const double h = law.entropy_relative(rho, r);
      if (!(h > 0.0)) continue;
      best = std::max(best, std::fabs(pressure_relative(law, rho, r)) / h);
    }
  }
  return best;
}

JungelMargins jungel_margins(const ScalarField& rho, double rho_min) {
  DensityProfile prof(rho, rho_min);
  prof.check();
  const ScalarField log_rho =
      dealias(pointwise(rho, [=](double v) { return std::log(std::max(v, rho_min)); }));
  const double lhs = integrate(multiply_raw(rho, frobenius_sq(hessian(log_rho))));

  const ScalarField fourth = floored_power(rho, 0.25, rho_min);
  const ScalarField grad_sq = magnitude_sq(gradient(fourth));
  const double quartic = integrate(multiply_raw(grad_sq, grad_sq));

  const ScalarField root = floored_power(rho, 0.5, rho_min);
  const double hess_sq = integrate(frobenius_sq(hessian(root)));

  return {lhs - quartic / 8.0, lhs - hess_sq / 7.0};
}

double delta_rho_residual(const ScalarField& rho, double rho_min) {
  DensityProfile prof(rho, rho_min);
  prof.check();
  const ScalarField rp = dealias(rho);
  const ScalarField lap = laplacian(rp);
  const ScalarField root = floored_power(rp, 0.5, rho_min);
  const ScalarField fourth = floored_power(rp, 0.25, rho_min);
  const ScalarField lap_root = laplacian(root);
  const ScalarField grad_sq = magnitude_sq(gradient(fourth));

  ScalarField res(rho.grid);
  for (size_t i = 0; i < res.values.size(); ++i)
    res.values[i] = lap.values[i] -
                    (8.0 * root.values[i] * grad_sq.values[i] +
                     2.0 * root.values[i] * lap_root.values[i]);
  const double num = std::sqrt(integrate(multiply_raw(res, res)));
  const double den = std::sqrt(integrate(multiply_raw(lap, lap)));
  return den > 0.0 ? num / den : num;
}

double grad_identity_residual(const ScalarField& rho, double rho_min) {
  DensityProfile prof(rho, rho_min);
  prof.check();
  const ScalarField rp = dealias(rho);
  const ScalarField root = floored_power(rp, 0.5, rho_min);
  const ScalarField fourth = floored_power(rp, 0.25, rho_min);
  const ScalarField lap_root = laplacian(root);
  const VectorField grad_fourth = gradient(fourth);
  const ScalarField grad_sq = magnitude_sq(grad_fourth);

  ScalarField lhs_density(rho.grid);
  for (size_t i = 0; i < lhs_density.values.size(); ++i)
    lhs_density.values[i] =
        lap_root.values[i] * (4.0 * grad_sq.values[i] + lap_root.values[i]);
  const double lhs = integrate(lhs_density);

  const TensorField hess_root = hessian(root);
  double rhs = 0.0;
  for (int i = 0; i < rho.grid.d; ++i) {
    for (int j = 0; j < rho.grid.d; ++j) {
      const ScalarField& h = hess_root.entry(i, j);
      const ScalarField& gi = grad_fourth[i];
      const ScalarField& gj = grad_fourth[j];
      ScalarField m(rho.grid);
      for (size_t k = 0; k < m.values.size(); ++k)
        m.values[k] = h.values[k] - 4.0 * gi.values[k] * gj.values[k];
      rhs += integrate(multiply_raw(m, m));
    }
  }
  return std::fabs(lhs - rhs) / (1.0 + std::fabs(rhs));
}

double bohm_agreement_residual(const ScalarField& rho, double rho_min) {
  DensityProfile prof(rho, rho_min);
  const VectorField a = korteweg_div_form_a(prof);
  const VectorField b = korteweg_div_form_b(prof);
  const VectorField c = bohm_intermediate(prof);
  double scale = 0.0;
  double dev = 0.0;
  for (int i = 0; i < rho.grid.d; ++i) {
    scale = std::max(scale, max_abs(a[i]));
    dev = std::max({dev, max_abs(a[i] - b[i]), max_abs(a[i] - c[i])});
  }
  return dev / (1.0 + scale);
}

double energy_derivative_residual(const SimConfig& cfg, const State& s) {
  if (cfg.eps != 0.0 || cfg.nu != 0.0)
    throw std::invalid_argument("identity holds only for eps = nu = 0");

  const ScalarField k_rho = continuity_rhs(cfg, s);
  const VectorField k_m = momentum_rhs(cfg, s);
  double rhs_inf = max_abs(k_rho);
  for (int c = 0; c < cfg.d; ++c) rhs_inf = std::max(rhs_inf, max_abs(k_m[c]));

  double h = 1e-3 * (1.0 + max_abs(s.rho)) / (1.0 + rhs_inf);
  const double drho = max_abs(k_rho);
  if (drho > 0.0) h = std::min(h, 0.05 * min_value(s.rho) / drho);

  auto phi = [&](double t) {
    State p;
    p.rho = s.rho + t * k_rho;
    p.m = s.m;
    for (int c = 0; c < cfg.d; ++c) p.m[c] = s.m[c] + t * k_m[c];
    p.t = s.t;
    return energy(cfg, p);
  };

  const double deriv =
      (8.0 * (phi(h) - phi(-h)) - (phi(2.0 * h) - phi(-2.0 * h))) / (12.0 * h);
  const double target = -dissipation_rates(cfg, s).S;
  return std::fabs(deriv - target) / (1.0 + std::fabs(target));
}

namespace {

struct MonoSample {
  double q = 0.0;
  Mat A;
  Mat B;
};

MonoSample mono_sample(std::uint64_t seed, int i) {
  static constexpr double qs[4] = {2.5, 3.0, 4.0, 6.0};
  std::mt19937_64 rng(sample_seed(seed, 1, static_cast<std::uint64_t>(i)));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  MonoSample s;
  s.q = qs[i % 4];
  const int d = 1 + ((i / 4) % 2);
  // Unit-scale entries with log-uniform magnitude: the bound is q-homogeneous,
  // and keeping |A|, |B| <= 2 keeps raw round-off below the 1e-12 tolerance.
  const double sa = std::pow(10.0, -3.0 * u01(rng));
  const double sb = std::pow(10.0, -3.0 * u01(rng));
  s.A = Mat::zero(d);
  s.B = Mat::zero(d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) s.A(r, c) = sa * unit(rng);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) s.B(r, c) = sb * unit(rng);
  return s;
}

LemmaReport make_report(std::string id, int samples, std::uint64_t seed, double worst,
                        double tol, std::string witness) {
  LemmaReport rep;
  rep.id = std::move(id);
  rep.samples = samples;
  rep.seed = seed;
  rep.worst_margin = worst;
  rep.tolerance = tol;
  rep.witness = std::move(witness);
  rep.pass = worst >= -tol;
  return rep;
}

}  // namespace

std::vector<LemmaReport> lemma_suite(std::uint64_t seed, int samples) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  std::vector<LemmaReport> reports;

  {
    std::vector<double> margin(static_cast<size_t>(samples));
    detail::parallel_for(samples, [&](int i) {
      const MonoSample s = mono_sample(seed, i);
      margin[static_cast<size_t>(i)] = check_monotonicity_bound(s.q, s.A, s.B);
    });
    const int w = argmin(margin);
    const MonoSample s = mono_sample(seed, w);
    reports.push_back(make_report(
        "monotonicity_cq", samples, seed, margin[static_cast<size_t>(w)], 1e-12,
        strf("sample=%d q=%g d=%d |A-B|=%.3g", w, s.q, s.A.d, (s.A - s.B).norm())));
  }

  for (int d : {1, 2}) {
    const int n = d == 1 ? 64 : 32;
    const double q = 4.0;
    const int cal = std::max(1000, samples / 10);
    const double C = poincare_calibrate(d, q, cal, seed, n);
    const Grid g(d, n);
    std::vector<double> margin(static_cast<size_t>(samples));
    detail::parallel_for(samples, [&](int i) {
      const std::uint64_t s = sample_seed(seed, 2 + static_cast<std::uint64_t>(d),
                                          static_cast<std::uint64_t>(i));
      const ScalarField rho = random_positive(g, s, 0.2, 2.0);
      const VectorField u = random_velocity(g, mix64(s), 1.0, 0.5);
      margin[static_cast<size_t>(i)] = poincare_margin(rho, u, q, C);
    });
    const int w = argmin(margin);
    reports.push_back(make_report(
        d == 1 ? "poincare_d1" : "poincare_d2", samples, seed,
        margin[static_cast<size_t>(w)], 1e-9,
        strf("C=%.6g q=%g d=%d n=%d sample=%d", C, q, d, n, w)));
  }

  {
    const PressureLaw law(1.0, 1.4, 1.0);
    const double r_min = 0.5;
    const double r_max = 2.0;
    const double C = pressure_bound_constant(law, r_min, r_max, 256);
    auto draw = [&](int i) {
      std::mt19937_64 rng(sample_seed(seed, 5, static_cast<std::uint64_t>(i)));
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      const double r = r_min + (r_max - r_min) * u01(rng);
      const double pick = u01(rng);
      const double rho =
          pick < 0.05 ? 0.0
                      : std::exp(std::log(1e-4) +
                                 (std::log(10.0 * r_max) - std::log(1e-4)) * u01(rng));
      return std::pair<double, double>(rho, r);
    };
    std::vector<double> margin(static_cast<size_t>(samples));
    detail::parallel_for(samples, [&](int i) {
      const auto [rho, r] = draw(i);
      const double prel = std::fabs(pressure_relative(law, rho, r));
      margin[static_cast<size_t>(i)] =
          (C * law.entropy_relative(rho, r) - prel) / (1.0 + prel);
    });
    const int w = argmin(margin);
    const auto [rho_w, r_w] = draw(w);
    reports.push_back(make_report(
        "pressure_bound", samples, seed, margin[static_cast<size_t>(w)], 1e-9,
        strf("C=%.6g gamma=1.4 rho=%.6g r=%.6g sample=%d", C, rho_w, r_w, w)));
  }

  {
    std::vector<double> rel1(static_cast<size_t>(samples));
    std::vector<double> rel2(static_cast<size_t>(samples));
    detail::parallel_for(samples, [&](int i) {
      const int d = 1 + (i % 2);
      const Grid g(d, d == 1 ? 64 : 32);
      const ScalarField rho =
          random_positive(g, sample_seed(seed, 6, static_cast<std::uint64_t>(i)), 0.3, 3.0);
      const JungelMargins jm = jungel_margins(rho);
      rel1[static_cast<size_t>(i)] = jm.rel1;
      rel2[static_cast<size_t>(i)] = jm.rel2;
    });
    for (int which = 0; which < 2; ++which) {
      const std::vector<double>& margin = which == 0 ? rel1 : rel2;
      const int w = argmin(margin);
      reports.push_back(make_report(
          which == 0 ? "jungel_rel1" : "jungel_rel2", samples, seed,
          margin[static_cast<size_t>(w)], 1e-9,
          strf("d=%d n=%d range=[0.3,3] sample=%d", 1 + (w % 2),
               (w % 2) == 0 ? 64 : 32, w)));
    }
  }

  // Identity checks use a narrow band (kmax = 4) on fine grids so the root
  // and log spectra stay resolved; wider bands or coarser grids measure
  // truncation, not the identity. 1d draws put all their variance into four
  // modes and dip more sharply toward the range floor, so they need n = 256
  // where the smoother 2d draws get away with n = 128 (which costs ~40x more
  // per sample and therefore takes every eighth draw).
  auto identity_dim = [](int i) { return i % 8 == 7 ? 2 : 1; };
  auto identity_n = [](int d) { return d == 1 ? 256 : 128; };
  struct IdentityLine {
    const char* id;
    std::uint64_t line;
    double (*op)(const ScalarField&, double);
  };
  const IdentityLine identity_lines[] = {
      {"delta_rho", 7, delta_rho_residual},
      {"grad_identity", 8, grad_identity_residual},
      {"bohm_forms", 9, bohm_agreement_residual},
  };
  for (const IdentityLine& line : identity_lines) {
    std::vector<double> margin(static_cast<size_t>(samples));
    detail::parallel_for(samples, [&](int i) {
      const int d = identity_dim(i);
      const Grid g(d, identity_n(d));
      const ScalarField rho = random_positive(
          g, sample_seed(seed, line.line, static_cast<std::uint64_t>(i)), 0.5, 2.0, 4);
      margin[static_cast<size_t>(i)] = -line.op(rho, 1e-8);
    });
    const int w = argmin(margin);
    reports.push_back(make_report(
        line.id, samples, seed, margin[static_cast<size_t>(w)], 1e-7,
        strf("d=%d n=%d kmax=4 sample=%d", identity_dim(w), identity_n(identity_dim(w)), w)));
  }

  {
    // The conservative energy law is an identity of the same kind: the
    // velocity quotient m / rho has an unbounded spectrum, and its truncation
    // tail dominates the residual on coarse grids, so the 1d draws again run
    // one size finer than the 2d ones.
    std::vector<double> margin(static_cast<size_t>(samples));
    detail::parallel_for(samples, [&](int i) {
      const int d = identity_dim(i);
      SimConfig cfg;
      cfg.d = d;
      cfg.n = d == 1 ? 128 : 64;
      cfg.kappa = 1.0;
      cfg.eps = 0.0;
      cfg.nu = 0.0;
      cfg.stress_model = StressModel::newtonian(1.0);
      const Grid g = cfg.grid();
      const std::uint64_t s = sample_seed(seed, 10, static_cast<std::uint64_t>(i));
      const ScalarField rho = random_positive(g, s, 0.5, 2.0, 4);
      const VectorField u = random_velocity(g, mix64(s), 0.3, 0.3, 4);
      State st;
      st.rho = rho;
      st.m = VectorField(g);
      for (int c = 0; c < d; ++c) st.m[c] = multiply_raw(rho, u[c]);
      margin[static_cast<size_t>(i)] = -energy_derivative_residual(cfg, st);
    });
    const int w = argmin(margin);
    reports.push_back(make_report(
        "energy_derivative", samples, seed, margin[static_cast<size_t>(w)], 1e-7,
        strf("d=%d n=%d kappa=1 newtonian sample=%d", identity_dim(w),
             identity_dim(w) == 1 ? 128 : 64, w)));
  }

  return reports;
}

}  // namespace nskw
