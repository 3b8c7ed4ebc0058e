#include "nskw/korteweg.hpp"

#include <cmath>
#include <stdexcept>

namespace nskw {

namespace {

ScalarField project(const ScalarField& f) { return f.grid.dealias ? dealias(f) : f; }

}  // namespace

DensityProfile::DensityProfile(ScalarField rho_, double rho_min_)
    : rho(std::move(rho_)), rho_min(rho_min_) {
  if (rho_min <= 0.0) throw std::invalid_argument("density floor must be positive");
  require_finite(rho);
}

void DensityProfile::check() const {
  if (min_value(rho) < rho_min) throw std::domain_error("vacuum region");
}

VectorField korteweg_div_form_a(const DensityProfile& d) {
  d.check();
  auto logr = pointwise(d.rho, [&](double v) { return std::log(std::max(v, d.rho_min)); });
  TensorField H = hessian(project(logr));
  TensorField T(d.rho.grid, /*symmetric=*/true);
  for (int i = 0; i < d.rho.grid.d; ++i)
    for (int j = 0; j < d.rho.grid.d; ++j) T.entry(i, j) = product(d.rho, H.entry(i, j));
  return tensor_divergence(T);
}

VectorField korteweg_div_form_b(const DensityProfile& d) {
  d.check();
  const double sfloor = std::sqrt(d.rho_min);
  auto s = pointwise(d.rho, [&](double v) { return std::sqrt(std::max(v, d.rho_min)); });
  s = project(s);
  auto lap_s = laplacian(s);
  auto q = pointwise(lap_s, s, [&](double a, double b) { return a / std::max(b, sfloor); });
  q = project(q);
  VectorField g = gradient(q);
  VectorField out(d.rho.grid);
  for (int i = 0; i < d.rho.grid.d; ++i) out[i] = product(2.0 * d.rho, g[i]);
  return out;
}

VectorField bohm_intermediate(const DensityProfile& d) {
  d.check();
  auto lap = laplacian(d.rho);
  VectorField g = gradient(d.rho);

  ScalarField grad_sq(d.rho.grid);
  for (int a = 0; a < d.rho.grid.d; ++a) {
    for (size_t i = 0; i < grad_sq.values.size(); ++i) {
      grad_sq.values[i] += g[a].values[i] * g[a].values[i];
    }
  }

  auto w = ScalarField(d.rho.grid);
  for (size_t i = 0; i < w.values.size(); ++i) {
    const double r = std::max(d.rho.values[i], d.rho_min);
    w.values[i] = lap.values[i] / r - grad_sq.values[i] / (2.0 * r * r);
  }
  w = project(w);

  VectorField gw = gradient(w);
  VectorField out(d.rho.grid);
  for (int i = 0; i < d.rho.grid.d; ++i) out[i] = product(d.rho, gw[i]);
  return out;
}

VectorField korteweg_div_general(const DensityProfile& d,
                                 const std::function<double(double)>& K,
                                 const std::function<double(double)>& Kprime) {
  d.check();
  const Grid& g = d.rho.grid;
  const int dim = g.d;

  VectorField grad_rho = gradient(d.rho);
  auto Kr = pointwise(d.rho, [&](double v) { return K(std::max(v, d.rho_min)); });
  auto Kpr = pointwise(d.rho, [&](double v) { return Kprime(std::max(v, d.rho_min)); });

  VectorField flux(g);
  for (int a = 0; a < dim; ++a) flux[a] = product(Kr, grad_rho[a]);
  auto div_flux = divergence(flux);

  ScalarField grad_sq(g);
  for (int a = 0; a < dim; ++a) {
    for (size_t i = 0; i < grad_sq.values.size(); ++i) {
      grad_sq.values[i] += grad_rho[a].values[i] * grad_rho[a].values[i];
    }
  }

  // trace part: rho div(K grad rho) + (K - rho K') |grad rho|^2 / 2
  ScalarField trace_part(g);
  for (size_t i = 0; i < trace_part.values.size(); ++i) {
    const double r = d.rho.values[i];
    trace_part.values[i] = r * div_flux.values[i] +
                           0.5 * (Kr.values[i] - r * Kpr.values[i]) * grad_sq.values[i];
  }
  trace_part = project(trace_part);

  TensorField T(g, /*symmetric=*/true);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      ScalarField entry = product(Kr, pointwise(grad_rho[i], grad_rho[j],
                                                [](double a, double b) { return -a * b; }));
      if (i == j) entry = entry + trace_part;
      T.entry(i, j) = entry;
    }
  }
  return tensor_divergence(T);
}

}  // namespace nskw
