#include "nskw/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft_detail.hpp"

namespace nskw {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int d_, int n_, bool dealias_) : d(d_), n(n_), dealias(dealias_) {
  if (d != 1 && d != 2) throw std::invalid_argument("dimension must be 1 or 2");
  if (n < 8 || !power_of_two(n)) {
    throw std::invalid_argument("grid size must be a power of two, at least 8");
  }
}

ScalarField sample(const Grid& g, const std::function<double(double)>& f) {
  if (g.d != 1) throw std::invalid_argument("dimension must be 1 for a 1-argument profile");
  ScalarField out(g);
  for (int i = 0; i < g.n; ++i) out.at(i) = f(g.x(i));
  return out;
}

ScalarField sample(const Grid& g, const std::function<double(double, double)>& f) {
  if (g.d != 2) throw std::invalid_argument("dimension must be 2 for a 2-argument profile");
  ScalarField out(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) out.at(i, j) = f(g.x(i), g.x(j));
  return out;
}

void require_finite(const ScalarField& f) {
  for (double v : f.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite field");
  }
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

ScalarField derivative(const ScalarField& f, int axis) {
  auto spec = detail::to_spectrum(f.grid, f.values);
  detail::apply_derivative(f.grid, spec, axis);
  ScalarField out(f.grid);
  out.values = detail::from_spectrum(f.grid, spec);
  return out;
}

VectorField gradient(const ScalarField& f) {
  auto spec = detail::to_spectrum(f.grid, f.values);
  VectorField out(f.grid);
  for (int a = 0; a < f.grid.d; ++a) {
    auto da = spec;
    detail::apply_derivative(f.grid, da, a);
    out[a].values = detail::from_spectrum(f.grid, da);
  }
  return out;
}

ScalarField divergence(const VectorField& u) {
  if (static_cast<int>(u.comp.size()) != u.grid.d) throw std::invalid_argument("grid mismatch");
  std::vector<detail::cplx> acc(static_cast<size_t>(u.grid.size()), 0.0);
  for (int a = 0; a < u.grid.d; ++a) {
    require_same_grid(u.grid, u[a].grid);
    auto spec = detail::to_spectrum(u.grid, u[a].values);
    detail::apply_derivative(u.grid, spec, a);
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += spec[i];
  }
  ScalarField out(u.grid);
  out.values = detail::from_spectrum(u.grid, acc);
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  auto spec = detail::to_spectrum(f.grid, f.values);
  std::vector<detail::cplx> acc(spec.size(), 0.0);
  for (int a = 0; a < f.grid.d; ++a) {
    auto da = spec;
    detail::apply_derivative(f.grid, da, a);
    detail::apply_derivative(f.grid, da, a);
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += da[i];
  }
  ScalarField out(f.grid);
  out.values = detail::from_spectrum(f.grid, acc);
  return out;
}

TensorField hessian(const ScalarField& f) {
  auto spec = detail::to_spectrum(f.grid, f.values);
  TensorField out(f.grid, /*symmetric=*/true);
  for (int a = 0; a < f.grid.d; ++a) {
    for (int b = a; b < f.grid.d; ++b) {
      auto dab = spec;
      detail::apply_derivative(f.grid, dab, a);
      detail::apply_derivative(f.grid, dab, b);
      out.entry(a, b).values = detail::from_spectrum(f.grid, dab);
      if (b != a) out.entry(b, a) = out.entry(a, b);
    }
  }
  return out;
}

VectorField tensor_divergence(const TensorField& A) {
  const int d = A.grid.d;
  VectorField out(A.grid);
  for (int i = 0; i < d; ++i) {
    std::vector<detail::cplx> acc(static_cast<size_t>(A.grid.size()), 0.0);
    for (int j = 0; j < d; ++j) {
      require_same_grid(A.grid, A.entry(i, j).grid);
      auto spec = detail::to_spectrum(A.grid, A.entry(i, j).values);
      detail::apply_derivative(A.grid, spec, j);
      for (size_t k = 0; k < acc.size(); ++k) acc[k] += spec[k];
    }
    out[i].values = detail::from_spectrum(A.grid, acc);
  }
  return out;
}

TensorField grad_vector(const VectorField& u) {
  const int d = u.grid.d;
  TensorField out(u.grid);
  for (int i = 0; i < d; ++i) {
    require_same_grid(u.grid, u[i].grid);
    auto spec = detail::to_spectrum(u.grid, u[i].values);
    for (int j = 0; j < d; ++j) {
      auto dj = spec;
      detail::apply_derivative(u.grid, dj, j);
      out.entry(i, j).values = detail::from_spectrum(u.grid, dj);
    }
  }
  return out;
}

TensorField sym_gradient(const VectorField& u) {
  TensorField g = grad_vector(u);
  TensorField out(u.grid, /*symmetric=*/true);
  const int d = u.grid.d;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      out.entry(i, j) = pointwise(g.entry(i, j), g.entry(j, i),
                                  [](double a, double b) { return 0.5 * (a + b); });
    }
  }
  return out;
}

double integrate(const ScalarField& f) {
  require_finite(f);
  double sum = 0.0;
  for (double v : f.values) sum += v;
  return sum / static_cast<double>(f.grid.size());
}

ScalarField dealias(const ScalarField& f) {
  if (!f.grid.dealias) throw std::invalid_argument("dealiasing disabled on this grid");
  auto spec = detail::to_spectrum(f.grid, f.values);
  detail::apply_dealias_mask(f.grid, spec);
  ScalarField out(f.grid);
  out.values = detail::from_spectrum(f.grid, spec);
  return out;
}

VectorField dealias(const VectorField& u) {
  VectorField out(u.grid);
  for (int a = 0; a < u.grid.d; ++a) out[a] = dealias(u[a]);
  return out;
}

TensorField dealias(const TensorField& A) {
  TensorField out(A.grid, A.symmetric);
  for (int i = 0; i < A.grid.d; ++i)
    for (int j = 0; j < A.grid.d; ++j) out.entry(i, j) = dealias(A.entry(i, j));
  return out;
}

ScalarField product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid);
  ScalarField out(a.grid);
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
  return a.grid.dealias ? dealias(out) : out;
}

ScalarField pointwise(const ScalarField& a, const std::function<double(double)>& f) {
  ScalarField out(a.grid);
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = f(a.values[i]);
  return out;
}

ScalarField pointwise(const ScalarField& a, const ScalarField& b,
                      const std::function<double(double, double)>& f) {
  require_same_grid(a.grid, b.grid);
  ScalarField out(a.grid);
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = f(a.values[i], b.values[i]);
  return out;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return pointwise(a, b, [](double x, double y) { return x + y; });
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return pointwise(a, b, [](double x, double y) { return x - y; });
}

ScalarField operator*(double s, const ScalarField& a) {
  return pointwise(a, [s](double x) { return s * x; });
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double min_value(const ScalarField& f) {
  double m = f.values.empty() ? 0.0 : f.values[0];
  for (double v : f.values) m = std::min(m, v);
  return m;
}

double max_value(const ScalarField& f) {
  double m = f.values.empty() ? 0.0 : f.values[0];
  for (double v : f.values) m = std::max(m, v);
  return m;
}

}  // namespace nskw
