#pragma once

#include <functional>
#include <vector>

namespace nskw {

// Uniform collocation grid on the unit torus [0,1)^d with d in {1,2} and n
// samples per axis, n a power of two, n >= 8. Sample j of axis a sits at
// x = j/n. When `dealias` is set, products routed through dealias() drop all
// modes with |k| > n/3 along any axis (the 2/3 rule), which makes quadratic
// products alias-free on the retained modes.
struct Grid {
  int d = 1;
  int n = 64;
  bool dealias = true;

  Grid() = default;
  Grid(int d_, int n_, bool dealias_ = true);

  int size() const { int s = n; for (int a = 1; a < d; ++a) s *= n; return s; }
  double h() const { return 1.0 / n; }
  double x(int j) const { return static_cast<double>(j) / n; }
  bool operator==(const Grid&) const = default;
};

// Real samples over a Grid, row-major: index = i*n + j in d=2 (i along axis
// 0, j along axis 1). Spectral coefficients never appear in the public API.
struct ScalarField {
  Grid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), values(g.size(), fill) {}

  double& at(int i) { return values[static_cast<size_t>(i)]; }
  double at(int i) const { return values[static_cast<size_t>(i)]; }
  double& at(int i, int j) { return values[static_cast<size_t>(i) * grid.n + j]; }
  double at(int i, int j) const { return values[static_cast<size_t>(i) * grid.n + j]; }
};

// d components, each a ScalarField on the same grid.
struct VectorField {
  Grid grid;
  std::vector<ScalarField> comp;

  VectorField() = default;
  explicit VectorField(const Grid& g) : grid(g), comp(g.d, ScalarField(g)) {}

  ScalarField& operator[](int i) { return comp[static_cast<size_t>(i)]; }
  const ScalarField& operator[](int i) const { return comp[static_cast<size_t>(i)]; }
};

// d x d components; entry(i,j) follows the convention that j is the
// derivative (column) index, so grad u stores d_j u_i at (i,j).
struct TensorField {
  Grid grid;
  bool symmetric = false;
  std::vector<ScalarField> comp;  // row-major d*d

  TensorField() = default;
  explicit TensorField(const Grid& g, bool symmetric_ = false)
      : grid(g), symmetric(symmetric_), comp(g.d * g.d, ScalarField(g)) {}

  ScalarField& entry(int i, int j) { return comp[static_cast<size_t>(i) * grid.d + j]; }
  const ScalarField& entry(int i, int j) const { return comp[static_cast<size_t>(i) * grid.d + j]; }
};

// Build a field by evaluating f at the grid points. The callable receives
// the coordinates of one point (x) or (x, y).
ScalarField sample(const Grid& g, const std::function<double(double)>& f);
ScalarField sample(const Grid& g, const std::function<double(double, double)>& f);

// Exact spectral first derivative along `axis` (0-based). The Nyquist mode
// n/2 has no well-defined odd derivative on a real grid and is dropped.
ScalarField derivative(const ScalarField& f, int axis);

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);

// laplacian and hessian are built from the same first-derivative multiplier
// (Nyquist already zeroed), so divergence(gradient(f)) == laplacian(f) to
// round-off by construction.
ScalarField laplacian(const ScalarField& f);
TensorField hessian(const ScalarField& f);

// (div A)_i = sum_j d_j A_{ij}
VectorField tensor_divergence(const TensorField& A);

// grad u with entries (d_j u_i)_{i,j}; sym_gradient is its symmetric part.
TensorField grad_vector(const VectorField& u);
TensorField sym_gradient(const VectorField& u);

// Integral over the unit torus: the trapezoid rule degenerates to the mean
// of the samples, exact for trigonometric polynomials below Nyquist.
double integrate(const ScalarField& f);

// 2/3-rule truncation. Requires grid.dealias.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& u);
TensorField dealias(const TensorField& A);

// Pointwise product; applies the 2/3 truncation when grid.dealias is set.
ScalarField product(const ScalarField& a, const ScalarField& b);

// Pointwise map; no truncation (callers decide when to project).
ScalarField pointwise(const ScalarField& a, const std::function<double(double)>& f);
ScalarField pointwise(const ScalarField& a, const ScalarField& b,
                      const std::function<double(double, double)>& f);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);

double max_abs(const ScalarField& f);
double min_value(const ScalarField& f);
double max_value(const ScalarField& f);

// Throws "non-finite field" if any sample is NaN or infinite.
void require_finite(const ScalarField& f);
void require_same_grid(const Grid& a, const Grid& b);

}  // namespace nskw
