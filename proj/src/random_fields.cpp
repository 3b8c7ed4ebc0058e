#include "nskw/random_fields.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "fft_detail.hpp"

namespace nskw {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

ScalarField BandLimitedSample::evaluate(const Grid& g) const {
  if (g.d != d) throw std::invalid_argument("grid mismatch");
  ScalarField out(g);

  // Mode-by-mode summation costs modes x points; once every mode fits below
  // Nyquist the same polynomial comes out of one inverse transform.
  if (g.n > 2 * kmax) {
    const double total = static_cast<double>(g.size());
    std::vector<detail::cplx> spec(static_cast<size_t>(g.size()), 0.0);
    auto idx = [&](int k) { return static_cast<size_t>(k >= 0 ? k : k + g.n); };
    spec[0] = total * offset;
    for (const Mode& m : modes) {
      const detail::cplx half(0.5 * scale * m.cos_coeff, -0.5 * scale * m.sin_coeff);
      const size_t plus = d == 1 ? idx(m.k0) : idx(m.k0) * g.n + idx(m.k1);
      const size_t minus = d == 1 ? idx(-m.k0) : idx(-m.k0) * g.n + idx(-m.k1);
      spec[plus] += total * half;
      spec[minus] += total * std::conj(half);
    }
    out.values = detail::from_spectrum(g, spec);
    return out;
  }

  if (d == 1) {
    for (int i = 0; i < g.n; ++i) out.at(i) = evaluate_at(g.x(i));
  } else {
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) out.at(i, j) = evaluate_at(g.x(i), g.x(j));
  }
  return out;
}

double BandLimitedSample::evaluate_at(double x, double y) const {
  double v = offset;
  for (const Mode& m : modes) {
    const double phase = kTwoPi * (m.k0 * x + m.k1 * y);
    v += scale * (m.cos_coeff * std::cos(phase) + m.sin_coeff * std::sin(phase));
  }
  return v;
}

BandLimitedSample draw_band_limited(int d, std::uint64_t seed, int kmax) {
  if (d != 1 && d != 2) throw std::invalid_argument("dimension must be 1 or 2");
  if (kmax < 1) throw std::invalid_argument("kmax must be at least 1");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  BandLimitedSample s;
  s.d = d;
  s.kmax = kmax;

  // Half-space enumeration (k0 > 0, or k0 == 0 and k1 > 0): a real field
  // needs each conjugate pair only once.
  if (d == 1) {
    for (int k = 1; k <= kmax; ++k) {
      const double sigma = 1.0 / (static_cast<double>(k) * k);
      s.modes.push_back({k, 0, sigma * gauss(rng), sigma * gauss(rng)});
    }
  } else {
    for (int k0 = 0; k0 <= kmax; ++k0) {
      for (int k1 = (k0 == 0 ? 1 : -kmax); k1 <= kmax; ++k1) {
        const double kk = std::sqrt(static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1);
        if (kk > kmax) continue;
        const double sigma = 1.0 / (kk * kk);
        s.modes.push_back({k0, k1, sigma * gauss(rng), sigma * gauss(rng)});
      }
    }
  }
  return s;
}

BandLimitedSample scaled_to_range(const BandLimitedSample& s, const Grid& range_grid,
                                  double lo, double hi) {
  if (hi <= lo) throw std::invalid_argument("range must be increasing");
  ScalarField f = s.evaluate(range_grid);
  const double fmin = min_value(f);
  const double fmax = max_value(f);

  BandLimitedSample out = s;
  if (fmax == fmin) {
    out.scale = 0.0;
    out.offset = 0.5 * (lo + hi);
    return out;
  }
  const double a = (hi - lo) / (fmax - fmin);
  out.scale = s.scale * a;
  out.offset = lo + a * (s.offset - fmin);
  return out;
}

ScalarField random_band_limited(const Grid& g, std::uint64_t seed, int kmax) {
  if (kmax == 0) kmax = std::max(1, g.n / 8);
  return draw_band_limited(g.d, seed, kmax).evaluate(g);
}

ScalarField random_positive(const Grid& g, std::uint64_t seed, double lo, double hi, int kmax) {
  if (kmax == 0) kmax = std::max(1, g.n / 8);
  auto s = draw_band_limited(g.d, seed, kmax);
  return scaled_to_range(s, g, lo, hi).evaluate(g);
}

VectorField random_velocity(const Grid& g, std::uint64_t seed, double amplitude,
                            double offset_range, int kmax) {
  if (kmax == 0) kmax = std::max(1, g.n / 8);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  VectorField out(g);
  for (int c = 0; c < g.d; ++c) {
    auto s = draw_band_limited(g.d, seed + 1000003ULL * static_cast<std::uint64_t>(c + 1), kmax);
    ScalarField f = s.evaluate(g);
    const double m = max_abs(f);
    const double a = m > 0.0 ? amplitude / m : 0.0;
    const double c0 = offset_range > 0.0 ? offset_range * uni(rng) : 0.0;
    out[c] = pointwise(f, [a, c0](double v) { return a * v + c0; });
  }
  return out;
}

}  // namespace nskw
