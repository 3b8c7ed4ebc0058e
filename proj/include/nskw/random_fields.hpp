#pragma once

#include <cstdint>
#include <vector>

#include "nskw/fields.hpp"

namespace nskw {

// Band-limited random trigonometric polynomials for the randomized checks:
// every mode with 0 < |k| <= kmax carries independent Gaussian cosine/sine
// coefficients with standard deviation |k|^{-2}; everything higher is zero.
// A draw is a coefficient list, so the same sample can be evaluated on grids
// of different resolution (the values agree on shared points).
struct BandLimitedSample {
  struct Mode {
    int k0 = 0;
    int k1 = 0;  // unused in d=1
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
  };

  int d = 1;
  int kmax = 0;
  double offset = 0.0;  // constant part
  double scale = 1.0;   // applied to every mode
  std::vector<Mode> modes;

  ScalarField evaluate(const Grid& g) const;
  double evaluate_at(double x, double y = 0.0) const;
};

// Deterministic draw, fully fixed by (d, kmax, seed).
BandLimitedSample draw_band_limited(int d, std::uint64_t seed, int kmax);

// Affine remap so the samples span [lo, hi] exactly on `range_grid`.
// The result is still band-limited with the same modes.
BandLimitedSample scaled_to_range(const BandLimitedSample& s, const Grid& range_grid,
                                  double lo, double hi);

// Convenience wrappers that evaluate straight onto a grid. kmax = 0 means n/8.
ScalarField random_band_limited(const Grid& g, std::uint64_t seed, int kmax = 0);
ScalarField random_positive(const Grid& g, std::uint64_t seed, double lo, double hi,
                            int kmax = 0);

// Independent band-limited components scaled to max amplitude, plus a
// constant offset drawn uniformly from [-offset_range, offset_range].
VectorField random_velocity(const Grid& g, std::uint64_t seed, double amplitude,
                            double offset_range = 0.0, int kmax = 0);

}  // namespace nskw
