#pragma once

#include <complex>
#include <vector>

#include "nskw/fields.hpp"

// Internal spectral layer. Everything here stays out of the public headers:
// callers see only physical-space samples.
namespace nskw::detail {

using cplx = std::complex<double>;

// Signed wavenumber for index i on an n-point axis: 0..n/2, then negative.
// The Nyquist index i == n/2 maps to +n/2; derivative multipliers must zero
// it separately.
inline int wavenumber(int i, int n) { return i <= n / 2 ? i : i - n; }

// Largest |k| kept by the 2/3 rule.
inline int dealias_cutoff(int n) { return n / 3; }

// Forward DFT of the samples (unnormalized), full complex spectrum, same
// row-major layout as the field. Validates finiteness.
std::vector<cplx> to_spectrum(const Grid& g, const std::vector<double>& values);

// Inverse DFT scaled by 1/N; imaginary parts (round-off for the Hermitian
// spectra produced here) are dropped.
std::vector<double> from_spectrum(const Grid& g, const std::vector<cplx>& spec);

// Multiply by (2*pi*i*k_axis), with the Nyquist multiplier set to zero.
void apply_derivative(const Grid& g, std::vector<cplx>& spec, int axis);

// Zero every mode with |k| > n/3 on any axis.
void apply_dealias_mask(const Grid& g, std::vector<cplx>& spec);

}  // namespace nskw::detail
