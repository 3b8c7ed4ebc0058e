#pragma once

#include <functional>

#include "nskw/fields.hpp"

namespace nskw {

// Strictly positive density with a hard floor. The capillarity operators
// refuse to evaluate once any sample drops below rho_min ("vacuum region");
// the floor also guards every pointwise sqrt/log/quotient inside them.
struct DensityProfile {
  ScalarField rho;
  double rho_min = 1e-8;

  explicit DensityProfile(ScalarField rho_, double rho_min_ = 1e-8);
  void check() const;
};

// The capillarity force div(rho hess(ln rho)) in three algebraically equal
// forms. Form b is the production form used by the momentum equation; the
// other two exist to cross-check it.
VectorField korteweg_div_form_a(const DensityProfile& d);   // div(rho hess(ln rho))
VectorField korteweg_div_form_b(const DensityProfile& d);   // 2 rho grad(lap(sqrt rho)/sqrt rho)
VectorField bohm_intermediate(const DensityProfile& d);     // rho grad(lap(rho)/rho - |grad rho|^2/(2 rho^2))

// General capillarity tensor
//   K = (rho div(K(rho) grad rho) + 1/2 (K(rho) - rho K'(rho)) |grad rho|^2) I
//       - K(rho) grad rho (x) grad rho,
// returned as its divergence. With K(rho) = 1/rho this reproduces the forms
// above; with constant K it reduces to rho grad(lap rho). Diagnostic only.
VectorField korteweg_div_general(const DensityProfile& d,
                                 const std::function<double(double)>& K,
                                 const std::function<double(double)>& Kprime);

}  // namespace nskw
