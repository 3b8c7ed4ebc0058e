#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "nskw/fields.hpp"

namespace nskw {

// Dense d x d matrix for pointwise constitutive work, d in {1,2}.
struct Mat {
  int d = 1;
  std::array<double, 4> a{};

  static Mat zero(int d);
  static Mat identity(int d);

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * d + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * d + j]; }

  double dot(const Mat& other) const;  // Frobenius inner product A:B
  double norm() const;                 // |A| = sqrt(A:A)

  Mat& operator+=(const Mat& other);
  Mat& operator-=(const Mat& other);
  Mat& operator*=(double s);
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(double s, Mat a);

enum class StressKind { Newtonian, PowerLaw, RegularizedBingham, Composite };

// Stress acting on symmetric velocity gradients:
//   Newtonian           mu A
//   PowerLaw            |A|^{p-2} A with S(0) = 0, p > 1
//   RegularizedBingham  A / (delta + |A|)
//   Composite           mu0 A + mu1 A / (delta + |A|)
// growth_exponent() is the p for which |S(A)| <= C |A|^{p-1} and
// S(A):A >= c |A|^p hold at large |A|: 2, p, 1 and 2 respectively.
struct StressModel {
  StressKind kind = StressKind::Newtonian;
  double mu = 1.0;
  double p = 2.0;
  double delta = 1.0;
  double mu0 = 1.0;
  double mu1 = 1.0;

  static StressModel newtonian(double mu);
  static StressModel power_law(double p);
  static StressModel regularized_bingham(double delta);
  static StressModel composite(double mu0, double mu1, double delta);

  double growth_exponent() const;
  Mat stress(const Mat& A) const;
  double dissipation(const Mat& A) const;  // S(A):A >= 0
  std::string name() const;
};

// Pointwise application over a symmetric tensor field. `stress` projects the
// result per the grid's dealias policy (it feeds the momentum equation);
// `stress_dissipation` is a diagnostic density and stays un-truncated.
TensorField stress(const StressModel& S, const TensorField& Du);
ScalarField stress_dissipation(const StressModel& S, const TensorField& Du);

// Randomized audit of the structural assumptions: growth |S(A)| <= C|A|^{p-1}
// on all samples, coercivity S(A):A >= c|A|^p reported above the threshold
// |A| > c1 (the behaviour below c1 is unconstrained), and monotonicity
// (S(A)-S(B)):(A-B) >= 0 on sample pairs. Margins are normalized by
// |S(A)-S(B)||A-B| + tiny before the pass check so the verdict is scale-free.
struct AssumptionReport {
  double growth_constant = 0.0;
  double coercivity_constant = 0.0;
  double coercivity_threshold = 1.0;
  double monotonicity_margin = 0.0;      // worst raw value of (S(A)-S(B)):(A-B)
  double monotonicity_margin_rel = 0.0;  // worst normalized value
  int samples = 0;
  std::uint64_t seed = 0;
  bool pass = false;
  std::string witness;  // empty unless a violation was found
};

AssumptionReport verify_assumptions(const StressModel& S, int d, int samples,
                                    std::uint64_t seed, double threshold = 1.0);

// gamma-law pressure p(rho) = a_p rho^gamma, gamma > 1, with the induced
// entropy H(rho) = a_p (rho^gamma - rho rho_bar^{gamma-1}) / (gamma - 1),
// so that H''(rho) = p'(rho)/rho and H has its minimum at rho_bar.
struct PressureLaw {
  double a_p = 1.0;
  double gamma = 2.0;
  double rho_bar = 1.0;

  PressureLaw() = default;
  PressureLaw(double a_p_, double gamma_, double rho_bar_);

  double pressure(double rho) const;
  double pressure_prime(double rho) const;
  double pressure_second(double rho) const;
  double entropy(double rho) const;
  double entropy_prime(double rho) const;
  double entropy_second(double rho) const;
  double entropy_relative(double rho, double r) const;  // H(rho) - H(r) - H'(r)(rho - r)
};

// Samplewise field versions. Negative density raises "negative density";
// entropy_H_relative additionally requires r > 0 everywhere.
ScalarField pressure(const PressureLaw& law, const ScalarField& rho);
ScalarField pressure_prime(const PressureLaw& law, const ScalarField& rho);
ScalarField entropy_H(const PressureLaw& law, const ScalarField& rho);
ScalarField entropy_H_prime(const PressureLaw& law, const ScalarField& rho);
ScalarField entropy_H_relative(const PressureLaw& law, const ScalarField& rho,
                               const ScalarField& r);

}  // namespace nskw
