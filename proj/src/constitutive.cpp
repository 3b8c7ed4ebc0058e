#include "nskw/constitutive.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nskw {

Mat Mat::zero(int d) {
  Mat m;
  m.d = d;
  return m;
}

Mat Mat::identity(int d) {
  Mat m = zero(d);
  for (int i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

double Mat::dot(const Mat& other) const {
  double s = 0.0;
  const int count = d * d;
  for (int i = 0; i < count; ++i) s += a[static_cast<size_t>(i)] * other.a[static_cast<size_t>(i)];
  return s;
}

double Mat::norm() const { return std::sqrt(dot(*this)); }

Mat& Mat::operator+=(const Mat& other) {
  for (int i = 0; i < d * d; ++i) a[static_cast<size_t>(i)] += other.a[static_cast<size_t>(i)];
  return *this;
}

Mat& Mat::operator-=(const Mat& other) {
  for (int i = 0; i < d * d; ++i) a[static_cast<size_t>(i)] -= other.a[static_cast<size_t>(i)];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (int i = 0; i < d * d; ++i) a[static_cast<size_t>(i)] *= s;
  return *this;
}

Mat operator+(Mat a, const Mat& b) { a += b; return a; }
Mat operator-(Mat a, const Mat& b) { a -= b; return a; }
Mat operator*(double s, Mat a) { a *= s; return a; }

StressModel StressModel::newtonian(double mu) {
  if (mu <= 0.0) throw std::invalid_argument("viscosity must be positive");
  StressModel s;
  s.kind = StressKind::Newtonian;
  s.mu = mu;
  return s;
}

StressModel StressModel::power_law(double p) {
  if (p <= 1.0) throw std::invalid_argument("power-law exponent must exceed 1");
  StressModel s;
  s.kind = StressKind::PowerLaw;
  s.p = p;
  return s;
}

StressModel StressModel::regularized_bingham(double delta) {
  if (delta <= 0.0) throw std::invalid_argument("regularization delta must be positive");
  StressModel s;
  s.kind = StressKind::RegularizedBingham;
  s.delta = delta;
  return s;
}

StressModel StressModel::composite(double mu0, double mu1, double delta) {
  if (mu0 <= 0.0 || mu1 <= 0.0) throw std::invalid_argument("viscosity must be positive");
  if (delta <= 0.0) throw std::invalid_argument("regularization delta must be positive");
  StressModel s;
  s.kind = StressKind::Composite;
  s.mu0 = mu0;
  s.mu1 = mu1;
  s.delta = delta;
  return s;
}

double StressModel::growth_exponent() const {
  switch (kind) {
    case StressKind::Newtonian: return 2.0;
    case StressKind::PowerLaw: return p;
    case StressKind::RegularizedBingham: return 1.0;
    case StressKind::Composite: return 2.0;
  }
  return 2.0;
}

Mat StressModel::stress(const Mat& A) const {
  const double r = A.norm();
  switch (kind) {
    case StressKind::Newtonian:
      return mu * A;
    case StressKind::PowerLaw:
      if (r == 0.0) return Mat::zero(A.d);
      return std::pow(r, p - 2.0) * A;
    case StressKind::RegularizedBingham:
      return (1.0 / (delta + r)) * A;
    case StressKind::Composite:
      return (mu0 + mu1 / (delta + r)) * A;
  }
  return Mat::zero(A.d);
}

double StressModel::dissipation(const Mat& A) const {
  const double r2 = A.dot(A);
  const double r = std::sqrt(r2);
  switch (kind) {
    case StressKind::Newtonian: return mu * r2;
    case StressKind::PowerLaw: return r == 0.0 ? 0.0 : std::pow(r, p);
    case StressKind::RegularizedBingham: return r2 / (delta + r);
    case StressKind::Composite: return mu0 * r2 + mu1 * r2 / (delta + r);
  }
  return 0.0;
}

std::string StressModel::name() const {
  switch (kind) {
    case StressKind::Newtonian: return "newtonian";
    case StressKind::PowerLaw: return "powerlaw";
    case StressKind::RegularizedBingham: return "bingham";
    case StressKind::Composite: return "composite";
  }
  return "unknown";
}

namespace {

Mat point_matrix(const TensorField& T, int idx) {
  Mat m = Mat::zero(T.grid.d);
  for (int i = 0; i < T.grid.d; ++i)
    for (int j = 0; j < T.grid.d; ++j) m(i, j) = T.entry(i, j).values[static_cast<size_t>(idx)];
  return m;
}

}  // namespace

TensorField stress(const StressModel& S, const TensorField& Du) {
  TensorField out(Du.grid, Du.symmetric);
  const int total = Du.grid.size();
  for (int idx = 0; idx < total; ++idx) {
    const Mat s = S.stress(point_matrix(Du, idx));
    for (int i = 0; i < Du.grid.d; ++i)
      for (int j = 0; j < Du.grid.d; ++j) out.entry(i, j).values[static_cast<size_t>(idx)] = s(i, j);
  }
  return Du.grid.dealias ? dealias(out) : out;
}

ScalarField stress_dissipation(const StressModel& S, const TensorField& Du) {
  ScalarField out(Du.grid);
  const int total = Du.grid.size();
  for (int idx = 0; idx < total; ++idx) {
    out.values[static_cast<size_t>(idx)] = S.dissipation(point_matrix(Du, idx));
  }
  return out;
}

AssumptionReport verify_assumptions(const StressModel& S, int d, int samples,
                                    std::uint64_t seed, double threshold) {
  if (d != 1 && d != 2) throw std::invalid_argument("dimension must be 1 or 2");
  if (samples < 2) throw std::invalid_argument("need at least two samples");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> logmag(-3.0, 3.0);

  auto draw = [&]() {
    Mat m = Mat::zero(d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        const double v = gauss(rng);
        m(i, j) = v;
        m(j, i) = v;
      }
    const double n = m.norm();
    if (n > 0.0) m *= std::pow(10.0, logmag(rng)) / n;
    return m;
  };

  AssumptionReport rep;
  rep.coercivity_threshold = threshold;
  rep.samples = samples;
  rep.seed = seed;

  const double p = S.growth_exponent();
  double growth = 0.0;
  double coercivity = std::numeric_limits<double>::infinity();
  double mono_raw = std::numeric_limits<double>::infinity();
  double mono_rel = std::numeric_limits<double>::infinity();
  bool coercivity_seen = false;

  Mat prev = draw();
  Mat prev_stress = S.stress(prev);
  for (int k = 0; k < samples; ++k) {
    const Mat A = draw();
    const Mat SA = S.stress(A);
    const double r = A.norm();
    if (r > 0.0) {
      growth = std::max(growth, SA.norm() / std::pow(r, p - 1.0));
      if (r > threshold) {
        coercivity = std::min(coercivity, S.dissipation(A) / std::pow(r, p));
        coercivity_seen = true;
      }
    }
    const Mat dA = A - prev;
    const Mat dS = SA - prev_stress;
    const double raw = dS.dot(dA);
    const double scale = dS.norm() * dA.norm() + 1e-300;
    mono_raw = std::min(mono_raw, raw);
    const double rel = raw / scale;
    if (rel < mono_rel) {
      mono_rel = rel;
      if (rel < -1e-12) {
        std::ostringstream os;
        os << "monotonicity violated: |A|=" << A.norm() << " |B|=" << prev.norm()
           << " margin=" << raw;
        rep.witness = os.str();
      }
    }
    prev = A;
    prev_stress = SA;
  }

  rep.growth_constant = growth;
  rep.coercivity_constant = coercivity_seen ? coercivity : 0.0;
  rep.monotonicity_margin = mono_raw;
  rep.monotonicity_margin_rel = mono_rel;
  rep.pass = std::isfinite(growth) && coercivity_seen && rep.coercivity_constant > 0.0 &&
             mono_rel >= -1e-12;
  return rep;
}

PressureLaw::PressureLaw(double a_p_, double gamma_, double rho_bar_)
    : a_p(a_p_), gamma(gamma_), rho_bar(rho_bar_) {
  if (a_p <= 0.0) throw std::invalid_argument("pressure coefficient must be positive");
  if (gamma <= 1.0) throw std::invalid_argument("adiabatic exponent must exceed 1");
  if (rho_bar <= 0.0) throw std::invalid_argument("reference density must be positive");
}

double PressureLaw::pressure(double rho) const {
  if (rho < 0.0) throw std::domain_error("negative density");
  return a_p * std::pow(rho, gamma);
}

double PressureLaw::pressure_prime(double rho) const {
  if (rho < 0.0) throw std::domain_error("negative density");
  return a_p * gamma * std::pow(rho, gamma - 1.0);
}

double PressureLaw::pressure_second(double rho) const {
  if (rho < 0.0) throw std::domain_error("negative density");
  return a_p * gamma * (gamma - 1.0) * std::pow(rho, gamma - 2.0);
}

double PressureLaw::entropy(double rho) const {
  if (rho < 0.0) throw std::domain_error("negative density");
  return a_p * (std::pow(rho, gamma) - rho * std::pow(rho_bar, gamma - 1.0)) / (gamma - 1.0);
}

double PressureLaw::entropy_prime(double rho) const {
  if (rho < 0.0) throw std::domain_error("negative density");
  return a_p * (gamma * std::pow(rho, gamma - 1.0) - std::pow(rho_bar, gamma - 1.0)) /
         (gamma - 1.0);
}

double PressureLaw::entropy_second(double rho) const {
  if (rho < 0.0) throw std::domain_error("negative density");
  return a_p * gamma * std::pow(rho, gamma - 2.0);
}

double PressureLaw::entropy_relative(double rho, double r) const {
  if (rho < 0.0) throw std::domain_error("negative density");
  if (r <= 0.0) throw std::domain_error("reference density must be positive");
  // The rho_bar-linear parts cancel, leaving
  // a_p (rho^g - r^g - g r^{g-1}(rho - r)) / (g - 1), nonnegative by convexity.
  return a_p *
         (std::pow(rho, gamma) - std::pow(r, gamma) -
          gamma * std::pow(r, gamma - 1.0) * (rho - r)) /
         (gamma - 1.0);
}

namespace {

ScalarField samplewise(const PressureLaw& law, const ScalarField& rho,
                       double (PressureLaw::*f)(double) const) {
  require_finite(rho);
  ScalarField out(rho.grid);
  for (size_t i = 0; i < rho.values.size(); ++i) out.values[i] = (law.*f)(rho.values[i]);
  return out;
}

}  // namespace

ScalarField pressure(const PressureLaw& law, const ScalarField& rho) {
  return samplewise(law, rho, &PressureLaw::pressure);
}

ScalarField pressure_prime(const PressureLaw& law, const ScalarField& rho) {
  return samplewise(law, rho, &PressureLaw::pressure_prime);
}

ScalarField entropy_H(const PressureLaw& law, const ScalarField& rho) {
  return samplewise(law, rho, &PressureLaw::entropy);
}

ScalarField entropy_H_prime(const PressureLaw& law, const ScalarField& rho) {
  return samplewise(law, rho, &PressureLaw::entropy_prime);
}

ScalarField entropy_H_relative(const PressureLaw& law, const ScalarField& rho,
                               const ScalarField& r) {
  require_same_grid(rho.grid, r.grid);
  require_finite(rho);
  require_finite(r);
  return pointwise(rho, r, [&law](double a, double b) { return law.entropy_relative(a, b); });
}

}  // namespace nskw
