#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nskw/constitutive.hpp"
#include "nskw/fields.hpp"

using namespace nskw;

namespace {

// Independent oracle for the entropy: H(rho) = rho * Int_{rho_bar}^{rho}
// p(s)/s^2 ds, evaluated with composite Simpson quadrature.
double entropy_by_quadrature(const PressureLaw& law, double rho, int intervals = 20000) {
  const double a = law.rho_bar, b = rho;
  if (a == b) return 0.0;
  auto f = [&](double s) { return law.pressure(s) / (s * s); };
  const double h = (b - a) / intervals;
  double acc = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return rho * acc * h / 3.0;
}

}  // namespace

TEST_CASE("stress closed forms") {
  SUBCASE("newtonian is the identity map scaled by mu") {
    auto S = StressModel::newtonian(1.0);
    Mat I = Mat::identity(2);
    Mat out = S.stress(I);
    CHECK(out(0, 0) == 1.0);
    CHECK(out(1, 1) == 1.0);
    CHECK(out(0, 1) == 0.0);
    CHECK(S.dissipation(I) == doctest::Approx(2.0));  // |I|^2 in d=2
    CHECK(S.growth_exponent() == 2.0);
  }

  SUBCASE("power law p=3 doubles a norm-2 matrix") {
    auto S = StressModel::power_law(3.0);
    Mat A = Mat::zero(2);
    A(0, 0) = 2.0;
    Mat out = S.stress(A);
    CHECK(out(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(S.dissipation(A) == doctest::Approx(8.0).epsilon(1e-14));
    // no NaN at the origin, where the formula degenerates for p < 2
    Mat Z = Mat::zero(2);
    Mat oz = StressModel::power_law(1.5).stress(Z);
    CHECK(oz.norm() == 0.0);
    CHECK(StressModel::power_law(1.5).dissipation(Z) == 0.0);
  }

  SUBCASE("regularized bingham") {
    auto S = StressModel::regularized_bingham(0.1);
    Mat A = Mat::zero(1);
    A(0, 0) = 3.0;
    CHECK(S.stress(A)(0, 0) == doctest::Approx(3.0 / 3.1).epsilon(1e-15));
    CHECK(S.dissipation(A) == doctest::Approx(9.0 / 3.1).epsilon(1e-15));
    CHECK(S.growth_exponent() == 1.0);
  }

  SUBCASE("composite") {
    auto S = StressModel::composite(2.0, 0.5, 0.1);
    Mat A = Mat::zero(1);
    A(0, 0) = 3.0;
    CHECK(S.stress(A)(0, 0) == doctest::Approx(6.0 + 0.5 * 3.0 / 3.1).epsilon(1e-15));
    CHECK(S.dissipation(A) == doctest::Approx(3.0 * (6.0 + 0.5 * 3.0 / 3.1)).epsilon(1e-15));
    CHECK(S.growth_exponent() == 2.0);
  }

  SUBCASE("parameter validation") {
    CHECK_THROWS(StressModel::newtonian(0.0));
    CHECK_THROWS(StressModel::power_law(1.0));
    CHECK_THROWS(StressModel::regularized_bingham(0.0));
    CHECK_THROWS(StressModel::composite(1.0, 0.0, 0.1));
  }
}

TEST_CASE("structural assumptions hold for every model") {
  const StressModel models[] = {
      StressModel::newtonian(0.7),
      StressModel::power_law(1.5),
      StressModel::power_law(4.0),
      StressModel::regularized_bingham(0.25),
      StressModel::composite(1.2, 0.4, 0.25),
  };
  for (const auto& model : models) {
    for (int d = 1; d <= 2; ++d) {
      CAPTURE(model.name());
      CAPTURE(d);
      auto rep = verify_assumptions(model, d, 4000, /*seed=*/17);
      CHECK(rep.pass);
      CHECK(rep.witness.empty());
      CHECK(rep.monotonicity_margin_rel >= -1e-12);
      CHECK(rep.growth_constant > 0.0);
      CHECK(rep.coercivity_constant > 0.0);
    }
  }
}

TEST_CASE("empirical constants match the analytic ones") {
  SUBCASE("newtonian: C = c = mu") {
    auto rep = verify_assumptions(StressModel::newtonian(0.7), 2, 3000, 5);
    CHECK(rep.growth_constant == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(rep.coercivity_constant == doctest::Approx(0.7).epsilon(1e-12));
  }
  SUBCASE("power law: C = c = 1 exactly") {
    auto rep = verify_assumptions(StressModel::power_law(2.5), 2, 3000, 5);
    CHECK(rep.growth_constant == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.coercivity_constant == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("bingham: growth below 1, coercivity near 1/(1+delta) at threshold 1") {
    const double delta = 0.1;
    auto rep = verify_assumptions(StressModel::regularized_bingham(delta), 2, 20000, 5);
    CHECK(rep.growth_constant < 1.0);
    CHECK(rep.growth_constant > 0.9);  // approached as |A| -> infinity
    CHECK(rep.coercivity_constant >= 1.0 / (1.0 + delta) - 1e-12);
    CHECK(rep.coercivity_constant < 1.0 / (1.0 + delta) + 0.02);
  }
}

TEST_CASE("field-level stress application") {
  Grid g(2, 32);
  VectorField u(g);
  u[0] = sample(g, [](double, double y) { return std::sin(2.0 * M_PI * y); });
  auto Du = sym_gradient(u);

  auto S = stress(StressModel::newtonian(2.0), Du);
  CHECK(S.symmetric);
  for (int i = 0; i < g.size(); ++i) {
    CHECK(S.entry(0, 1).values[i] ==
          doctest::Approx(2.0 * Du.entry(0, 1).values[i]).epsilon(1e-12));
  }

  auto dis = stress_dissipation(StressModel::newtonian(2.0), Du);
  for (int i = 0; i < g.size(); ++i) {
    const double e01 = Du.entry(0, 1).values[i];
    CHECK(dis.values[i] == doctest::Approx(2.0 * 2.0 * e01 * e01).epsilon(1e-12));
  }
  CHECK(min_value(dis) >= 0.0);
}

TEST_CASE("gamma-law pressure and entropy") {
  SUBCASE("gamma=2 closed values") {
    PressureLaw law(1.0, 2.0, 1.0);
    CHECK(law.pressure(2.0) == doctest::Approx(4.0));
    CHECK(law.pressure_prime(2.0) == doctest::Approx(4.0));
    CHECK(law.entropy(2.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(law.entropy(1.0) == doctest::Approx(0.0));
    CHECK(law.entropy_prime(1.0) == doctest::Approx(1.0));
  }

  SUBCASE("entropy matches its integral definition") {
    PressureLaw law(0.7, 1.4, 1.3);
    for (double rho : {0.4, 0.9, 2.2}) {
      CHECK(law.entropy(rho) ==
            doctest::Approx(entropy_by_quadrature(law, rho)).epsilon(1e-10));
    }
  }

  SUBCASE("H'' = p'/rho") {
    PressureLaw law(0.7, 1.4, 1.3);
    for (double rho : {0.37, 1.0, 1.9}) {
      CHECK(law.entropy_second(rho) ==
            doctest::Approx(law.pressure_prime(rho) / rho).epsilon(1e-13));
    }
  }

  SUBCASE("relative entropy is (rho-r)^2 for gamma=2, any rho_bar") {
    PressureLaw law(1.0, 2.0, 7.0);
    CHECK(law.entropy_relative(1.7, 0.6) == doctest::Approx(1.21).epsilon(1e-13));
    CHECK(law.entropy_relative(0.6, 1.7) == doctest::Approx(1.21).epsilon(1e-13));
    CHECK(law.entropy_relative(2.0, 2.0) == 0.0);
  }

  SUBCASE("relative entropy is nonnegative and vanishes only on the diagonal") {
    PressureLaw law(0.7, 1.4, 1.3);
    for (double rho : {0.1, 0.8, 1.3, 2.9}) {
      for (double r : {0.2, 1.0, 2.5}) {
        const double v = law.entropy_relative(rho, r);
        if (rho == r) CHECK(v == 0.0);
        else CHECK(v > 0.0);
      }
    }
  }

  SUBCASE("validation") {
    CHECK_THROWS(PressureLaw(1.0, 1.0, 1.0));
    CHECK_THROWS(PressureLaw(0.0, 2.0, 1.0));
    PressureLaw law(1.0, 2.0, 1.0);
    CHECK_THROWS_WITH(law.pressure(-0.1), "negative density");
    CHECK_THROWS_WITH(law.entropy_relative(1.0, 0.0), "reference density must be positive");

    Grid g(1, 8);
    ScalarField rho(g, 1.0);
    rho.at(3) = -0.5;
    CHECK_THROWS_WITH(pressure(law, rho), "negative density");
  }

  SUBCASE("field versions agree with samplewise evaluation") {
    PressureLaw law(0.7, 1.4, 1.3);
    Grid g(1, 16);
    auto rho = sample(g, [](double x) { return 1.0 + 0.5 * std::sin(2.0 * M_PI * x); });
    auto r = sample(g, [](double x) { return 1.2 + 0.1 * std::cos(2.0 * M_PI * x); });
    auto H = entropy_H(law, rho);
    auto Hrel = entropy_H_relative(law, rho, r);
    for (int i = 0; i < g.n; ++i) {
      CHECK(H.at(i) == doctest::Approx(law.entropy(rho.at(i))).epsilon(1e-14));
      CHECK(Hrel.at(i) ==
            doctest::Approx(law.entropy_relative(rho.at(i), r.at(i))).epsilon(1e-14));
    }
  }
}
