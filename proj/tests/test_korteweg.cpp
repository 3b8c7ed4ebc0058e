#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nskw/fields.hpp"
#include "nskw/korteweg.hpp"
#include "nskw/random_fields.hpp"

using namespace nskw;

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double rel_l2(const VectorField& a, const VectorField& b) {
  double num = 0.0, den = 0.0;
  for (int c = 0; c < a.grid.d; ++c) {
    for (size_t i = 0; i < a[c].values.size(); ++i) {
      const double diff = a[c].values[i] - b[c].values[i];
      num += diff * diff;
      den += a[c].values[i] * a[c].values[i];
    }
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

}  // namespace

TEST_CASE("exponential profile matches the symbolic force") {
  // rho = exp(sin(2 pi x)): div(rho (ln rho)'') has the closed form
  // -(2 pi)^3 exp(sin)(cos)(1 + sin), equal to -(2 pi)^3 at x = 0.
  Grid g(1, 64, /*dealias=*/false);
  auto rho = sample(g, [](double x) { return std::exp(std::sin(kTwoPi * x)); });
  DensityProfile d(rho);

  auto fa = korteweg_div_form_a(d);
  auto exact = [](double x) {
    const double s = std::sin(kTwoPi * x), c = std::cos(kTwoPi * x);
    return -kTwoPi * kTwoPi * kTwoPi * std::exp(s) * c * (1.0 + s);
  };
  double m = 0.0;
  for (int i = 0; i < g.n; ++i) m = std::max(m, std::abs(fa[0].at(i) - exact(g.x(i))));
  CHECK(m < 1e-6);
  CHECK(fa[0].at(0) == doctest::Approx(-std::pow(kTwoPi, 3.0)).epsilon(1e-9));

  auto fb = korteweg_div_form_b(d);
  auto fi = bohm_intermediate(d);
  CHECK(rel_l2(fa, fb) < 1e-9);
  CHECK(rel_l2(fa, fi) < 1e-9);
}

TEST_CASE("the three forms agree on random smooth densities") {
  // Profiles carry the band limit of the coarsest grid they are compared on
  // (kmax = 32/8 = 4): at n = 128 the identity residual is then pure
  // round-off, orders below the 1e-7 bar.
  for (int dim = 1; dim <= 2; ++dim) {
    const int n = 128;
    Grid g(dim, n, /*dealias=*/false);
    for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
      CAPTURE(dim);
      CAPTURE(seed);
      auto rho = random_positive(g, seed, 0.5, 2.0, /*kmax=*/4);
      DensityProfile d(rho);
      auto fa = korteweg_div_form_a(d);
      auto fb = korteweg_div_form_b(d);
      auto fi = bohm_intermediate(d);
      CHECK(rel_l2(fa, fb) < 1e-7);
      CHECK(rel_l2(fa, fi) < 1e-7);
    }
  }
}

TEST_CASE("residual decays with resolution") {
  // Same trigonometric polynomial evaluated at n=32 and n=128; the form
  // disagreement is a pure truncation effect and must drop by 10x or more.
  auto resid_at = [](int n, const BandLimitedSample& s) {
    Grid g(1, n, /*dealias=*/false);
    DensityProfile d(s.evaluate(g));
    return rel_l2(korteweg_div_form_a(d), korteweg_div_form_b(d));
  };
  Grid coarse(1, 32, false);
  auto s = scaled_to_range(draw_band_limited(1, 21, 4), coarse, 0.5, 2.0);
  const double r32 = resid_at(32, s);
  const double r128 = resid_at(128, s);
  CHECK(r128 < 1e-7);
  CHECK(r128 * 10.0 <= r32);
}

TEST_CASE("general capillarity with K = 1/rho reproduces the log form") {
  Grid g(1, 128, /*dealias=*/false);
  auto rho = random_positive(g, 77, 0.5, 2.0, /*kmax=*/4);
  DensityProfile d(rho);
  auto fa = korteweg_div_form_a(d);
  auto fg = korteweg_div_general(
      d, [](double r) { return 1.0 / r; }, [](double r) { return -1.0 / (r * r); });
  CHECK(rel_l2(fa, fg) < 1e-7);

  Grid g2(2, 64, /*dealias=*/false);
  auto rho2 = random_positive(g2, 78, 0.7, 1.6, /*kmax=*/4);
  DensityProfile d2(rho2);
  CHECK(rel_l2(korteweg_div_form_a(d2),
               korteweg_div_general(d2, [](double r) { return 1.0 / r; },
                                    [](double r) { return -1.0 / (r * r); })) < 1e-7);
}

TEST_CASE("general capillarity with constant K is rho grad(lap rho)") {
  Grid g(1, 64, /*dealias=*/false);
  auto rho = sample(g, [](double x) { return 2.0 + 0.5 * std::sin(kTwoPi * x); });
  DensityProfile d(rho);
  auto fg = korteweg_div_general(d, [](double) { return 1.0; }, [](double) { return 0.0; });
  // rho d/dx(lap rho) = (2 + 0.5 sin)(0.5 (2 pi)^3 (-cos)) ... lap rho =
  // -0.5 (2 pi)^2 sin, so its derivative is -0.5 (2 pi)^3 cos.
  auto exact = [](double x) {
    return (2.0 + 0.5 * std::sin(kTwoPi * x)) * (-0.5) * std::pow(kTwoPi, 3.0) *
           std::cos(kTwoPi * x);
  };
  double m = 0.0;
  for (int i = 0; i < g.n; ++i) m = std::max(m, std::abs(fg[0].at(i) - exact(g.x(i))));
  CHECK(m < 1e-8);

  Grid g2(2, 32, /*dealias=*/false);
  auto rho2 = sample(g2, [](double x, double y) {
    return 2.0 + 0.3 * std::sin(kTwoPi * x) * std::cos(kTwoPi * y);
  });
  DensityProfile d2(rho2);
  auto fg2 = korteweg_div_general(d2, [](double) { return 1.0; }, [](double) { return 0.0; });
  VectorField expected(g2);
  auto lap2 = laplacian(rho2);
  auto glap = gradient(lap2);
  for (int c = 0; c < 2; ++c) expected[c] = product(rho2, glap[c]);
  CHECK(rel_l2(expected, fg2) < 1e-9);
}

TEST_CASE("constant density gives zero force") {
  Grid g(2, 32);
  DensityProfile d(ScalarField(g, 1.7));
  CHECK(max_abs(korteweg_div_form_a(d)[0]) < 1e-12);
  CHECK(max_abs(korteweg_div_form_b(d)[1]) < 1e-12);
  CHECK(max_abs(bohm_intermediate(d)[0]) < 1e-12);
}

TEST_CASE("vacuum detection") {
  Grid g(1, 16);
  ScalarField rho(g, 1.0);
  rho.at(5) = 1e-9;  // below the default floor
  DensityProfile d(rho);
  CHECK_THROWS_WITH(korteweg_div_form_a(d), "vacuum region");
  CHECK_THROWS_WITH(korteweg_div_form_b(d), "vacuum region");
  CHECK_THROWS_WITH(bohm_intermediate(d), "vacuum region");

  CHECK_THROWS(DensityProfile(rho, 0.0));
  ScalarField ok(g, 0.5);
  CHECK_NOTHROW(DensityProfile(ok).check());
}

TEST_CASE("random field generator is deterministic and in range") {
  Grid g(2, 64);
  auto a = random_positive(g, 42, 0.3, 3.0);
  auto b = random_positive(g, 42, 0.3, 3.0);
  for (size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
  CHECK(min_value(a) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(max_value(a) == doctest::Approx(3.0).epsilon(1e-12));
  auto c = random_positive(g, 43, 0.3, 3.0);
  double diff = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) diff = std::max(diff, std::abs(a.values[i] - c.values[i]));
  CHECK(diff > 1e-3);

  // coarse-grid samples are a subset of fine-grid samples of the same draw
  auto s = draw_band_limited(1, 9, 4);
  Grid gc(1, 32), gf(1, 128);
  auto fc = s.evaluate(gc);
  auto ff = s.evaluate(gf);
  for (int i = 0; i < 32; ++i) CHECK(fc.at(i) == doctest::Approx(ff.at(4 * i)).epsilon(1e-14));
}
