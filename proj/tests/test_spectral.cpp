#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "bridgelab/errors.hpp"
#include "bridgelab/spectral.hpp"
#include "helpers.hpp"

using namespace bridgelab;

TEST_CASE("abscissa reference values, damper at ell/3") {
  // frozen dense-eigensolver references for the standard parameter set
  const auto p16 = eigenvalues(assemble_generator(testutil::standard_params(), 16));
  CHECK(p16.spectral_abscissa == doctest::Approx(-0.112986439367905).epsilon(1e-7));
  CHECK(p16.axis_gap == doctest::Approx(0.112986439367905).epsilon(1e-7));
  CHECK(p16.undamped_witnesses.empty());

  const auto p32 = eigenvalues(assemble_generator(testutil::standard_params(), 32));
  CHECK(p32.spectral_abscissa == doctest::Approx(-0.114605126056853).epsilon(1e-7));
  CHECK(static_cast<int>(p32.eigenvalues.size()) == 128);
}

TEST_CASE("convenience wrapper agrees with the report") {
  const auto p = testutil::standard_params();
  const auto rep = eigenvalues(assemble_generator(p, 12));
  CHECK(spectral_abscissa(p, 12) == doctest::Approx(rep.spectral_abscissa).epsilon(1e-12));
}

TEST_CASE("damper at 2 ell/3 leaves modes on the axis") {
  const auto p = ModelParams::with_ratio(1, 1, 1, 1, 1, 0.5, 0.5, 2, 3);
  const auto rep = eigenvalues(assemble_generator(p, 32));
  CHECK(std::abs(rep.spectral_abscissa) < 1e-9);
  // invisible modes are j = 1, 4, 7, ...
  REQUIRE(rep.undamped_witnesses.size() >= 3);
  CHECK(rep.undamped_witnesses[0] == 1);
  CHECK(rep.undamped_witnesses[1] == 4);
  CHECK(rep.undamped_witnesses[2] == 7);

  // with the suspender coupling removed, the invisible cable mode sits at
  // exactly i mu_1 = i 3 pi / 2
  auto pk0 = p;
  pk0.k = 0.0;
  const auto rep0 = eigenvalues(assemble_generator(pk0, 16));
  const Complex target(0.0, 3.0 * M_PI / 2.0);
  double best = 1e9;
  double best_re = 1.0;
  for (const Complex& z : rep0.eigenvalues)
    if (std::abs(z - target) < best) {
      best = std::abs(z - target);
      best_re = std::abs(z.real());
    }
  CHECK(best < 1e-10);
  CHECK(best_re < 1e-12);
}

TEST_CASE("resolvent sweep stays bounded for the admissible point") {
  const auto g = assemble_generator(testutil::standard_params(), 16);
  const auto sweep = pruss_sweep(g, 40.0, 160, SigmaMinMethod::Svd);
  CHECK(sweep.sup_is_finite);
  CHECK(sweep.sup_norm > 0.0);
  for (double v : sweep.norms) CHECK(std::isfinite(v));
  CHECK(static_cast<int>(sweep.lambdas.size()) == 160);
  CHECK(sweep.lambdas.front() == 0.0);
  CHECK(sweep.lambdas.back() == doctest::Approx(40.0));
}

TEST_CASE("resolvent sweep blows up on an axis eigenvalue") {
  const auto p = ModelParams::with_ratio(1, 1, 1, 1, 0, 0.5, 0.5, 2, 3);
  const auto g = assemble_generator(p, 8);
  // three-point grid hits lambda = 3 pi / 2 exactly
  const auto sweep = pruss_sweep(g, 3.0 * M_PI, 3, SigmaMinMethod::Svd);
  CHECK_FALSE(sweep.sup_is_finite);
}

TEST_CASE("the two sigma_min backends agree") {
  const auto g = assemble_generator(testutil::standard_params(), 8);
  const auto a = pruss_sweep(g, 10.0, 12, SigmaMinMethod::Svd);
  const auto b = pruss_sweep(g, 10.0, 12, SigmaMinMethod::Estimate);
  for (int i = 0; i < 12; ++i)
    CHECK(a.norms[i] == doctest::Approx(b.norms[i]).epsilon(1e-6));
}

TEST_CASE("transmission function point values") {
  auto p = ModelParams::with_ratio(1, 1, 1, 1, 0, 1.0, 0.0, 1, 3);
  CHECK(transmission_function(0.0, p) == 1.0);  // cos^2(0) exactly
  CHECK(transmission_function(M_PI / 2.0, p) == doctest::Approx(0.0625).epsilon(1e-12));
}

TEST_CASE("transmission infimum, frozen references") {
  auto third = ModelParams::with_ratio(1, 1, 1, 1, 0, 1.0, 0.0, 1, 3);
  const auto a = transmission_infimum(third);
  CHECK(a.exhaustive);
  CHECK(a.period == doctest::Approx(6.0 * M_PI).epsilon(1e-14));
  CHECK(a.value == doctest::Approx(0.061061426256719536).epsilon(1e-9));
  // the period holds two equal minima (1.6106... and that + 3pi); leftmost wins
  CHECK(a.argmin == doctest::Approx(1.6106211328032797).epsilon(1e-5));

  auto half = ModelParams::with_ratio(1, 1, 1, 1, 0, 1.0, 0.0, 1, 2);
  const auto b = transmission_infimum(half);
  CHECK(b.value == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(b.argmin == doctest::Approx(M_PI / 2.0).epsilon(1e-7));

  auto two_thirds = ModelParams::with_ratio(1, 1, 1, 1, 0, 1.0, 0.0, 2, 3);
  const auto c = transmission_infimum(two_thirds);
  CHECK(c.value == 0.0);  // snapped below the zero tolerance
  CHECK(std::abs(c.argmin - 3.0 * M_PI / 2.0) < 1e-9);
}

TEST_CASE("irrational damper location needs an explicit window") {
  ModelParams p = testutil::standard_params();
  p.xi_ratio.reset();
  p.xi = 1.0 / M_PI;
  CHECK_THROWS_AS((void)transmission_infimum(p), IrrationalXi);

  TransmissionInfOptions opt;
  opt.window = 20.0;
  const auto rep = transmission_infimum(p, opt);
  CHECK_FALSE(rep.exhaustive);
  CHECK(rep.value > 0.0);
  CHECK(rep.value <= 1.0);
}

TEST_CASE("sweep argument validation") {
  const auto g = assemble_generator(testutil::standard_params(), 4);
  CHECK_THROWS_AS((void)pruss_sweep(g, -1.0, 10, SigmaMinMethod::Svd), ValidationError);
  CHECK_THROWS_AS((void)pruss_sweep(g, 10.0, 1, SigmaMinMethod::Svd), ValidationError);
}
