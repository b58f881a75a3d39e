#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bridgelab/errors.hpp"
#include "bridgelab/model.hpp"
#include "helpers.hpp"

using namespace bridgelab;

TEST_CASE("rational reduction") {
  const Rational r = reduce(2, 6);
  CHECK(r.num == 1);
  CHECK(r.den == 3);
  CHECK(reduce(34, 55).num == 34);
  CHECK(reduce(10, 4).num == 5);
  CHECK(reduce(10, 4).den == 2);
  CHECK(reduce(7, 7).num == 1);
}

TEST_CASE("with_ratio stores the exact location") {
  const auto p = ModelParams::with_ratio(3.0, 1, 1, 1, 1, 0, 0, 1, 3);
  REQUIRE(p.xi_ratio.has_value());
  CHECK(p.xi_ratio->num == 1);
  CHECK(p.xi_ratio->den == 3);
  CHECK(p.xi == doctest::Approx(1.0));
}

TEST_CASE("parameter validation collects every violation") {
  ModelParams p = testutil::standard_params();
  p.beta0 = -2.0;
  p.xi = 1.5;
  p.gamma = -1.0;
  try {
    validate_params(p);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.issues().size() == 3);
  }
  CHECK(check_params(testutil::standard_params()).empty());
}

TEST_CASE("damping point classification, exact ratios") {
  const auto odd = classify_damping_point(reduce(1, 3));
  CHECK(odd.tag == DampingPointTag::ExponentialAdmissible);

  const auto even_num = classify_damping_point(reduce(2, 3));
  CHECK(even_num.tag == DampingPointTag::UndampedModeExists);
  REQUIRE(even_num.witness_mode.has_value());
  // smallest j with sin(mu_j xi) = 0: (2j+1) p / (2q) integer, p/q = 2/3 -> j = 1
  CHECK(*even_num.witness_mode == 1);
  // the witness really is a node of the basis function
  const double mu1 = (2.0 * 1 + 1) * M_PI / 2.0;
  CHECK(std::abs(std::sin(mu1 * 2.0 / 3.0)) < 1e-14);

  const auto even_den = classify_damping_point(reduce(1, 2));
  CHECK(even_den.tag == DampingPointTag::NoGuarantee);

  const auto five = classify_damping_point(reduce(3, 5));
  CHECK(five.tag == DampingPointTag::ExponentialAdmissible);
}

TEST_CASE("damping point classification, float path") {
  // frozen nearest-rational references, denominator <= 64
  const auto a = classify_damping_point(0.3333333);
  CHECK(a.tag == DampingPointTag::NoGuarantee);
  REQUIRE(a.nearest.has_value());
  CHECK(a.nearest->num == 1);
  CHECK(a.nearest->den == 3);
  CHECK(a.nearest_error == doctest::Approx(3.333333331578814e-08).epsilon(1e-6));

  const auto b = classify_damping_point(M_PI / 10.0);
  REQUIRE(b.nearest.has_value());
  CHECK(b.nearest->num == 11);
  CHECK(b.nearest->den == 35);
  CHECK(b.nearest_error == doctest::Approx(0.00012644892673496777).epsilon(1e-9));

  const auto c = classify_damping_point(0.6180339887498949);
  REQUIRE(c.nearest.has_value());
  CHECK(c.nearest->num == 34);
  CHECK(c.nearest->den == 55);
  CHECK(c.nearest_error == doctest::Approx(0.00014782943192326314).epsilon(1e-9));

  const auto d = classify_damping_point(0.5);
  REQUIRE(d.nearest.has_value());
  CHECK(d.nearest->num == 1);
  CHECK(d.nearest->den == 2);
  CHECK(d.nearest_error == 0.0);
}

TEST_CASE("classification dispatch on params") {
  CHECK(classify_damping_point(testutil::standard_params()).tag ==
        DampingPointTag::ExponentialAdmissible);
  ModelParams p = testutil::standard_params();
  p.xi_ratio.reset();
  p.xi = 0.3333333;
  CHECK(classify_damping_point(p).tag == DampingPointTag::NoGuarantee);
}

TEST_CASE("modal frequencies and basis") {
  const Vector mu = modal_frequencies(4, 1.0);
  for (int j = 0; j < 4; ++j)
    CHECK(mu[j] == doctest::Approx((2.0 * j + 1.0) * M_PI / 2.0).epsilon(1e-15));

  Vector x(3);
  x << 0.1, 0.5, 0.9;
  const Matrix phi = basis_matrix(x, 4, 1.0);
  const Matrix dphi = basis_slope_matrix(x, 4, 1.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(phi(i, j) == doctest::Approx(std::sin(mu[j] * x[i])).epsilon(1e-15));
      CHECK(dphi(i, j) ==
            doctest::Approx(mu[j] * std::cos(mu[j] * x[i])).epsilon(1e-15));
    }
}

TEST_CASE("packed layout round trip") {
  const Vector u = testutil::decaying_state(6, 11);
  const ModalState s = ModalState::from_packed(u);
  CHECK(s.n_modes() == 6);
  CHECK((s.packed() - u).norm() == 0.0);
  CHECK(s.a[0] == u[0]);
  CHECK(s.adot[0] == u[6]);
  CHECK(s.b[0] == u[12]);
  CHECK(s.bdot[0] == u[18]);
}

TEST_CASE("synthesize matches the explicit sine sum") {
  const auto p = testutil::standard_params();
  const Vector u = testutil::decaying_state(8, 3);
  const ModalState s = ModalState::from_packed(u);
  Vector x(2);
  x << 0.25, 0.75;
  const FieldSample f = synthesize(s, p, x);
  const Vector mu = modal_frequencies(8, p.ell);
  for (int i = 0; i < 2; ++i) {
    double v = 0, vt = 0, uu = 0, ut = 0;
    for (int j = 0; j < 8; ++j) {
      const double ph = std::sin(mu[j] * x[i]);
      v += s.a[j] * ph;
      vt += s.adot[j] * ph;
      uu += s.b[j] * ph;
      ut += s.bdot[j] * ph;
    }
    CHECK(f.v[i] == doctest::Approx(v).epsilon(1e-14));
    CHECK(f.vt[i] == doctest::Approx(vt).epsilon(1e-14));
    CHECK(f.u[i] == doctest::Approx(uu).epsilon(1e-14));
    CHECK(f.ut[i] == doctest::Approx(ut).epsilon(1e-14));
  }
  const Vector slope = synthesize_cable_slope(s, p, x);
  for (int i = 0; i < 2; ++i) {
    double vx = 0;
    for (int j = 0; j < 8; ++j) vx += s.a[j] * mu[j] * std::cos(mu[j] * x[i]);
    CHECK(slope[i] == doctest::Approx(vx).epsilon(1e-14));
  }
}

TEST_CASE("pure mode energies") {
  // lowest cable mode alone, k = 0: E = (ell/4) beta0 mu0^2 = pi^2/16
  ModelParams p = testutil::standard_params();
  p.k = 0.0;
  ModalState s = ModalState::zero(4);
  s.a[0] = 1.0;
  CHECK(total_energy(s, p).total == doctest::Approx(0.6168502750680849).epsilon(1e-14));

  ModalState d = ModalState::zero(4);
  d.b[0] = 1.0;
  CHECK(total_energy(d, p).total == doctest::Approx(2.138867322474373).epsilon(1e-14));

  // velocity-only state: E = (ell/4) |adot|^2
  ModalState vkin = ModalState::zero(4);
  vkin.adot[1] = 2.0;
  CHECK(total_energy(vkin, p).total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("energy breakdown sums to the total") {
  const auto p = testutil::standard_params();
  const Vector u = testutil::decaying_state(12, 21);
  const EnergyBreakdown e = total_energy(ModalState::from_packed(u), p);
  const double sum = e.cable_kinetic + e.cable_potential + e.deck_kinetic +
                     e.deck_bending + e.deck_tension + e.coupling;
  CHECK(e.total == doctest::Approx(sum).epsilon(1e-13));
  CHECK(e.total > 0.0);
  CHECK(total_energy(u, p).total == doctest::Approx(e.total).epsilon(1e-15));
}

TEST_CASE("coupling energy vanishes when cable and deck agree") {
  const auto p = testutil::standard_params();
  ModalState s = ModalState::zero(5);
  s.a.setConstant(0.7);
  s.b.setConstant(0.7);
  CHECK(total_energy(s, p).coupling == 0.0);
}

TEST_CASE("damping power reads the velocities at xi") {
  const auto p = testutil::standard_params();
  const Vector u = testutil::decaying_state(10, 5);
  const ModalState s = ModalState::from_packed(u);
  Vector xi(1);
  xi << p.xi;
  const FieldSample f = synthesize(s, p, xi);
  const double expected = p.gamma * f.vt[0] * f.vt[0] + p.gamma0 * f.ut[0] * f.ut[0];
  CHECK(damping_power(s, p) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(damping_power(u, p) == doctest::Approx(expected).epsilon(1e-13));
}
