#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bridgelab/characteristics.hpp"
#include "bridgelab/errors.hpp"
#include "bridgelab/model.hpp"
#include "bridgelab/random.hpp"
#include "helpers.hpp"

using namespace bridgelab;

namespace {

ModelParams wave_params(long long p, long long q, double gamma) {
  return ModelParams::with_ratio(1.0, 1.0, 1.0, 1.0, 0.0, gamma, 0.0, p, q);
}

}  // namespace

TEST_CASE("scatter is the identity when the damper is off") {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double a = rng.normal() * 3.0;
    const double d = rng.normal() * 3.0;
    const auto sc = scatter(a, d, 0.0, 1.0);
    CHECK(sc.transmitted_p == a);  // bitwise
    CHECK(sc.reflected_q == d);
  }
}

TEST_CASE("scatter balances the interface power exactly") {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(-10.0, 10.0);
    const double d = rng.uniform(-10.0, 10.0);
    const double gamma = rng.uniform(0.0, 10.0);
    const double k1 = rng.uniform(0.1, 3.0);
    const auto sc = scatter(a, d, gamma, k1);
    const double b = sc.transmitted_p, c = sc.reflected_q;
    const double incoming = (k1 / 4.0) * (a * a + d * d);
    const double outgoing = (k1 / 4.0) * (b * b + c * c);
    const double vt = 0.5 * (b + d);
    CHECK(outgoing <= incoming + 1e-12 * (1.0 + incoming));
    CHECK(incoming - outgoing ==
          doctest::Approx(gamma * vt * vt).epsilon(1e-12).scale(1.0 + incoming));
  }
}

TEST_CASE("field construction guards") {
  CHECK_THROWS_AS((void)make_field(testutil::standard_params(), 300),
                  ValidationError);  // k != 0
  auto p = wave_params(1, 3, 0.5);
  CHECK_THROWS_AS((void)make_field(p, 100), IncommensurableXi);  // 100/3 not integer
  const auto f = make_field(p, 300);
  CHECK(f.interface_index == 100);
  CHECK(f.dx == doctest::Approx(1.0 / 300).epsilon(1e-15));
}

TEST_CASE("round trip through the undamped domain is an exact involution") {
  auto p = wave_params(1, 3, 0.0);
  const int n = 60;
  auto f = make_field(p, n);
  Rng rng(2);
  for (int i = 0; i < n; ++i) {
    f.p[i] = rng.normal();
    f.q[i] = rng.normal();
  }
  const Vector p0 = f.p, q0 = f.q;
  advance(f, 2 * n);  // time 2 ell / k1: Dirichlet + Neumann gives -Id, bitwise
  CHECK((f.p + p0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((f.q + q0).cwiseAbs().maxCoeff() == 0.0);
  advance(f, 2 * n);
  CHECK((f.p - p0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((f.q - q0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("free transport just shifts the cells") {
  auto p = wave_params(1, 2, 0.0);
  auto f = make_field(p, 10);
  f.p[3] = 1.0;  // right-moving pulse away from boundaries and interface
  advance(f, 2);
  CHECK(f.p[5] == 1.0);
  CHECK(f.p.cwiseAbs().sum() == 1.0);
}

TEST_CASE("per-step energy balance at machine precision") {
  auto p = wave_params(1, 3, 0.7);
  auto f = make_field(p, 90);
  Rng rng(6);
  for (int i = 0; i < 90; ++i) {
    f.p[i] = rng.normal();
    f.q[i] = rng.normal();
  }
  const auto run = run_characteristics(f, 2.0);
  REQUIRE(run.energies.size() == run.interface_power.size() + 1);
  const double e0 = run.energies.front();
  for (std::size_t s = 0; s < run.interface_power.size(); ++s) {
    const double de = run.energies[s + 1] - run.energies[s];
    CHECK(std::abs(de + run.dt * run.interface_power[s]) < 1e-13 * e0);
    CHECK(run.energies[s + 1] <= run.energies[s] + 1e-13 * e0);
  }
  CHECK(run.energies.back() < e0);  // the damper actually works
}

TEST_CASE("snapshots are recorded at the requested stride") {
  auto p = wave_params(1, 2, 0.3);
  auto f = make_field(p, 40);
  f.p[5] = 1.0;
  const auto run = run_characteristics(f, 0.5, 10);
  CHECK(run.snapshots.size() == run.snapshot_times.size());
  CHECK(run.snapshots.size() >= 2);
  for (std::size_t i = 0; i < run.snapshot_times.size(); ++i)
    CHECK(run.snapshot_times[i] == doctest::Approx(run.snapshots[i].t).epsilon(1e-12));
}

TEST_CASE("modal lift and sampled shape agree") {
  auto p = wave_params(1, 3, 0.5);
  const int n_cells = 300;
  ModalState s = ModalState::zero(8);
  s.a[0] = 1.0;
  s.a[2] = -0.3;
  s.adot[1] = 0.4;
  const auto f = riemann_from_modal(s, p, n_cells);
  const FieldShape shape = from_riemann(f);

  Vector mids(n_cells);
  for (int i = 0; i < n_cells; ++i) mids[i] = (i + 0.5) * f.dx;
  const FieldSample sample = synthesize(s, p, mids);
  CHECK((shape.vt_mid - sample.vt).cwiseAbs().maxCoeff() < 1e-12);
  // v is reconstructed by integrating vx from the clamped end; midpoint
  // sampling of the slope is second order in dx
  CHECK((shape.v_mid - sample.v).cwiseAbs().maxCoeff() < 5e-4);
  CHECK(l2_gap_midpoints(f, s, p) < 3e-4);

  // energy of the transported field matches the cable energy of the state
  const double e_field = field_energy(f);
  const double e_modal = total_energy(s, p).cable_kinetic +
                         total_energy(s, p).cable_potential;
  CHECK(e_field == doctest::Approx(e_modal).epsilon(1e-4));
}

TEST_CASE("to_riemann validates sample shapes") {
  auto p = wave_params(1, 2, 0.0);
  CHECK_THROWS_AS((void)to_riemann(Vector::Zero(5), Vector::Zero(10), p, 10),
                  DomainError);
}
