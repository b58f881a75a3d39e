#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/SVD>

#include "bridgelab/errors.hpp"
#include "bridgelab/generator.hpp"
#include "bridgelab/model.hpp"
#include "helpers.hpp"

using namespace bridgelab;

TEST_CASE("single-mode generator matches the hand-computed matrix") {
  // ell = beta0 = alpha = alpha0 = k = 1, gamma = 0.5, gamma0 = 0.25, xi = 1/3
  const auto p = ModelParams::with_ratio(1, 1, 1, 1, 1, 0.5, 0.25, 1, 3);
  const auto g = assemble_generator(p, 1);
  const double mu = M_PI / 2.0;
  const double phi2 = std::pow(std::sin(mu / 3.0), 2);  // = 1/4

  Matrix ref(4, 4);
  ref << 0, 1, 0, 0,                                      //
      -(mu * mu + 1.0), -2.0 * 0.5 * phi2, 1.0, 0,        //
      0, 0, 0, 1,                                         //
      1.0, 0, -(std::pow(mu, 4) + mu * mu + 1.0), -2.0 * 0.25 * phi2;
  CHECK((g.A - ref).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("apply agrees with the assembled matrix") {
  const auto g = assemble_generator(testutil::standard_params(), 12);
  const Vector u = testutil::decaying_state(12, 2);
  const Vector lhs = apply(g, u);
  const Vector rhs = g.A * u;
  CHECK((lhs - rhs).norm() < 1e-13 * rhs.norm());
}

TEST_CASE("energy coordinates: round trip and norm identity") {
  const auto p = testutil::standard_params();
  const auto g = assemble_generator(p, 24);
  const Vector u = testutil::decaying_state(24, 9);

  const Vector y = to_energy(g, u);
  const Vector back = from_energy(g, y);
  CHECK((back - u).norm() < 1e-12 * u.norm());

  // 0.5 ||S u||^2 equals the quadratic energy: the analytic square root of
  // the per-mode weight blocks is exact
  const double e = total_energy(u, p).total;
  CHECK(0.5 * y.squaredNorm() == doctest::Approx(e).epsilon(1e-13));
  CHECK(energy_norm(g, u) == doctest::Approx(std::sqrt(2.0 * e)).epsilon(1e-13));
}

TEST_CASE("energy inner product is symmetric and consistent") {
  const auto g = assemble_generator(testutil::standard_params(), 8);
  const Vector u = testutil::decaying_state(8, 1);
  const Vector v = testutil::decaying_state(8, 2);
  CHECK(energy_inner(g, u, v) == doctest::Approx(energy_inner(g, v, u)).epsilon(1e-13));
  CHECK(energy_inner(g, u, u) ==
        doctest::Approx(energy_norm(g, u) * energy_norm(g, u)).epsilon(1e-12));
}

TEST_CASE("intertwining: S A = A_E S") {
  const auto g = assemble_generator(testutil::standard_params(), 10);
  const Vector u = testutil::decaying_state(10, 4);
  const Vector lhs = to_energy(g, apply(g, u));
  const Vector rhs = g.A_E * to_energy(g, u);
  CHECK((lhs - rhs).norm() < 1e-11 * rhs.norm());
}

TEST_CASE("undamped energy generator is skew") {
  auto p = testutil::standard_params();
  p.gamma = p.gamma0 = 0.0;
  const auto g = assemble_generator(p, 16);
  CHECK((g.A_E + g.A_E.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("damping adds a PSD defect of rank two") {
  const auto g = assemble_generator(testutil::standard_params(), 16);
  const Matrix sym = -(g.A_E + g.A_E.transpose());  // 2x the damping form
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const Vector ev = es.eigenvalues();
  CHECK(ev.minCoeff() > -1e-12);        // PSD
  int positive = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev[i] > 1e-10) ++positive;
  CHECK(positive == 2);
}

TEST_CASE("operator norm estimate tracks the true norm") {
  const auto g = assemble_generator(testutil::standard_params(), 12);
  Eigen::JacobiSVD<Matrix> svd(g.A_E);
  const double exact = svd.singularValues()[0];
  CHECK(g.op_norm_estimate == doctest::Approx(exact).epsilon(0.05));
  // growth like sqrt(alpha) mu_max^2
  const double mu_max = (2.0 * 11 + 1) * M_PI / 2.0;
  CHECK(g.op_norm_estimate == doctest::Approx(mu_max * mu_max).epsilon(0.1));
}

TEST_CASE("extrapolation norm against a dense inverse") {
  const auto g = assemble_generator(testutil::standard_params(), 10);
  const Vector u = testutil::decaying_state(10, 8);
  const Vector y = to_energy(g, u);
  const Vector z = g.A_E.inverse() * y;
  CHECK(h_minus1_norm(g, u) == doctest::Approx(z.norm()).epsilon(1e-9));
}

TEST_CASE("shifted solves") {
  const auto g = assemble_generator(testutil::standard_params(), 12);
  const Complex lambda(0.3, 2.0);
  const auto f = make_shifted_factorization(g, lambda);
  CHECK(f.sigma_min_estimate > 0.0);

  ComplexVector rhs = ComplexVector::Zero(g.dim());
  rhs[3] = Complex(1.0, -0.5);
  rhs[17] = Complex(0.0, 2.0);
  const auto rep = solve_shifted(g, f, rhs);
  CHECK(rep.accepted);
  // rhs and solution live in physical coordinates; the identity holds for
  // the energy form after conjugation
  const ComplexVector sol_e = to_energy(g, ComplexVector(rep.solution));
  const ComplexVector rhs_e = to_energy(g, rhs);
  const ComplexVector resid =
      lambda * sol_e - g.A_E.cast<Complex>() * sol_e - rhs_e;
  CHECK(resid.norm() < 1e-10 * rhs_e.norm());
}

TEST_CASE("shifting onto an exactly undamped eigenvalue is rejected") {
  // xi = 2/3 leaves mode 1 invisible to the damper; with k = 0 that cable
  // mode's eigenvalue i mu_1 stays on the imaginary axis exactly
  auto p = ModelParams::with_ratio(1, 1, 1, 1, 0, 0.5, 0.5, 2, 3);
  const auto g = assemble_generator(p, 8);
  const double mu1 = 3.0 * M_PI / 2.0;
  CHECK_THROWS_AS((void)make_shifted_factorization(g, Complex(0.0, mu1)),
                  SingularShift);
}

TEST_CASE("sigma_min estimate matches a dense SVD") {
  const auto g = assemble_generator(testutil::standard_params(), 8);
  const Complex lambda(0.0, 1.7);
  const auto f = make_shifted_factorization(g, lambda);
  const ComplexMatrix shifted =
      lambda * ComplexMatrix::Identity(g.dim(), g.dim()) - g.A_E.cast<Complex>();
  Eigen::JacobiSVD<ComplexMatrix> svd(shifted);
  const double exact = svd.singularValues()[svd.singularValues().size() - 1];
  CHECK(smallest_singular_value_estimate(f, g.dim()) ==
        doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("assembly rejects out-of-range mode counts") {
  CHECK_THROWS_AS((void)assemble_generator(testutil::standard_params(), 0),
                  ValidationError);
  CHECK_THROWS_AS((void)assemble_generator(testutil::standard_params(), 257),
                  ValidationError);
}
