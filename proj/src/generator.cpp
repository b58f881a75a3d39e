#include "bridgelab/generator.hpp"

#include <cmath>

#include "bridgelab/errors.hpp"
#include "bridgelab/random.hpp"

namespace bridgelab {

namespace {

// Closed-form square root of the SPD 2x2 block [[p, c], [c, q]].
void sqrt_2x2(double p, double q, double c, double& saa, double& sab, double& sbb) {
  const double s = std::sqrt(p * q - c * c);
  const double t = std::sqrt(p + q + 2.0 * s);
  saa = (p + s) / t;
  sab = c / t;
  sbb = (q + s) / t;
}

double power_norm_estimate(const Matrix& m, int iters) {
  Rng rng(0x5eed);
  Vector v = rng.normal_vector(m.cols());
  v.normalize();
  double nrm = 0.0;
  for (int i = 0; i < iters; ++i) {
    Vector w = m.transpose() * (m * v);
    nrm = std::sqrt(w.norm());
    if (w.norm() == 0.0) break;
    v = w / w.norm();
  }
  return nrm;
}

}  // namespace

DiscreteGenerator assemble_generator(const ModelParams& params, int n_modes) {
  validate_params(params);
  if (n_modes < 1) throw ValidationError({"mode count must be at least 1"});
  if (n_modes > 256) throw ValidationError({"mode count capped at 256 for dense storage"});

  DiscreteGenerator g;
  g.params = params;
  g.n_modes = n_modes;
  g.mu = modal_frequencies(n_modes, params.ell);
  g.phi_xi = Vector(n_modes);
  for (int j = 0; j < n_modes; ++j) g.phi_xi[j] = std::sin(g.mu[j] * params.xi);

  const int n = n_modes;
  const double ell = params.ell;
  g.A = Matrix::Zero(4 * n, 4 * n);
  g.A_E = Matrix::Zero(4 * n, 4 * n);
  g.s_aa = Vector(n);
  g.s_ab = Vector(n);
  g.s_bb = Vector(n);
  g.s_vel = std::sqrt(ell / 2.0);

  for (int j = 0; j < n; ++j) {
    const double mu2 = g.mu[j] * g.mu[j];
    const double cable_stiff = params.beta0 * mu2 + params.k;
    const double deck_stiff = params.alpha * mu2 * mu2 + params.alpha0 * mu2 + params.k;

    g.A(j, n + j) = 1.0;
    g.A(n + j, j) = -cable_stiff;
    g.A(n + j, 2 * n + j) = params.k;
    g.A(2 * n + j, 3 * n + j) = 1.0;
    g.A(3 * n + j, 2 * n + j) = -deck_stiff;
    g.A(3 * n + j, j) = params.k;

    // S position block = sqrt of (ell/2) [[cable_stiff, -k], [-k, deck_stiff]]
    sqrt_2x2((ell / 2.0) * cable_stiff, (ell / 2.0) * deck_stiff, -(ell / 2.0) * params.k,
             g.s_aa[j], g.s_ab[j], g.s_bb[j]);

    // Omega = sqrt(2/ell) * S_pos gives the skew off-diagonal blocks of A_E.
    const double w = std::sqrt(2.0 / ell);
    const double oaa = w * g.s_aa[j];
    const double oab = w * g.s_ab[j];
    const double obb = w * g.s_bb[j];
    g.A_E(j, n + j) = oaa;
    g.A_E(j, 3 * n + j) = oab;
    g.A_E(2 * n + j, n + j) = oab;
    g.A_E(2 * n + j, 3 * n + j) = obb;
    g.A_E(n + j, j) = -oaa;
    g.A_E(n + j, 2 * n + j) = -oab;
    g.A_E(3 * n + j, j) = -oab;
    g.A_E(3 * n + j, 2 * n + j) = -obb;
  }

  const Matrix rank_one = g.phi_xi * g.phi_xi.transpose();
  g.A.block(n, n, n, n) -= (2.0 * params.gamma / ell) * rank_one;
  g.A.block(3 * n, 3 * n, n, n) -= (2.0 * params.gamma0 / ell) * rank_one;
  g.A_E.block(n, n, n, n) -= (2.0 * params.gamma / ell) * rank_one;
  g.A_E.block(3 * n, 3 * n, n, n) -= (2.0 * params.gamma0 / ell) * rank_one;

  g.op_norm_estimate = power_norm_estimate(g.A_E, 30);
  g.lu_energy.compute(g.A_E);
  return g;
}

Vector apply(const DiscreteGenerator& gen, const Vector& packed) {
  if (packed.size() != gen.dim()) throw DomainError("packed state has wrong length");
  return gen.A * packed;
}

double energy_inner(const DiscreteGenerator& g, const Vector& u, const Vector& v) {
  return to_energy(g, u).dot(to_energy(g, v));
}

double energy_norm(const DiscreteGenerator& g, const Vector& u) {
  return to_energy(g, u).norm();
}

double h_minus1_norm(const DiscreteGenerator& g, const Vector& packed) {
  if (packed.size() != g.dim()) throw DomainError("packed state has wrong length");
  return g.lu_energy.solve(to_energy(g, packed)).norm();
}

double smallest_singular_value_estimate(const ShiftedFactorization& f, int dim, int iters) {
  // Power iteration on (M^H M)^{-1} = M^{-1} M^{-H}.
  Rng rng(0x51e5);
  ComplexVector z(dim);
  for (int i = 0; i < dim; ++i) z[i] = Complex(rng.normal(), rng.normal());
  z.normalize();
  double rho = 0.0;
  for (int it = 0; it < iters; ++it) {
    ComplexVector w = f.lu.solve(f.lu.adjoint().solve(z));
    const double nw = w.norm();
    if (!(nw > 0.0) || !std::isfinite(nw)) return 0.0;
    rho = nw;
    z = w / nw;
  }
  return 1.0 / std::sqrt(rho);
}

ShiftedFactorization make_shifted_factorization(const DiscreteGenerator& g, Complex lambda) {
  ShiftedFactorization f;
  f.lambda = lambda;
  f.op_norm = g.op_norm_estimate;
  ComplexMatrix m = (-g.A_E).cast<Complex>();
  m.diagonal().array() += lambda;
  f.lu.compute(m);
  f.sigma_min_estimate = smallest_singular_value_estimate(f, g.dim());
  if (f.sigma_min_estimate < 1e-13 * f.op_norm)
    throw SingularShift(f.sigma_min_estimate, 1e-13 * f.op_norm);
  return f;
}

ShiftedSolveReport solve_shifted(const DiscreteGenerator& g, const ShiftedFactorization& f,
                                 const ComplexVector& rhs) {
  if (rhs.size() != g.dim()) throw DomainError("rhs has wrong length");
  ShiftedSolveReport rep;
  rep.lambda = f.lambda;
  rep.sigma_min_estimate = f.sigma_min_estimate;

  const ComplexVector b = to_energy(g, rhs);
  const double nb = b.norm();
  auto residual_of = [&](const ComplexVector& y) {
    ComplexVector r = b + g.A_E.cast<Complex>() * y - f.lambda * y;
    return r;
  };
  ComplexVector y = f.lu.solve(b);
  // one pass of iterative refinement; cheap and usually buys a few digits
  for (int pass = 0; pass < 2; ++pass) {
    ComplexVector r = residual_of(y);
    if (nb == 0.0 || r.norm() <= 1e-12 * nb) break;
    y += f.lu.solve(r);
  }
  const double res = nb == 0.0 ? 0.0 : residual_of(y).norm() / nb;
  rep.residual = res;
  rep.accepted = res <= 1e-10;
  rep.solution = from_energy(g, y);
  return rep;
}

ShiftedSolveReport solve_shifted(const DiscreteGenerator& g, Complex lambda,
                                 const ComplexVector& rhs) {
  return solve_shifted(g, make_shifted_factorization(g, lambda), rhs);
}

ShiftedSolveReport solve_shifted(const DiscreteGenerator& g, Complex lambda, const Vector& rhs) {
  return solve_shifted(g, lambda, ComplexVector(rhs.cast<Complex>()));
}

}  // namespace bridgelab
