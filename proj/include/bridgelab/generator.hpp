#pragma once

#include <Eigen/LU>

#include "bridgelab/model.hpp"
#include "bridgelab/types.hpp"

namespace bridgelab {

// Dense Galerkin truncation of the damped generator on the first N modes,
// acting on packed states U = [a; adot; b; bdot]:
//   a'    = adot
//   adot' = -beta0 M^2 a - k (a - b) - (2 gamma  / ell) phi_xi (phi_xi . adot)
//   b'    = bdot
//   bdot' = -(alpha M^4 + alpha0 M^2) b - k (b - a) - (2 gamma0 / ell) phi_xi (phi_xi . bdot)
// with M = diag(mu_j), phi_xi[j] = sin(mu_j xi).
//
// Alongside the physical matrix A the assembly also builds A_E = S A S^-1,
// the same operator in coordinates where the Euclidean norm is the energy
// norm (S^T S = W, the energy weight). A_E is skew plus a PSD rank-<=2
// damping block, so eigensolves and time stepping on A_E are well
// conditioned even though ||A|| grows like mu_max^4. S is block 2x2 per
// mode (the a_j/b_j pair) and diagonal on velocities, so the transforms
// below are cheap and do not amplify roundoff.
struct DiscreteGenerator {
  ModelParams params;
  int n_modes = 0;
  Vector mu;      // modal frequencies
  Vector phi_xi;  // basis values at the damping point
  Matrix A;       // physical coordinates, 4N x 4N
  Matrix A_E;     // energy coordinates, same packed layout

  // Entries of the per-mode 2x2 position block of S = W^{1/2} and the
  // scalar velocity weight sqrt(ell/2).
  Vector s_aa, s_ab, s_bb;
  double s_vel = 1.0;

  double op_norm_estimate = 0.0;            // ||A_E||_2, power-iteration estimate
  Eigen::PartialPivLU<Matrix> lu_energy;    // factorization of A_E

  int dim() const { return 4 * n_modes; }
};

DiscreteGenerator assemble_generator(const ModelParams& params, int n_modes);

// A applied to a packed physical state.
Vector apply(const DiscreteGenerator& gen, const Vector& packed);

// Physical <-> energy coordinate maps (elementwise per mode; work for real
// and complex vectors).
template <typename Vec>
Vec to_energy(const DiscreteGenerator& g, const Vec& u) {
  const Eigen::Index n = g.n_modes;
  Vec y(4 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    y[j] = g.s_aa[j] * u[j] + g.s_ab[j] * u[2 * n + j];
    y[2 * n + j] = g.s_ab[j] * u[j] + g.s_bb[j] * u[2 * n + j];
    y[n + j] = g.s_vel * u[n + j];
    y[3 * n + j] = g.s_vel * u[3 * n + j];
  }
  return y;
}

template <typename Vec>
Vec from_energy(const DiscreteGenerator& g, const Vec& y) {
  const Eigen::Index n = g.n_modes;
  Vec u(4 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double det = g.s_aa[j] * g.s_bb[j] - g.s_ab[j] * g.s_ab[j];
    u[j] = (g.s_bb[j] * y[j] - g.s_ab[j] * y[2 * n + j]) / det;
    u[2 * n + j] = (g.s_aa[j] * y[2 * n + j] - g.s_ab[j] * y[j]) / det;
    u[n + j] = y[n + j] / g.s_vel;
    u[3 * n + j] = y[3 * n + j] / g.s_vel;
  }
  return u;
}

// Energy inner product <U, V>_E = U^T W V; note ||U||_E^2 = 2 E(U).
double energy_inner(const DiscreteGenerator& g, const Vector& u, const Vector& v);
double energy_norm(const DiscreteGenerator& g, const Vector& u);

// ||A^-1 U||_E, the discrete version of the extrapolation-space norm.
double h_minus1_norm(const DiscreteGenerator& g, const Vector& packed);

// Factorization of (lambda I - A) for repeated solves at one shift.
// Solves run in energy coordinates; sigma_min and residuals quoted in the
// energy metric.
struct ShiftedFactorization {
  Complex lambda;
  Eigen::PartialPivLU<ComplexMatrix> lu;
  double sigma_min_estimate = 0.0;
  double op_norm = 0.0;  // ||A_E||_2 estimate of the parent generator
};

struct ShiftedSolveReport {
  Complex lambda;
  ComplexVector solution;            // physical coordinates
  double sigma_min_estimate = 0.0;   // of (lambda I - A_E)
  double residual = 0.0;             // ||(lambda I - A) x - rhs||_E / ||rhs||_E
  bool accepted = false;             // residual <= 1e-10
};

// Throws SingularShift when sigma_min < 1e-13 ||A_E||.
ShiftedFactorization make_shifted_factorization(const DiscreteGenerator& g, Complex lambda);
ShiftedSolveReport solve_shifted(const DiscreteGenerator& g, const ShiftedFactorization& f,
                                 const ComplexVector& rhs);
ShiftedSolveReport solve_shifted(const DiscreteGenerator& g, Complex lambda,
                                 const ComplexVector& rhs);
ShiftedSolveReport solve_shifted(const DiscreteGenerator& g, Complex lambda, const Vector& rhs);

// Smallest singular value of (lambda I - A_E) by inverse power iteration on
// the factorization (deterministic start vector).
double smallest_singular_value_estimate(const ShiftedFactorization& f, int dim, int iters = 25);

}  // namespace bridgelab
