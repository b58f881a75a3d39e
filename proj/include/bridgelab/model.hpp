#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bridgelab/types.hpp"

namespace bridgelab {

// Reduced fraction, den > 0. Used for exact damping-point arithmetic.
struct Rational {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Rational reduce(long long num, long long den);

// Coupled cable/deck model on (0, ell):
//   cable: v_tt - beta0 v_xx + k (v - u) + gamma v_t(xi) delta_xi = F
//   deck:  u_tt + alpha u_xxxx - alpha0 u_xx + k (u - v) + gamma0 u_t(xi) delta_xi = G
// with v(0) = v_x(ell) = 0 and u(0) = u_xx(0) = u_x(ell) = u_xxx(ell) = 0.
// Both fields share the sine eigenbasis sin(mu_j x), mu_j = (2j+1)pi/(2 ell).
struct ModelParams {
  double ell = 1.0;     // span length
  double beta0 = 1.0;   // cable tension (wave speed squared)
  double alpha = 1.0;   // deck flexural rigidity
  double alpha0 = 0.0;  // deck axial tension
  double k = 0.0;       // suspender stiffness coupling cable and deck
  double gamma = 0.0;   // cable damper intensity at xi
  double gamma0 = 0.0;  // deck damper intensity at xi
  double xi = 0.5;      // damper location, absolute coordinate in (0, ell)
  // Set when xi was given exactly as a fraction of ell; enables the exact
  // admissibility classification.
  std::optional<Rational> xi_ratio;

  double wave_speed() const;  // k1 = sqrt(beta0)

  static ModelParams with_ratio(double ell, double beta0, double alpha, double alpha0,
                                double k, double gamma, double gamma0, long long p,
                                long long q);
};

// All violations, empty when the parameter set is admissible.
std::vector<std::string> check_params(const ModelParams& p);
// Throws ValidationError listing every violation.
ModelParams validate_params(const ModelParams& p);

enum class DampingPointTag {
  ExponentialAdmissible,  // xi/ell = odd/odd: every mode sees the damper
  UndampedModeExists,     // xi/ell = even/odd: some mode has a node at xi
  NoGuarantee,            // even denominator, or xi not given exactly
};

struct DampingPointClass {
  DampingPointTag tag = DampingPointTag::NoGuarantee;
  std::optional<Rational> ratio;       // the reduced fraction used for the decision
  std::optional<int> witness_mode;     // smallest j with sin(mu_j xi) = 0
  std::optional<Rational> nearest;     // closest p/q, q <= 64, for float input
  double nearest_error = 0.0;          // |xi/ell - nearest|
};

// Exact decision from the reduced ratio xi/ell = p/q, 0 < p < q.
DampingPointClass classify_damping_point(const Rational& ratio);
// Float path: never claims exactness, reports the nearest rational instead.
DampingPointClass classify_damping_point(double xi_over_ell);
// Dispatches on whether params carry an exact ratio.
DampingPointClass classify_damping_point(const ModelParams& p);

const char* to_string(DampingPointTag tag);

// Modal coefficients of (v, v_t, u, u_t) in the shared sine basis.
// Packed layout: [a; adot; b; bdot], length 4N.
struct ModalState {
  Vector a;     // cable displacement
  Vector adot;  // cable velocity
  Vector b;     // deck displacement
  Vector bdot;  // deck velocity

  static ModalState zero(int n_modes);
  static ModalState from_packed(const Vector& u);
  Vector packed() const;
  int n_modes() const { return static_cast<int>(a.size()); }
};

// mu_j for j = 0..N-1
double modal_frequency(int j, double ell);
Vector modal_frequencies(int n_modes, double ell);

// Basis values sin(mu_j x_i) as an (x.size() by N) matrix.
Matrix basis_matrix(const Vector& x, int n_modes, double ell);
// Basis slope values mu_j cos(mu_j x_i).
Matrix basis_slope_matrix(const Vector& x, int n_modes, double ell);

// Physical fields sampled at the points x.
struct FieldSample {
  Vector v, vt, u, ut;
};
FieldSample synthesize(const ModalState& s, const ModelParams& p, const Vector& x);
// Cable slope v_x at the points x (analytic, used by the characteristics solver).
Vector synthesize_cable_slope(const ModalState& s, const ModelParams& p, const Vector& x);

// Energy of the discretized system,
//   E = (ell/4) [ sum adot^2 + beta0 sum mu^2 a^2
//               + sum bdot^2 + alpha sum mu^4 b^2 + alpha0 sum mu^2 b^2
//               + k sum (a-b)^2 ],
// so that dE/dt = -gamma v_t(xi)^2 - gamma0 u_t(xi)^2 along solutions.
struct EnergyBreakdown {
  double cable_kinetic = 0.0;
  double cable_potential = 0.0;
  double deck_kinetic = 0.0;
  double deck_bending = 0.0;
  double deck_tension = 0.0;
  double coupling = 0.0;
  double total = 0.0;
};

EnergyBreakdown total_energy(const ModalState& s, const ModelParams& p);
EnergyBreakdown total_energy(const Vector& packed, const ModelParams& p);

// Instantaneous damper power gamma v_t(xi)^2 + gamma0 u_t(xi)^2.
double damping_power(const ModalState& s, const ModelParams& p);
double damping_power(const Vector& packed, const ModelParams& p);

}  // namespace bridgelab
