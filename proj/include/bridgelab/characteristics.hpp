#pragma once

#include <vector>

#include "bridgelab/model.hpp"
#include "bridgelab/types.hpp"

namespace bridgelab {

// Exact transport solver for the cable subsystem (k = 0) written in the
// characteristic variables
//   p = v_t - k1 v_x   (right-moving),   q = v_t + k1 v_x   (left-moving).
// The grid stores midpoint samples of p and q on cells of width dx with
// dt = dx / k1, so each step is a pure shift: sample values are transported
// exactly, reflected at the ends (sign flip at x = 0, none at x = ell), and
// scattered across the damper interface, which must sit on a cell boundary.
struct RiemannField {
  double dx = 0.0;
  double k1 = 1.0;
  double gamma = 0.0;
  double t = 0.0;
  int interface_index = 0;  // damper sits at x = interface_index * dx
  Vector p, q;              // cell midpoint samples
};

// Outgoing characteristic values at the damper. Incoming: a = p(xi-),
// d = q(xi+); outgoing: b = p(xi+), c = q(xi-). Derived from continuity of
// v_t and the flux jump beta0 [[v_x]] = gamma v_t(xi):
//   b = (2a - g d) / (2 + g),   c = b + d - a,   g = gamma / k1.
// Exact power balance: a^2 + d^2 - b^2 - c^2 = g (b + d)^2 / ... see tests;
// written so that gamma = 0 reproduces a and d bitwise.
template <typename S>
struct ScatterResult {
  S transmitted_p;  // b
  S reflected_q;    // c
};

template <typename S>
ScatterResult<S> scatter(S a, S d, S gamma, S k1) {
  const S g = gamma / k1;
  const S b = (S(2) * a - g * d) / (S(2) + g);
  const S c = (b - a) + d;
  return {b, c};
}

// Zero field on n_cells cells; checks that xi and ell are integer multiples
// of dx (throws IncommensurableXi otherwise) and that k = 0.
RiemannField make_field(const ModelParams& params, int n_cells);

// Midpoint p/q from node samples of v (size n_cells+1) and midpoint samples
// of v_t (size n_cells); v_x by first differences, exact at midpoints to
// second order.
RiemannField to_riemann(const Vector& v_nodes, const Vector& vt_mid,
                        const ModelParams& params, int n_cells);

// Exact sampling of a modal state (analytic v_x), for cross-validation runs.
RiemannField riemann_from_modal(const ModalState& s, const ModelParams& params, int n_cells);

struct FieldShape {
  Vector v_nodes;  // reconstructed with v(0) = 0
  Vector v_mid;
  Vector vt_mid;
  Vector vx_mid;
};
FieldShape from_riemann(const RiemannField& f);

// (dx/4) sum (p^2 + q^2), the midpoint quadrature of the cable energy.
double field_energy(const RiemannField& f);

// n_steps exact shift steps of dt = dx / k1 each.
void advance(RiemannField& f, int n_steps);

struct CharacteristicsRun {
  double dt = 0.0;
  std::vector<double> times;            // after each step
  std::vector<double> energies;         // E after each step, energies[0] = E(0)
  std::vector<double> interface_power;  // gamma v_t(xi)^2 per step (midpoint-in-time)
  std::vector<double> snapshot_times;
  std::vector<RiemannField> snapshots;
};

// Runs for floor(T / dt + 1/2) steps recording the per-step energy and
// damper power; the discrete balance E_{n+1} - E_n = -dt * power_n holds to
// roundoff. Snapshots are stored every snapshot_stride steps (0 = none).
CharacteristicsRun run_characteristics(RiemannField field, double T, int snapshot_stride = 0);

// Midpoint-quadrature L2 distance between the field's displacement and the
// modal synthesis of s, used to cross-validate the two discretizations.
double l2_gap_midpoints(const RiemannField& f, const ModalState& s, const ModelParams& p);

}  // namespace bridgelab
