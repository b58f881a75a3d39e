#include "bridgelab/characteristics.hpp"

#include <cmath>

#include "bridgelab/errors.hpp"

namespace bridgelab {

namespace {

int checked_interface_index(const ModelParams& p, int n_cells) {
  if (n_cells < 2) throw ValidationError({"need at least two cells"});
  if (p.k != 0.0)
    throw ValidationError({"characteristics solver covers the k = 0 (decoupled) regime"});
  const double dx = p.ell / n_cells;
  const double ratio = p.xi / dx;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) > 1e-9 * n_cells)
    throw IncommensurableXi("xi is not an integer multiple of dx = ell/" +
                            std::to_string(n_cells));
  const int ix = static_cast<int>(nearest);
  if (ix < 1 || ix > n_cells - 1)
    throw ValidationError({"damper must sit strictly inside the grid"});
  return ix;
}

}  // namespace

RiemannField make_field(const ModelParams& params, int n_cells) {
  validate_params(params);
  RiemannField f;
  f.interface_index = checked_interface_index(params, n_cells);
  f.dx = params.ell / n_cells;
  f.k1 = params.wave_speed();
  f.gamma = params.gamma;
  f.t = 0.0;
  f.p = Vector::Zero(n_cells);
  f.q = Vector::Zero(n_cells);
  return f;
}

RiemannField to_riemann(const Vector& v_nodes, const Vector& vt_mid,
                        const ModelParams& params, int n_cells) {
  if (v_nodes.size() != n_cells + 1 || vt_mid.size() != n_cells)
    throw DomainError("to_riemann: v needs n_cells+1 node samples, v_t n_cells midpoints");
  RiemannField f = make_field(params, n_cells);
  for (int i = 0; i < n_cells; ++i) {
    const double vx = (v_nodes[i + 1] - v_nodes[i]) / f.dx;
    f.p[i] = vt_mid[i] - f.k1 * vx;
    f.q[i] = vt_mid[i] + f.k1 * vx;
  }
  return f;
}

RiemannField riemann_from_modal(const ModalState& s, const ModelParams& params, int n_cells) {
  RiemannField f = make_field(params, n_cells);
  Vector xm(n_cells);
  for (int i = 0; i < n_cells; ++i) xm[i] = (i + 0.5) * f.dx;
  const FieldSample fs = synthesize(s, params, xm);
  const Vector vx = synthesize_cable_slope(s, params, xm);
  f.p = fs.vt - f.k1 * vx;
  f.q = fs.vt + f.k1 * vx;
  return f;
}

FieldShape from_riemann(const RiemannField& f) {
  const int n = static_cast<int>(f.p.size());
  FieldShape out;
  out.vt_mid = 0.5 * (f.p + f.q);
  out.vx_mid = (f.q - f.p) / (2.0 * f.k1);
  out.v_nodes = Vector(n + 1);
  out.v_nodes[0] = 0.0;
  for (int i = 0; i < n; ++i) out.v_nodes[i + 1] = out.v_nodes[i] + f.dx * out.vx_mid[i];
  out.v_mid = 0.5 * (out.v_nodes.head(n) + out.v_nodes.tail(n));
  return out;
}

double field_energy(const RiemannField& f) {
  return (f.dx / 4.0) * (f.p.squaredNorm() + f.q.squaredNorm());
}

namespace {

// One exact shift step; returns the damper power at the event midpoint.
double step_once(RiemannField& f, Vector& ps, Vector& qs) {
  const int n = static_cast<int>(f.p.size());
  const int ix = f.interface_index;
  const double a = f.p[ix - 1];
  const double d = f.q[ix];
  const auto sc = scatter(a, d, f.gamma, f.k1);

  ps[0] = -f.q[0];
  for (int i = 1; i < n; ++i) ps[i] = f.p[i - 1];
  ps[ix] = sc.transmitted_p;

  for (int i = 0; i + 1 < n; ++i) qs[i] = f.q[i + 1];
  qs[n - 1] = f.p[n - 1];
  qs[ix - 1] = sc.reflected_q;

  f.p.swap(ps);
  f.q.swap(qs);
  f.t += f.dx / f.k1;

  const double vt_xi = 0.5 * (sc.transmitted_p + d);
  return f.gamma * vt_xi * vt_xi;
}

}  // namespace

void advance(RiemannField& f, int n_steps) {
  Vector ps(f.p.size()), qs(f.q.size());
  for (int s = 0; s < n_steps; ++s) step_once(f, ps, qs);
}

double l2_gap_midpoints(const RiemannField& f, const ModalState& s, const ModelParams& p) {
  const FieldShape shape = from_riemann(f);
  const int n = static_cast<int>(f.p.size());
  Vector mids(n);
  for (int i = 0; i < n; ++i) mids[i] = (i + 0.5) * f.dx;
  const FieldSample sample = synthesize(s, p, mids);
  return std::sqrt(f.dx * (shape.v_mid - sample.v).squaredNorm());
}

CharacteristicsRun run_characteristics(RiemannField field, double T, int snapshot_stride) {
  CharacteristicsRun run;
  run.dt = field.dx / field.k1;
  const int n_steps = static_cast<int>(std::floor(T / run.dt + 0.5));
  run.energies.reserve(n_steps + 1);
  run.energies.push_back(field_energy(field));
  Vector ps(field.p.size()), qs(field.q.size());
  for (int s = 0; s < n_steps; ++s) {
    const double power = step_once(field, ps, qs);
    run.times.push_back(field.t);
    run.interface_power.push_back(power);
    run.energies.push_back(field_energy(field));
    if (snapshot_stride > 0 && (s + 1) % snapshot_stride == 0) {
      run.snapshot_times.push_back(field.t);
      run.snapshots.push_back(field);
    }
  }
  return run;
}

}  // namespace bridgelab
