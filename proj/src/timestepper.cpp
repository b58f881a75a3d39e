#include "bridgelab/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "bridgelab/errors.hpp"

namespace bridgelab {

std::string to_string(Scheme s) {
  return s == Scheme::MidpointLinear ? "midpoint-linear" : "imex-midpoint";
}

MidpointStepper::MidpointStepper(const DiscreteGenerator& gen, double dt)
    : gen_(&gen), dt_(dt) {
  if (!std::isfinite(dt) || dt == 0.0)
    throw ValidationError({"time step must be nonzero and finite"});
  const int d = gen.dim();
  forward_ = Matrix::Identity(d, d) + (0.5 * dt) * gen.A_E;
  lu_.compute(Matrix::Identity(d, d) - (0.5 * dt) * gen.A_E);
  // The Cayley map degenerates only when 2/dt hits the spectrum of A_E
  // (possible for dt < 0 and an overdamped real eigenvalue); catch it via
  // the pivot spread of the factorization.
  const Vector diag = lu_.matrixLU().diagonal().cwiseAbs();
  const double dmin = diag.minCoeff(), dmax = diag.maxCoeff();
  if (!(dmin > 1e-13 * dmax)) throw SingularShift(dmin, 1e-13 * dmax);
}

Vector MidpointStepper::step(const Vector& y) const { return lu_.solve(forward_ * y); }

Vector MidpointStepper::step_with_source(const Vector& y, const Vector& source) const {
  return lu_.solve(forward_ * y + dt_ * source);
}

int MidpointStepper::step_imex(const NonlinearitySpec& spec, const ModalLifter& lifter,
                               Vector& y, double* power_mid, double* work_mid,
                               Vector* f_mid_energy) const {
  const DiscreteGenerator& g = *gen_;
  const Vector rhs0 = forward_ * y;
  if (spec.family == NonlinearFamily::Zero && spec.forcing.size() == 0) {
    Vector yn = lu_.solve(rhs0);
    if (power_mid != nullptr)
      *power_mid = damping_power(from_energy(g, Vector(0.5 * (y + yn))), g.params);
    if (work_mid != nullptr) *work_mid = 0.0;
    if (f_mid_energy != nullptr) *f_mid_energy = Vector::Zero(g.dim());
    y = std::move(yn);
    return 0;
  }
  Vector yn = lu_.solve(rhs0);
  Vector f_e;
  double prev_delta = -1.0, ratio = 0.0;
  bool converged = false;
  int iters = 0;
  while (iters < kMaxFixedPointIters) {
    const Vector umid = from_energy(g, Vector(0.5 * (y + yn)));
    f_e = to_energy(g, lifter.lift(spec, umid));
    Vector ynew = lu_.solve(rhs0 + dt_ * f_e);
    const double delta = (ynew - yn).norm();
    if (prev_delta > 0.0) ratio = delta / prev_delta;
    prev_delta = delta;
    yn = std::move(ynew);
    ++iters;
    // an overflowed iterate would otherwise pass the test as inf <= inf
    if (!std::isfinite(delta)) break;
    if (delta <= kFixedPointTol * (1.0 + yn.norm())) {
      converged = true;
      break;
    }
  }
  if (!converged) throw FixedPointDivergence(ratio, kMaxFixedPointIters);
  // One consistency refresh: re-evaluate the force at the accepted midpoint
  // and solve once more, so the stored step satisfies its own update equation
  // to roundoff and the work term pairs the force actually applied.
  f_e = to_energy(g, lifter.lift(spec, from_energy(g, Vector(0.5 * (y + yn)))));
  yn = lu_.solve(rhs0 + dt_ * f_e);
  const Vector ymid = 0.5 * (y + yn);
  if (work_mid != nullptr) *work_mid = dt_ * f_e.dot(ymid);
  if (power_mid != nullptr) *power_mid = damping_power(from_energy(g, ymid), g.params);
  if (f_mid_energy != nullptr) *f_mid_energy = std::move(f_e);
  y = std::move(yn);
  return iters;
}

Vector step_midpoint_linear(const DiscreteGenerator& gen, const Vector& packed, double dt) {
  MidpointStepper stepper(gen, dt);
  return from_energy(gen, stepper.step(to_energy(gen, packed)));
}

Vector step_imex_semilinear(const DiscreteGenerator& gen, const NonlinearitySpec& spec,
                            const Vector& packed, double dt) {
  MidpointStepper stepper(gen, dt);
  ModalLifter lifter(gen.params, gen.n_modes);
  Vector y = to_energy(gen, packed);
  stepper.step_imex(validate_spec(spec), lifter, y);
  return from_energy(gen, y);
}

TrajectoryRecord simulate(const DiscreteGenerator& gen, const NonlinearitySpec& spec,
                          const Vector& initial_packed, double T, double dt, int stride) {
  std::vector<std::string> issues = check_spec(spec);
  if (!(dt > 0.0) || !std::isfinite(dt)) issues.push_back("time step must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) issues.push_back("horizon must be nonnegative");
  if (stride < 1) issues.push_back("stride must be >= 1");
  if (initial_packed.size() != gen.dim())
    issues.push_back("initial state has wrong length");
  if (!issues.empty()) throw ValidationError(issues);

  const int n_steps = static_cast<int>(std::floor(T / dt + 0.5));
  const bool linear =
      spec.family == NonlinearFamily::Zero && spec.forcing.size() == 0;

  TrajectoryRecord rec;
  rec.dt = dt;
  rec.stride = stride;
  rec.scheme = linear ? Scheme::MidpointLinear : Scheme::ImexMidpoint;
  rec.fixed_point_tol = MidpointStepper::kFixedPointTol;
  rec.fixed_point_max_iters = MidpointStepper::kMaxFixedPointIters;

  MidpointStepper stepper(gen, dt);
  std::optional<ModalLifter> lifter;
  if (!linear) lifter.emplace(gen.params, gen.n_modes);

  Vector y = to_energy(gen, initial_packed);
  rec.step_energy.reserve(n_steps + 1);
  rec.step_power_mid.reserve(n_steps);
  rec.nonlinear_work.reserve(n_steps);
  rec.imex_iterations.reserve(n_steps);
  rec.step_energy.push_back(0.5 * y.squaredNorm());

  auto store = [&](int step_idx) {
    Vector u = from_energy(gen, y);
    rec.times.push_back(step_idx * dt);
    rec.breakdowns.push_back(total_energy(u, gen.params));
    rec.energies.push_back(rec.breakdowns.back().total);
    rec.damping_power.push_back(damping_power(u, gen.params));
    rec.states.push_back(std::move(u));
  };
  store(0);

  for (int i = 0; i < n_steps; ++i) {
    double power = 0.0, work = 0.0;
    int iters = 0;
    if (linear) {
      Vector yn = stepper.step(y);
      power = damping_power(from_energy(gen, Vector(0.5 * (y + yn))), gen.params);
      y = std::move(yn);
    } else {
      iters = stepper.step_imex(spec, *lifter, y, &power, &work);
    }
    rec.step_energy.push_back(0.5 * y.squaredNorm());
    rec.step_power_mid.push_back(power);
    rec.nonlinear_work.push_back(work);
    rec.imex_iterations.push_back(iters);
    if ((i + 1) % stride == 0 || i + 1 == n_steps) store(i + 1);
  }
  return rec;
}

TrajectoryRecord simulate(const ModelParams& params, int n_modes,
                          const NonlinearitySpec& spec, const ModalState& initial,
                          double T, double dt, int stride) {
  const DiscreteGenerator gen = assemble_generator(params, n_modes);
  return simulate(gen, spec, initial.packed(), T, dt, stride);
}

double dissipation_residual(const TrajectoryRecord& rec) {
  if (rec.stride != 1)
    throw StrideTooCoarse("dissipation audit needs a record produced with stride 1");
  const double e0 = rec.step_energy.empty() ? 0.0 : rec.step_energy.front();
  if (!(e0 > 0.0)) throw ZeroEnergy("dissipation residual is relative to E(0) > 0");
  double worst = 0.0;
  for (int i = 0; i < rec.n_steps(); ++i) {
    const double r = rec.step_energy[i + 1] - rec.step_energy[i] +
                     rec.dt * rec.step_power_mid[i] - rec.nonlinear_work[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst / e0;
}

DecayFit fit_decay_rate(const TrajectoryRecord& rec, double t_begin, double t_end) {
  const double horizon = rec.horizon();
  if (t_begin < 0.0) t_begin = 0.2 * horizon;
  if (t_end < 0.0) t_end = horizon;
  if (!(t_begin < t_end) || t_end > horizon + 0.5 * rec.dt)
    throw ValidationError({"decay fit window must lie inside the trajectory"});

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < static_cast<int>(rec.step_energy.size()); ++i) {
    const double t = i * rec.dt;
    if (t < t_begin || t > t_end) continue;
    const double e = rec.step_energy[i];
    if (!(e > 0.0)) throw ZeroEnergy("energy vanishes inside the decay fit window");
    const double le = std::log(e);
    pts.emplace_back(t, le);
    sx += t;
    sy += le;
    sxx += t * t;
    sxy += t * le;
    ++n;
  }
  if (n < 2) throw ValidationError({"decay fit window contains fewer than two samples"});
  const double det = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy * sxx - sx * sxy) / det;
  double ss = 0.0;
  for (const auto& [t, le] : pts) {
    const double r = le - (intercept + slope * t);
    ss += r * r;
  }
  DecayFit fit;
  fit.mu_fit = -0.5 * slope;
  fit.intercept = intercept;
  fit.t_begin = t_begin;
  fit.t_end = t_end;
  fit.residual = std::sqrt(ss / n);
  fit.n_points = n;
  return fit;
}

WorkBoundReport work_bound_diagnostic(const TrajectoryRecord& rec, const NonlinearitySpec& spec,
                         const DiscreteGenerator& gen) {
  ModalLifter lifter(gen.params, gen.n_modes);
  const int m = static_cast<int>(rec.states.size());
  WorkBoundReport rep;
  if (m == 0) return rep;
  std::vector<double> inner(m);
  for (int i = 0; i < m; ++i)
    inner[i] = energy_inner(gen, lifter.lift(spec, rec.states[i]), rec.states[i]);
  rep.lhs.assign(m, 0.0);
  for (int i = 1; i < m; ++i)
    rep.lhs[i] = rep.lhs[i - 1] +
                 0.5 * (inner[i - 1] + inner[i]) * (rec.times[i] - rec.times[i - 1]);
  double gmax = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i)
    gmax = std::max(gmax, rep.lhs[i] - rep.eps * 2.0 * rec.energies[i]);
  rep.g_max = gmax;
  if (gmax > 0.0) {
    const Vector f0 = lifter.lift(spec, Vector::Zero(gen.dim()));
    const double f0_sq = [&] {
      const double nrm = energy_norm(gen, f0);
      return nrm * nrm;
    }();
    const double u0_sq = 2.0 * rec.energies.front();
    if (f0_sq > 0.0)
      rep.c_eps = gmax / f0_sq;
    else if (u0_sq > 0.0)
      rep.kappa0 = gmax / u0_sq;
  }
  return rep;
}

}  // namespace bridgelab
