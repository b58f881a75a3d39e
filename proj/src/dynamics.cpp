#include "bridgelab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "bridgelab/errors.hpp"
#include "bridgelab/random.hpp"
#include "bridgelab/threading.hpp"

namespace bridgelab {

namespace {

void check_run_args(const DiscreteGenerator& gen, const NonlinearitySpec& spec,
                    const Vector* initial, double T, double dt, int stride) {
  std::vector<std::string> issues = check_spec(spec);
  if (!(dt > 0.0) || !std::isfinite(dt)) issues.push_back("time step must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) issues.push_back("horizon must be nonnegative");
  if (stride < 1) issues.push_back("stride must be >= 1");
  if (initial != nullptr && initial->size() != gen.dim())
    issues.push_back("initial state has wrong length");
  if (!issues.empty()) throw ValidationError(issues);
}

int step_count(double T, double dt) { return static_cast<int>(std::floor(T / dt + 0.5)); }

}  // namespace

DecompositionRecord decompose(const DiscreteGenerator& gen, const NonlinearitySpec& spec,
                              const Vector& initial_packed, double T, double dt,
                              int stride) {
  check_run_args(gen, spec, &initial_packed, T, dt, stride);
  const int n_steps = step_count(T, dt);

  MidpointStepper stepper(gen, dt);
  ModalLifter lifter(gen.params, gen.n_modes);
  NonlinearitySpec spec_w = spec;
  spec_w.forcing = Vector();

  Vector yu = to_energy(gen, initial_packed);
  Vector yw = yu;
  Vector yv = Vector::Zero(gen.dim());

  DecompositionRecord rec;
  rec.dt = dt;
  rec.stride = stride;

  auto store = [&](int idx) {
    rec.times.push_back(idx * dt);
    rec.u_norm.push_back(yu.norm());
    rec.w_norm.push_back(yw.norm());
    rec.v_norm.push_back(yv.norm());
    rec.max_additivity_gap = std::max(rec.max_additivity_gap, (yu - yw - yv).norm());
    Vector v = from_energy(gen, yv);
    rec.v_gen_norm.push_back(energy_norm(gen, apply(gen, v)));
    rec.u_states.push_back(from_energy(gen, yu));
    rec.w_states.push_back(from_energy(gen, yw));
    rec.v_states.push_back(std::move(v));
  };
  store(0);

  Vector fu, fw;
  for (int i = 0; i < n_steps; ++i) {
    stepper.step_imex(spec, lifter, yu, nullptr, nullptr, &fu);
    stepper.step_imex(spec_w, lifter, yw, nullptr, nullptr, &fw);
    yv = stepper.step_with_source(yv, Vector(fu - fw));
    if ((i + 1) % stride == 0 || i + 1 == n_steps) store(i + 1);
  }

  const int m = static_cast<int>(rec.times.size());
  rec.v_time_deriv.assign(m, 0.0);
  if (m >= 2) {
    auto slope = [&](int lo, int hi) {
      return energy_norm(gen, Vector(rec.v_states[hi] - rec.v_states[lo])) /
             (rec.times[hi] - rec.times[lo]);
    };
    rec.v_time_deriv[0] = slope(0, 1);
    rec.v_time_deriv[m - 1] = slope(m - 2, m - 1);
    for (int k = 1; k + 1 < m; ++k) rec.v_time_deriv[k] = slope(k - 1, k + 1);
  }
  return rec;
}

SplittingReport splitting_audit(const DecompositionRecord& rec,
                                const DiscreteGenerator& gen,
                                const NonlinearitySpec& spec, double tail_start) {
  SplittingReport rep;
  rep.tail_start = tail_start;
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    rep.sup_gen_norm = std::max(rep.sup_gen_norm, rec.v_gen_norm[k]);
    rep.sup_time_deriv = std::max(rep.sup_time_deriv, rec.v_time_deriv[k]);
    if (rec.times[k] >= tail_start)
      rep.sup_gen_norm_tail = std::max(rep.sup_gen_norm_tail, rec.v_gen_norm[k]);
    if (!std::isfinite(rec.v_gen_norm[k]) || !std::isfinite(rec.v_time_deriv[k]))
      rep.finite = false;
  }
  ModalLifter lifter(gen.params, gen.n_modes);
  rep.f0_norm = energy_norm(gen, lifter.lift(spec, Vector::Zero(gen.dim())));
  rep.u0_norm = rec.u_norm.empty() ? 0.0 : rec.u_norm.front();
  const double num = rep.sup_gen_norm + rep.sup_time_deriv;
  const double den = rep.f0_norm + rep.u0_norm;
  if (den > 0.0)
    rep.ratio = num / den;
  else if (num > 0.0) {
    rep.ratio = std::numeric_limits<double>::infinity();
    rep.finite = false;
  }
  return rep;
}

Vector linear_steady_state(const DiscreteGenerator& gen, const Vector& forcing_packed) {
  if (forcing_packed.size() != gen.dim())
    throw ValidationError({"forcing vector has wrong length"});
  const Vector y = gen.lu_energy.solve(Vector(-to_energy(gen, forcing_packed)));
  return from_energy(gen, y);
}

double inverse_norm_estimate(const DiscreteGenerator& gen, int iters) {
  Rng rng(0xab5eULL);
  Vector x = rng.normal_vector(gen.dim());
  x.normalize();
  double sq = 0.0;
  for (int i = 0; i < iters; ++i) {
    const Vector y = gen.lu_energy.solve(x);
    Vector z = gen.lu_energy.transpose().solve(y);
    sq = z.norm();
    if (sq == 0.0) return 0.0;
    x = z / sq;
  }
  return std::sqrt(sq);
}

std::vector<Vector> seeded_ensemble(const DiscreteGenerator& gen, int size, double radius,
                                    std::uint64_t seed) {
  if (size < 1) throw ValidationError({"ensemble size must be positive"});
  if (!(radius > 0.0)) throw ValidationError({"ensemble radius must be positive"});
  std::vector<Vector> out(size);
  for (int i = 0; i < size; ++i) {
    Rng rng(seed + static_cast<std::uint64_t>(i));
    Vector y = rng.normal_vector(gen.dim());
    const double scale = radius * (1.0 - rng.uniform());  // target norm in (0, radius]
    y *= scale / y.norm();
    out[i] = from_energy(gen, y);
  }
  return out;
}

AbsorbingReport absorbing_probe(const DiscreteGenerator& gen, const NonlinearitySpec& spec,
                                double radius, int ensemble_size, double T, double dt,
                                int stride, std::uint64_t seed) {
  check_run_args(gen, spec, nullptr, T, dt, stride);
  const auto inits = seeded_ensemble(gen, ensemble_size, radius, seed);
  const int n_steps = step_count(T, dt);

  MidpointStepper stepper(gen, dt);
  ModalLifter lifter(gen.params, gen.n_modes);

  AbsorbingReport rep;
  rep.ensemble_size = ensemble_size;
  rep.radius = radius;
  rep.tail_start = 0.7 * T;
  rep.times.push_back(0.0);
  for (int i = 0; i < n_steps; ++i)
    if ((i + 1) % stride == 0 || i + 1 == n_steps) rep.times.push_back((i + 1) * dt);

  rep.members.assign(ensemble_size, AbsorbingMember{});
  parallel_for(ensemble_size, [&](int mi) {
    AbsorbingMember& mem = rep.members[mi];
    mem.seed = seed + static_cast<std::uint64_t>(mi);
    Vector y = to_energy(gen, inits[mi]);
    mem.initial_norm = y.norm();
    mem.norms.reserve(rep.times.size());
    mem.norms.push_back(y.norm());
    for (int i = 0; i < n_steps; ++i) {
      stepper.step_imex(spec, lifter, y);
      if ((i + 1) % stride == 0 || i + 1 == n_steps) mem.norms.push_back(y.norm());
    }
  });

  const int ns = static_cast<int>(rep.times.size());
  double c2_hat = 0.0;
  for (const auto& mem : rep.members)
    for (int k = 0; k < ns; ++k)
      if (rep.times[k] >= rep.tail_start) c2_hat = std::max(c2_hat, mem.norms[k]);
  rep.c2_hat = c2_hat;
  rep.ball_radius = 1.05 * c2_hat;

  rep.all_entered = true;
  rep.all_remained = true;
  for (auto& mem : rep.members) {
    // Earliest time from which the trajectory never leaves the ball again.
    int last_out = -1;
    for (int k = 0; k < ns; ++k)
      if (mem.norms[k] > rep.ball_radius) last_out = k;
    if (last_out + 1 < ns) {
      mem.entered = true;
      mem.remained = true;
      mem.entry_time = rep.times[last_out + 1];
    } else {
      mem.entered = false;
      mem.remained = false;
      mem.entry_time = std::numeric_limits<double>::infinity();
      rep.all_entered = false;
      rep.all_remained = false;
    }
  }

  // Envelope fit: freeze c2 at the measured tail level, then log-linear fit
  // of the excess against c1 e^{-mu t} R.
  std::vector<double> env(ns, 0.0);
  for (int k = 0; k < ns; ++k)
    for (const auto& mem : rep.members) env[k] = std::max(env[k], mem.norms[k]);
  rep.c2 = c2_hat;
  const double thresh = std::max(1e-12, 1e-9 * radius);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int k = 0; k < ns; ++k) {
    const double excess = env[k] - rep.c2;
    if (excess <= thresh) continue;
    const double t = rep.times[k], le = std::log(excess);
    sx += t;
    sy += le;
    sxx += t * t;
    sxy += t * le;
    ++n;
  }
  if (n >= 2) {
    const double det = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy * sxx - sx * sxy) / det;
    rep.mu = -slope;
    rep.c1 = std::exp(intercept) / radius;
  }
  double ss = 0.0;
  for (int k = 0; k < ns; ++k) {
    const double model = rep.c1 * std::exp(-rep.mu * rep.times[k]) * radius + rep.c2;
    const double r = (env[k] - model) / radius;
    ss += r * r;
  }
  rep.envelope_residual = std::sqrt(ss / ns);
  return rep;
}

AttractorReport attractor_probe(const DiscreteGenerator& gen, const NonlinearitySpec& spec,
                                const std::vector<Vector>& initial_states, double T,
                                double dt, int stride, double window) {
  check_run_args(gen, spec, nullptr, T, dt, stride);
  const int m = static_cast<int>(initial_states.size());
  if (m < 2) throw ValidationError({"attractor probe needs at least two members"});
  for (const auto& u : initial_states)
    if (u.size() != gen.dim()) throw ValidationError({"member state has wrong length"});
  if (!(window > 0.0)) throw ValidationError({"window must be positive"});

  const int n_steps = step_count(T, dt);
  MidpointStepper stepper(gen, dt);
  ModalLifter lifter(gen.params, gen.n_modes);

  AttractorReport rep;
  rep.ensemble_size = m;
  rep.window = window;
  // Uniform sampling only (no extra final sample) so window arithmetic stays
  // on the grid.
  rep.times.push_back(0.0);
  for (int i = 0; i < n_steps; ++i)
    if ((i + 1) % stride == 0) rep.times.push_back((i + 1) * dt);
  const int ns = static_cast<int>(rep.times.size());

  std::vector<std::vector<Vector>> traj(m);
  parallel_for(m, [&](int mi) {
    Vector y = to_energy(gen, initial_states[mi]);
    auto& t = traj[mi];
    t.reserve(ns);
    t.push_back(from_energy(gen, y));
    for (int i = 0; i < n_steps; ++i) {
      stepper.step_imex(spec, lifter, y);
      if ((i + 1) % stride == 0) t.push_back(from_energy(gen, y));
    }
  });

  const int n_pairs = m * (m - 1) / 2;
  std::vector<std::vector<double>> pair_e(n_pairs), pair_h(n_pairs);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n_pairs);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  std::vector<double> pair_quasi(n_pairs, 0.0);
  parallel_for(n_pairs, [&](int p) {
    const auto [i, j] = pairs[p];
    auto& de = pair_e[p];
    auto& dh = pair_h[p];
    de.resize(ns);
    dh.resize(ns);
    const int n = gen.n_modes;
    for (int k = 0; k < ns; ++k) {
      Vector d = traj[i][k] - traj[j][k];
      de[k] = energy_norm(gen, d);
      dh[k] = h_minus1_norm(gen, d);
      d.segment(n, n).setZero();
      d.segment(3 * n, n).setZero();
      pair_quasi[p] = std::max(pair_quasi[p], energy_norm(gen, d));
    }
  });

  rep.max_pair_energy.assign(ns, 0.0);
  rep.max_pair_hminus1.assign(ns, 0.0);
  for (int p = 0; p < n_pairs; ++p) {
    rep.quasi_seminorm = std::max(rep.quasi_seminorm, pair_quasi[p]);
    for (int k = 0; k < ns; ++k) {
      rep.max_pair_energy[k] = std::max(rep.max_pair_energy[k], pair_e[p][k]);
      rep.max_pair_hminus1[k] = std::max(rep.max_pair_hminus1[k], pair_h[p][k]);
    }
  }

  const double ds = stride * dt;
  const int wsteps = std::max(1, static_cast<int>(std::floor(window / ds + 0.5)));
  for (int k = 0; k + wsteps < ns; ++k) {
    double factor = 0.0;
    bool any = false;
    for (int p = 0; p < n_pairs; ++p) {
      const double d0 = pair_e[p][k];
      if (d0 > 1e-300) {
        factor = std::max(factor, pair_e[p][k + wsteps] / d0);
        any = true;
      }
    }
    if (any) {
      rep.contraction_times.push_back(rep.times[k]);
      rep.contraction_factors.push_back(factor);
    }
  }

  rep.final_pairwise_energy = Matrix::Zero(m, m);
  rep.final_pairwise_hminus1 = Matrix::Zero(m, m);
  for (int p = 0; p < n_pairs; ++p) {
    const auto [i, j] = pairs[p];
    rep.final_pairwise_energy(i, j) = rep.final_pairwise_energy(j, i) = pair_e[p][ns - 1];
    rep.final_pairwise_hminus1(i, j) = rep.final_pairwise_hminus1(j, i) =
        pair_h[p][ns - 1];
  }

  // Box-counting estimate over the late-time cloud, projected onto the
  // highest-variance modal coordinates (between 2 and 6 of them).
  std::vector<const Vector*> cloud;
  for (int k = 0; k < ns; ++k)
    if (rep.times[k] >= 0.75 * T)
      for (int mi = 0; mi < m; ++mi) cloud.push_back(&traj[mi][k]);
  const int dim = gen.dim();
  Vector mean = Vector::Zero(dim), var = Vector::Zero(dim);
  for (const Vector* x : cloud) mean += *x;
  mean /= static_cast<double>(cloud.size());
  for (const Vector* x : cloud) var += (*x - mean).cwiseAbs2();
  var /= static_cast<double>(cloud.size());

  std::vector<int> order(dim);
  for (int i = 0; i < dim; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return var[a] > var[b]; });
  const double var_max = var[order[0]];
  int n_sig = 0;
  for (int i = 0; i < dim; ++i)
    if (var[order[i]] >= 1e-6 * var_max && var[order[i]] > 0.0) ++n_sig;
  const int n_proj = std::clamp(n_sig, 2, 6);
  rep.box.coords.assign(order.begin(), order.begin() + n_proj);

  double side = 0.0;
  std::vector<double> lo(n_proj, 0.0), hi(n_proj, 0.0);
  for (int c = 0; c < n_proj; ++c) {
    double mn = std::numeric_limits<double>::infinity(), mx = -mn;
    for (const Vector* x : cloud) {
      mn = std::min(mn, (*x)[rep.box.coords[c]]);
      mx = std::max(mx, (*x)[rep.box.coords[c]]);
    }
    lo[c] = mn;
    hi[c] = mx;
    side = std::max(side, mx - mn);
  }
  for (int level = 0; level < 3; ++level) {
    const double cells = 4.0 * (1 << level);
    const double eps = side > 0.0 ? side / cells : 1.0;
    rep.box.epsilons.push_back(eps);
    if (side <= 0.0) {
      rep.box.counts.push_back(1);
      continue;
    }
    std::set<std::vector<long>> occupied;
    for (const Vector* x : cloud) {
      std::vector<long> key(n_proj);
      for (int c = 0; c < n_proj; ++c) {
        long idx = static_cast<long>(std::floor(((*x)[rep.box.coords[c]] - lo[c]) / eps));
        const long max_idx = static_cast<long>(cells) - 1;
        key[c] = std::clamp(idx, 0L, max_idx);
      }
      occupied.insert(std::move(key));
    }
    rep.box.counts.push_back(static_cast<long>(occupied.size()));
  }
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(rep.box.epsilons.size());
    for (int i = 0; i < n; ++i) {
      const double x = std::log(1.0 / rep.box.epsilons[i]);
      const double y = std::log(static_cast<double>(rep.box.counts[i]));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double det = n * sxx - sx * sx;
    rep.box.dimension = det != 0.0 ? (n * sxy - sx * sy) / det : 0.0;
  }
  return rep;
}

}  // namespace bridgelab
