#pragma once

#include <Eigen/LU>
#include <string>
#include <vector>

#include "bridgelab/generator.hpp"
#include "bridgelab/model.hpp"
#include "bridgelab/nonlinearity.hpp"
#include "bridgelab/types.hpp"

namespace bridgelab {

enum class Scheme { MidpointLinear, ImexMidpoint };

std::string to_string(Scheme s);

struct TrajectoryRecord {
  double dt = 0.0;
  int stride = 1;
  Scheme scheme = Scheme::MidpointLinear;
  double fixed_point_tol = 1e-12;
  int fixed_point_max_iters = 50;

  // Stored samples (every `stride` steps, plus the final step).
  std::vector<double> times;
  std::vector<Vector> states;  // packed physical coordinates
  std::vector<EnergyBreakdown> breakdowns;
  std::vector<double> energies;       // = breakdowns[i].total
  std::vector<double> damping_power;  // at the stored states

  // Per-step series (always dense, independent of stride).
  std::vector<double> step_energy;     // n_steps + 1
  std::vector<double> step_power_mid;  // damping power at each midpoint state
  std::vector<double> nonlinear_work;  // dt * <F(U_mid) + f, U_mid>_E per step
  std::vector<int> imex_iterations;    // 0 for linear steps

  int n_steps() const { return static_cast<int>(step_power_mid.size()); }
  double horizon() const { return n_steps() * dt; }
};

struct DecayFit {
  double mu_fit = 0.0;  // energy e^{-2 mu t}  =>  mu = -slope/2
  double intercept = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;
  double residual = 0.0;  // rms misfit of log E
  int n_points = 0;
};

struct WorkBoundReport {
  double eps = 0.25;
  double kappa0 = 0.0;
  double c_eps = 0.0;
  double g_max = 0.0;  // max_t [ integral(t) - eps*||U(t)||^2 - c_eps*||F(0)||^2 ]
  std::vector<double> lhs;  // running trapezoid integral of <F(U),U>_E at samples
};

// Cayley update Y+ = (I - dt/2 A_E)^{-1} (I + dt/2 A_E) Y in energy
// coordinates; the factorization is cached for the lifetime of the stepper.
// Negative dt is accepted (it is the exact inverse map, used by the
// reversibility checks).
class MidpointStepper {
 public:
  MidpointStepper(const DiscreteGenerator& gen, double dt);

  double dt() const { return dt_; }
  const DiscreteGenerator& generator() const { return *gen_; }

  // Linear step in energy coordinates.
  Vector step(const Vector& y_energy) const;

  // Semilinear step in place; the nonlinearity is resolved by fixed-point
  // iteration at the midpoint (tol 1e-12, max 50 sweeps). Returns the
  // iteration count; optional outputs receive the midpoint damping power, the
  // nonlinear work dt*<F_mid, U_mid>_E of the accepted step, and the lifted
  // midpoint force (energy coordinates) actually applied.
  int step_imex(const NonlinearitySpec& spec, const ModalLifter& lifter, Vector& y_energy,
                double* power_mid = nullptr, double* work_mid = nullptr,
                Vector* f_mid_energy = nullptr) const;

  // Linear step with a frozen source: solves (I - dt/2 A_E) y+ =
  // (I + dt/2 A_E) y + dt*source. Feeding the force vectors recorded from
  // two sibling runs makes their difference flow satisfy the same update
  // exactly, which the decomposition experiments rely on.
  Vector step_with_source(const Vector& y_energy, const Vector& source_energy) const;

  static constexpr double kFixedPointTol = 1e-12;
  static constexpr int kMaxFixedPointIters = 50;

 private:
  const DiscreteGenerator* gen_;
  double dt_;
  Matrix forward_;  // I + dt/2 A_E
  Eigen::PartialPivLU<Matrix> lu_;
};

// Single-step conveniences in physical coordinates. These factorize per call;
// simulate() caches instead.
Vector step_midpoint_linear(const DiscreteGenerator& gen, const Vector& packed, double dt);
Vector step_imex_semilinear(const DiscreteGenerator& gen, const NonlinearitySpec& spec,
                            const Vector& packed, double dt);

TrajectoryRecord simulate(const DiscreteGenerator& gen, const NonlinearitySpec& spec,
                          const Vector& initial_packed, double T, double dt,
                          int stride = 1);
TrajectoryRecord simulate(const ModelParams& params, int n_modes,
                          const NonlinearitySpec& spec, const ModalState& initial,
                          double T, double dt, int stride = 1);

// Max over steps of |E+ - E + dt*P_mid - W_mid| / E(0). The per-step series
// make this an algebraic identity of the scheme, so the result sits at
// roundoff for well-resolved runs.
double dissipation_residual(const TrajectoryRecord& record);

// Least squares on (t, log E) over [t_begin, t_end] using the dense per-step
// energy series. Negative bounds select the default window (drop the first
// 20% of the horizon).
DecayFit fit_decay_rate(const TrajectoryRecord& record, double t_begin = -1.0,
                        double t_end = -1.0);

// Running integral of <F(U), U>_E versus the absorbing-type bound
// kappa0*||U0||^2 + eps*||U(t)||^2 + c_eps*||F(0)||^2 at eps = 1/4.
// Reported, never asserted.
WorkBoundReport work_bound_diagnostic(const TrajectoryRecord& record, const NonlinearitySpec& spec,
                         const DiscreteGenerator& gen);

}  // namespace bridgelab
