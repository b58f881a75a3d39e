#pragma once

#include <cstdint>
#include <vector>

#include "bridgelab/generator.hpp"
#include "bridgelab/nonlinearity.hpp"
#include "bridgelab/timestepper.hpp"
#include "bridgelab/types.hpp"

namespace bridgelab {

// Splitting U = W + V: W is the comparison flow driven by the forcing-free
// family (which vanishes at the origin for every catalog family), V carries
// the forcing and the force mismatch. All three are advanced with the same
// cached stepper, and V's source reuses the exact midpoint force vectors from
// the U and W updates, so the additivity gap stays at roundoff and is a
// meaningful integrator diagnostic rather than a definition.
struct DecompositionRecord {
  double dt = 0.0;
  int stride = 1;
  std::vector<double> times;
  std::vector<Vector> u_states, w_states, v_states;  // packed physical
  std::vector<double> u_norm, w_norm, v_norm;        // energy norms
  std::vector<double> v_gen_norm;                    // ||A V(t)||_E
  std::vector<double> v_time_deriv;                  // ||V_t||_E by finite differences
  double max_additivity_gap = 0.0;                   // max_t ||U - (W + V)||_E
};

struct SplittingReport {
  double sup_gen_norm = 0.0;       // sup_t ||A V||_E
  double sup_time_deriv = 0.0;     // sup_t ||V_t||_E
  double sup_gen_norm_tail = 0.0;  // same, restricted to t >= tail_start
  double tail_start = 0.0;
  double f0_norm = 0.0;  // ||F(0)||_E (the constant forcing)
  double u0_norm = 0.0;
  double ratio = 0.0;  // (sup ||A V|| + sup ||V_t||) / (||F(0)|| + ||U(0)||)
  bool finite = true;
};

struct AbsorbingMember {
  std::uint64_t seed = 0;
  double initial_norm = 0.0;
  std::vector<double> norms;  // ||U(t)||_E at stored times
  double entry_time = 0.0;
  bool entered = false;
  bool remained = false;
};

struct AbsorbingReport {
  int ensemble_size = 0;
  double radius = 0.0;       // R, bound on ||U0||_E
  double tail_start = 0.0;   // start of the window defining the candidate ball
  double c2_hat = 0.0;       // max member sup over the tail window
  double ball_radius = 0.0;  // 1.05 * c2_hat
  double c1 = 0.0, mu = 0.0, c2 = 0.0;  // envelope fit c1 e^{-mu t} R + c2
  double envelope_residual = 0.0;       // rms misfit / R over all samples
  bool all_entered = false;
  bool all_remained = false;
  std::vector<double> times;
  std::vector<AbsorbingMember> members;
};

struct BoxCountEstimate {
  std::vector<int> coords;       // packed-coordinate indices used for the projection
  std::vector<double> epsilons;  // three grid scales (halving)
  std::vector<long> counts;      // occupied boxes per scale
  double dimension = 0.0;        // least-squares slope of log N vs log 1/eps
};

struct AttractorReport {
  int ensemble_size = 0;
  double window = 0.0;  // t*
  std::vector<double> times;
  std::vector<double> max_pair_energy;   // max pairwise distance, energy norm
  std::vector<double> max_pair_hminus1;  // same in the extrapolation norm
  std::vector<double> contraction_times;
  std::vector<double> contraction_factors;  // max pair ratio over [t, t + t*]
  double quasi_seminorm = 0.0;  // max pair sup_t of the displacement-only gap
  Matrix final_pairwise_energy;
  Matrix final_pairwise_hminus1;
  BoxCountEstimate box;
};

DecompositionRecord decompose(const DiscreteGenerator& gen, const NonlinearitySpec& spec,
                              const Vector& initial_packed, double T, double dt,
                              int stride = 1);

// Sup norms of the regular part V against ||F(0)|| + ||U(0)||. Only
// finiteness is asserted anywhere; magnitudes are reported.
SplittingReport splitting_audit(const DecompositionRecord& record,
                                const DiscreteGenerator& gen,
                                const NonlinearitySpec& spec, double tail_start = 0.0);

// -A^{-1} F, the linear steady state under constant forcing.
Vector linear_steady_state(const DiscreteGenerator& gen, const Vector& forcing_packed);

// ||A_E^{-1}||_2 estimate (power iteration on the cached factorization).
double inverse_norm_estimate(const DiscreteGenerator& gen, int iters = 30);

// Deterministic ensemble of packed states with energy norm in (0, radius].
std::vector<Vector> seeded_ensemble(const DiscreteGenerator& gen, int size, double radius,
                                    std::uint64_t seed);

AbsorbingReport absorbing_probe(const DiscreteGenerator& gen, const NonlinearitySpec& spec,
                                double radius, int ensemble_size, double T, double dt,
                                int stride, std::uint64_t seed);

AttractorReport attractor_probe(const DiscreteGenerator& gen, const NonlinearitySpec& spec,
                                const std::vector<Vector>& initial_states, double T,
                                double dt, int stride, double window);

}  // namespace bridgelab
