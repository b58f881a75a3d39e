#pragma once

#include <vector>

#include "bridgelab/generator.hpp"

namespace bridgelab {

struct SpectrumReport {
  int n_modes = 0;
  std::vector<Complex> eigenvalues;    // sorted by (imag, real)
  double spectral_abscissa = 0.0;      // max Re
  double axis_gap = 0.0;               // min |Re|
  std::vector<int> undamped_witnesses; // modes j < N with sin(mu_j xi) = 0 exactly
};

// Dense eigensolve of the generator in energy coordinates (the physical and
// energy forms are similar, so the spectra agree; the energy form keeps the
// eigensolve backward error at the scale of mu_max^2 instead of mu_max^4).
SpectrumReport eigenvalues(const DiscreteGenerator& gen);

double spectral_abscissa(const ModelParams& params, int n_modes);

enum class SigmaMinMethod { Svd, Estimate };

struct ResolventSweep {
  std::vector<double> lambdas;
  std::vector<double> norms;   // ||(i lambda - A)^-1|| in the energy metric; inf at eigenvalues
  double sup_norm = 0.0;
  bool sup_is_finite = true;
  SigmaMinMethod method = SigmaMinMethod::Svd;
};

// Resolvent norms along the imaginary axis on a uniform grid over
// [0, lambda_max] (the norm is even in lambda since A is real).
ResolventSweep pruss_sweep(const DiscreteGenerator& gen, double lambda_max, int n_grid,
                           SigmaMinMethod method = SigmaMinMethod::Svd);

// The transmission lower-bound function for the cable subsystem,
//   F_xi(lambda) = cos^2(lambda ell / k1)
//                + (gamma/k1)^2 sin^2(lambda xi / k1) cos^2(lambda (ell - xi) / k1).
// Its infimum over lambda is positive exactly when no undamped mode exists.
double transmission_function(double lambda, const ModelParams& p);

struct TransmissionInfOptions {
  int n_samples = 200000;     // samples per period (at least 1e5 enforced)
  double window = 0.0;        // sweep window for non-rational xi (required then)
  double zero_tol = 1e-12;    // minima below this are reported as exact zeros
};

struct TransmissionInfReport {
  double value = 0.0;      // raw_min, snapped to 0 when below zero_tol
  double raw_min = 0.0;
  double argmin = 0.0;
  double period = 0.0;     // 0 when xi is not an exact rational multiple of ell
  bool exhaustive = false; // true when one full period was scanned
  int n_samples = 0;
};

// Samples one full period (rational xi/ell) or a user window (otherwise),
// then polishes the best candidates by golden-section search.
TransmissionInfReport transmission_infimum(const ModelParams& p,
                                           const TransmissionInfOptions& opt = {});

}  // namespace bridgelab
