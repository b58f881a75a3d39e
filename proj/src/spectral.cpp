#include "bridgelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bridgelab/errors.hpp"
#include "bridgelab/threading.hpp"

namespace bridgelab {

SpectrumReport eigenvalues(const DiscreteGenerator& gen) {
  Eigen::EigenSolver<Matrix> solver(gen.A_E, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("dense eigensolver failed to converge");

  SpectrumReport rep;
  rep.n_modes = gen.n_modes;
  rep.eigenvalues.resize(gen.dim());
  for (int i = 0; i < gen.dim(); ++i) rep.eigenvalues[i] = solver.eigenvalues()[i];
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](Complex x, Complex y) {
    if (x.imag() != y.imag()) return x.imag() < y.imag();
    return x.real() < y.real();
  });

  rep.spectral_abscissa = -std::numeric_limits<double>::infinity();
  rep.axis_gap = std::numeric_limits<double>::infinity();
  for (const Complex& z : rep.eigenvalues) {
    rep.spectral_abscissa = std::max(rep.spectral_abscissa, z.real());
    rep.axis_gap = std::min(rep.axis_gap, std::abs(z.real()));
  }

  const auto cls = classify_damping_point(gen.params);
  if (cls.ratio && cls.ratio->num % 2 == 0) {
    // nodes at xi exactly when q | 2j+1, i.e. j = (q-1)/2 + q t
    const long long q = cls.ratio->den;
    for (long long j = (q - 1) / 2; j < gen.n_modes; j += q)
      rep.undamped_witnesses.push_back(static_cast<int>(j));
  }
  return rep;
}

double spectral_abscissa(const ModelParams& params, int n_modes) {
  return eigenvalues(assemble_generator(params, n_modes)).spectral_abscissa;
}

ResolventSweep pruss_sweep(const DiscreteGenerator& gen, double lambda_max, int n_grid,
                           SigmaMinMethod method) {
  if (!(lambda_max > 0.0) || n_grid < 2)
    throw ValidationError({"pruss sweep needs lambda_max > 0 and at least two grid points"});

  ResolventSweep sweep;
  sweep.method = method;
  sweep.lambdas.resize(n_grid);
  sweep.norms.resize(n_grid);
  const double inf = std::numeric_limits<double>::infinity();
  const double singular_tol = 1e-13 * gen.op_norm_estimate;

  parallel_for(n_grid, [&](int i) {
    const double lam = lambda_max * static_cast<double>(i) / (n_grid - 1);
    sweep.lambdas[i] = lam;
    double sigma = 0.0;
    if (method == SigmaMinMethod::Svd) {
      ComplexMatrix m = (-gen.A_E).cast<Complex>();
      m.diagonal().array() += Complex(0.0, lam);
      Eigen::BDCSVD<ComplexMatrix> svd(m);
      sigma = svd.singularValues().tail(1)(0);
    } else {
      ShiftedFactorization f;
      f.lambda = Complex(0.0, lam);
      f.op_norm = gen.op_norm_estimate;
      ComplexMatrix m = (-gen.A_E).cast<Complex>();
      m.diagonal().array() += f.lambda;
      f.lu.compute(m);
      sigma = smallest_singular_value_estimate(f, gen.dim());
    }
    sweep.norms[i] = sigma <= singular_tol ? inf : 1.0 / sigma;
  });

  sweep.sup_norm = 0.0;
  for (double v : sweep.norms) sweep.sup_norm = std::max(sweep.sup_norm, v);
  sweep.sup_is_finite = std::isfinite(sweep.sup_norm);
  return sweep;
}

double transmission_function(double lambda, const ModelParams& p) {
  const double k1 = p.wave_speed();
  const double c = std::cos(lambda * p.ell / k1);
  const double s = std::sin(lambda * p.xi / k1);
  const double cr = std::cos(lambda * (p.ell - p.xi) / k1);
  const double g = p.gamma / k1;
  return c * c + g * g * s * s * cr * cr;
}

namespace {

// Golden-section minimization on [lo, hi]; assumes a bracketed minimum.
std::pair<double, double> golden_min(const std::function<double(double)>& f, double lo,
                                     double hi, double xtol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > xtol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
    }
  }
  const double xm = 0.5 * (lo + hi);
  return {xm, f(xm)};
}

}  // namespace

TransmissionInfReport transmission_infimum(const ModelParams& p,
                                           const TransmissionInfOptions& opt) {
  validate_params(p);
  TransmissionInfReport rep;
  const double k1 = p.wave_speed();

  double window = 0.0;
  bool periodic = false;
  if (p.xi_ratio) {
    rep.period = 2.0 * M_PI * k1 * static_cast<double>(p.xi_ratio->den) / p.ell;
    window = rep.period;
    periodic = true;
    rep.exhaustive = true;
  } else {
    if (!(opt.window > 0.0))
      throw IrrationalXi(
          "xi is not an exact rational multiple of ell; supply a sweep window");
    window = opt.window;
    rep.exhaustive = false;
  }

  const int n = std::max(opt.n_samples, 100000);
  rep.n_samples = n;
  auto f = [&](double lam) { return transmission_function(lam, p); };

  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = f(window * static_cast<double>(i) / n);
  const double step = window / n;

  // candidate brackets around the sampled local minima (periodic wraparound
  // when a full period was scanned)
  std::vector<std::pair<double, int>> candidates;
  for (int i = 0; i < n; ++i) {
    const int prev = i == 0 ? (periodic ? n - 1 : -1) : i - 1;
    const int next = i == n - 1 ? (periodic ? 0 : -1) : i + 1;
    if (prev < 0 || next < 0) continue;
    if (vals[i] <= vals[prev] && vals[i] <= vals[next]) candidates.push_back({vals[i], i});
  }
  std::sort(candidates.begin(), candidates.end());
  if (candidates.size() > 10) candidates.resize(10);

  double best_val = vals[0];
  double best_arg = 0.0;
  std::vector<std::pair<double, double>> refined;  // (lambda, value)
  refined.reserve(candidates.size());
  for (auto [v, i] : candidates) {
    const double lo = step * (i - 1);
    const double hi = step * (i + 1);
    auto [x, fx] = golden_min(f, lo, hi, 1e-12);
    refined.push_back({x, fx});
    if (fx < best_val) {
      best_val = fx;
      best_arg = x;
    }
  }
  // endpoints of a plain window can also carry the minimum
  if (!periodic) {
    if (vals[n - 1] < best_val) {
      best_val = vals[n - 1];
      best_arg = step * (n - 1);
    }
  }

  rep.raw_min = best_val;
  rep.argmin = best_arg;
  rep.value = best_val < opt.zero_tol ? 0.0 : best_val;
  // a period can hold several equal minima (zeros, or symmetric pairs);
  // report the leftmost so the argmin does not depend on rounding noise
  const double tie = std::max(opt.zero_tol, 1e-9 * std::abs(best_val));
  for (const auto& [x, fx] : refined)
    if (fx <= best_val + tie && x < rep.argmin) rep.argmin = x;
  return rep;
}

}  // namespace bridgelab
