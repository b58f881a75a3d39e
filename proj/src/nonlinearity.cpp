#include "bridgelab/nonlinearity.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>
#include <vector>

#include "bridgelab/errors.hpp"
#include "bridgelab/random.hpp"

namespace bridgelab {

NonlinearitySpec NonlinearitySpec::power(double mu1, double alpha, double mu2, double beta,
                                         double R) {
  NonlinearitySpec s;
  s.family = NonlinearFamily::PowerSeparated;
  s.mu1 = mu1;
  s.exp_alpha = alpha;
  s.mu2 = mu2;
  s.exp_beta = beta;
  s.radius = R;
  return s;
}

NonlinearitySpec NonlinearitySpec::gradient(int m, int n, double R) {
  NonlinearitySpec s;
  s.family = NonlinearFamily::GradientPotential;
  s.m = m;
  s.n = n;
  s.radius = R;
  return s;
}

NonlinearitySpec NonlinearitySpec::spring(double k) {
  NonlinearitySpec s;
  s.family = NonlinearFamily::OneSidedSpring;
  s.spring_k = k;
  return s;
}

std::vector<std::string> check_spec(const NonlinearitySpec& s) {
  std::vector<std::string> issues;
  auto bad = [](double x) { return !std::isfinite(x); };
  switch (s.family) {
    case NonlinearFamily::Zero:
      break;
    case NonlinearFamily::PowerSeparated:
      if (!(s.radius > 0.0) || bad(s.radius)) issues.push_back("radius must be positive");
      if (bad(s.mu1) || bad(s.mu2)) issues.push_back("power coefficients must be finite");
      if (!(s.exp_alpha > 0.0) || !(s.exp_beta > 0.0))
        issues.push_back("power exponents must be positive");
      break;
    case NonlinearFamily::GradientPotential:
      if (!(s.radius > 0.0) || bad(s.radius)) issues.push_back("radius must be positive");
      if (s.m < 1 || s.n < 1) issues.push_back("potential exponents must be >= 1");
      break;
    case NonlinearFamily::OneSidedSpring:
      if (!(s.spring_k >= 0.0) || bad(s.spring_k))
        issues.push_back("spring stiffness must be nonnegative");
      break;
  }
  for (int i = 0; i < s.forcing.size(); ++i)
    if (bad(s.forcing[i])) {
      issues.push_back("forcing vector has nonfinite entries");
      break;
    }
  return issues;
}

NonlinearitySpec validate_spec(const NonlinearitySpec& s) {
  auto issues = check_spec(s);
  if (!issues.empty()) throw ValidationError(issues);
  return s;
}

double hermite_blend(double s) {
  if (s < 0.0 || s > 1.0) throw DomainError("hermite_blend: argument outside [0,1]");
  return 1.0 + s * s * s * (-10.0 + s * (15.0 - 6.0 * s));
}

double hermite_blend_derivative(double s) {
  if (s < 0.0 || s > 1.0) throw DomainError("hermite_blend: argument outside [0,1]");
  const double t = s * (1.0 - s);
  return -30.0 * t * t;
}

double hermite_blend_second_derivative(double s) {
  if (s < 0.0 || s > 1.0) throw DomainError("hermite_blend: argument outside [0,1]");
  return -60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
}

double radial_weight(double r, double R, int deg) {
  if (!(R > 0.0)) throw DomainError("radial_weight: R must be positive");
  if (r < 0.0) throw DomainError("radial_weight: negative radius");
  if (r <= R) return 1.0;
  const double tail = std::pow(R / r, deg - 1);
  if (r >= 2.0 * R) return tail;
  const double h = hermite_blend((r - R) / R);
  return h + (1.0 - h) * tail;
}

double radial_weight_derivative(double r, double R, int deg) {
  if (!(R > 0.0)) throw DomainError("radial_weight: R must be positive");
  if (r < 0.0) throw DomainError("radial_weight: negative radius");
  if (r <= R) return 0.0;
  const double tail = std::pow(R / r, deg - 1);
  const double dtail = -(deg - 1) * tail / r;
  if (r >= 2.0 * R) return dtail;
  const double s = (r - R) / R;
  const double h = hermite_blend(s);
  const double hp = hermite_blend_derivative(s) / R;
  return hp * (1.0 - tail) + (1.0 - h) * dtail;
}

double radial_weight_second_derivative(double r, double R, int deg) {
  if (!(R > 0.0)) throw DomainError("radial_weight: R must be positive");
  if (r < 0.0) throw DomainError("radial_weight: negative radius");
  if (r <= R) return 0.0;
  const double tail = std::pow(R / r, deg - 1);
  if (r >= 2.0 * R) return (deg - 1) * deg * tail / (r * r);
  const double s = (r - R) / R;
  const double h = hermite_blend(s);
  const double hp = hermite_blend_derivative(s);
  const double hpp = hermite_blend_second_derivative(s);
  return hpp * (1.0 - tail) / (R * R) + 2.0 * hp * (deg - 1) * tail / (r * R) +
         (1.0 - h) * (deg - 1) * deg * tail / (r * r);
}

double truncated_power(double s, double mu, double e, double R) {
  const double a = std::abs(s);
  if (a <= R) return mu * s * std::pow(a, e);
  return mu * std::pow(R, e) * s;
}

double gradient_potential(const NonlinearitySpec& sp, double x, double y) {
  const int deg = 2 * sp.m + 2 * sp.n;
  const double r = std::hypot(x, y);
  return radial_weight(r, sp.radius, deg) * std::pow(x, 2 * sp.m) * std::pow(y, 2 * sp.n);
}

std::pair<double, double> gradient_potential_grad(const NonlinearitySpec& sp, double x,
                                                  double y) {
  const int deg = 2 * sp.m + 2 * sp.n;
  const double r = std::hypot(x, y);
  const double phi = radial_weight(r, sp.radius, deg);
  const double xm = std::pow(x, 2 * sp.m - 1);
  const double yn = std::pow(y, 2 * sp.n - 1);
  double fx = 2.0 * sp.m * phi * xm * (yn * y);
  double fy = 2.0 * sp.n * phi * (xm * x) * yn;
  if (r > sp.radius && r > 0.0) {
    const double dphi = radial_weight_derivative(r, sp.radius, deg);
    const double mono = (xm * x) * (yn * y);
    fx += dphi * (x / r) * mono;
    fy += dphi * (y / r) * mono;
  }
  return {fx, fy};
}

std::pair<double, double> suspender_force(const NonlinearitySpec& sp, double v, double u) {
  switch (sp.family) {
    case NonlinearFamily::Zero:
      return {0.0, 0.0};
    case NonlinearFamily::PowerSeparated:
      // Cross pairing: the cable feels the deck displacement and vice versa.
      return {truncated_power(u, sp.mu1, sp.exp_alpha, sp.radius),
              truncated_power(v, sp.mu2, sp.exp_beta, sp.radius)};
    case NonlinearFamily::GradientPotential:
      return gradient_potential_grad(sp, v, u);
    case NonlinearFamily::OneSidedSpring: {
      const double gap = v - u;
      return {-sp.spring_k * std::min(gap, 0.0), -sp.spring_k * std::min(-gap, 0.0)};
    }
  }
  return {0.0, 0.0};
}

ModalLifter::ModalLifter(const ModelParams& params, int n_modes)
    : params_(validate_params(params)), n_modes_(n_modes) {
  if (n_modes < 1) throw ValidationError({"n_modes must be positive"});
  const int nq = 4 * n_modes + 8;
  // Golub-Welsch: Legendre recurrence coefficients, then eigen-decompose the
  // symmetric Jacobi matrix. Nodes come out ascending.
  Matrix jac = Matrix::Zero(nq, nq);
  for (int i = 1; i < nq; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jac(i, i - 1) = b;
    jac(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(jac);
  const double half = 0.5 * params_.ell;
  nodes_ = (es.eigenvalues().array() + 1.0) * half;
  weights_ = 2.0 * half * es.eigenvectors().row(0).array().square();
  basis_ = basis_matrix(nodes_, n_modes_, params_.ell);
}

Vector ModalLifter::gap_samples(const Vector& packed) const {
  const int n = n_modes_;
  if (packed.size() != 4 * n) throw ValidationError({"packed state has wrong length"});
  return basis_ * (packed.head(n) - packed.segment(2 * n, n));
}

Vector ModalLifter::lift(const NonlinearitySpec& spec, const Vector& packed) const {
  const int n = n_modes_;
  if (packed.size() != 4 * n) throw ValidationError({"packed state has wrong length"});
  Vector out = Vector::Zero(4 * n);
  if (spec.family != NonlinearFamily::Zero) {
    const Vector v = basis_ * packed.head(n);
    const Vector u = basis_ * packed.segment(2 * n, n);
    Vector fw(v.size()), gw(v.size());
    for (int q = 0; q < v.size(); ++q) {
      const auto [f, g] = suspender_force(spec, v[q], u[q]);
      fw[q] = weights_[q] * f;
      gw[q] = weights_[q] * g;
    }
    const double scale = 2.0 / params_.ell;
    out.segment(n, n) = scale * (basis_.transpose() * fw);
    out.segment(3 * n, n) = scale * (basis_.transpose() * gw);
  }
  if (spec.forcing.size() != 0) {
    if (spec.forcing.size() != 4 * n)
      throw ValidationError({"forcing vector has wrong length"});
    out += spec.forcing;
  }
  return out;
}

Vector lift_to_state(const NonlinearitySpec& spec, const Vector& packed,
                     const ModelParams& params, int n_modes) {
  return ModalLifter(params, n_modes).lift(spec, packed);
}

Vector directional_derivative(const NonlinearitySpec& spec, const Vector& packed,
                              const Vector& direction, const ModelParams& params,
                              int n_modes) {
  ModalLifter lifter(params, n_modes);
  if (spec.family == NonlinearFamily::OneSidedSpring) {
    const Vector gap = lifter.gap_samples(packed);
    const double tol = 1e-8 * (1.0 + gap.cwiseAbs().maxCoeff());
    for (int q = 0; q < gap.size(); ++q) {
      if (std::abs(gap[q]) <= tol)
        throw NondifferentiableFamily("spring gap vanishes on the sample grid");
      if (q > 0 && gap[q] * gap[q - 1] < 0.0)
        throw NondifferentiableFamily("spring gap changes sign on the sample grid");
    }
  }
  const double dn = direction.norm();
  if (!(dn > 0.0)) throw ValidationError({"direction must be nonzero"});
  const double h0 = 1e-6 * (1.0 + packed.norm()) / dn;
  auto central = [&](double h) -> Vector {
    return (lifter.lift(spec, packed + h * direction) -
            lifter.lift(spec, packed - h * direction)) /
           (2.0 * h);
  };
  return (4.0 * central(0.5 * h0) - central(h0)) / 3.0;
}

double lipschitz_estimate(const NonlinearitySpec& spec, double ball, int n_pairs,
                          std::uint64_t seed) {
  if (!(ball > 0.0)) throw ValidationError({"sampling ball must be positive"});
  if (spec.family == NonlinearFamily::Zero) return 0.0;
  Rng rng(seed);
  double best = 0.0;
  auto scalar_pair = [&](auto&& f) {
    for (int i = 0; i < n_pairs; ++i) {
      const double s = rng.uniform(-ball, ball);
      const double t = rng.uniform(-ball, ball);
      if (std::abs(s - t) < 1e-12) continue;
      best = std::max(best, std::abs(f(s) - f(t)) / std::abs(s - t));
    }
  };
  switch (spec.family) {
    case NonlinearFamily::Zero:
      break;
    case NonlinearFamily::PowerSeparated:
      scalar_pair([&](double s) { return truncated_power(s, spec.mu1, spec.exp_alpha, spec.radius); });
      scalar_pair([&](double s) { return truncated_power(s, spec.mu2, spec.exp_beta, spec.radius); });
      break;
    case NonlinearFamily::OneSidedSpring:
      scalar_pair([&](double s) { return -spec.spring_k * std::min(s, 0.0); });
      break;
    case NonlinearFamily::GradientPotential: {
      auto draw = [&]() {
        double x, y;
        do {
          x = rng.uniform(-ball, ball);
          y = rng.uniform(-ball, ball);
        } while (x * x + y * y > ball * ball);
        return std::pair<double, double>{x, y};
      };
      for (int i = 0; i < n_pairs; ++i) {
        const auto [x0, y0] = draw();
        const auto [x1, y1] = draw();
        const double d = std::hypot(x1 - x0, y1 - y0);
        if (d < 1e-12) continue;
        const auto [f0, g0] = gradient_potential_grad(spec, x0, y0);
        const auto [f1, g1] = gradient_potential_grad(spec, x1, y1);
        best = std::max(best, std::hypot(f1 - f0, g1 - g0) / d);
      }
      break;
    }
  }
  return best;
}

}  // namespace bridgelab
