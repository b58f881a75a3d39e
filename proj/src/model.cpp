#include "bridgelab/model.hpp"

#include <cmath>
#include <numeric>

#include "bridgelab/errors.hpp"

namespace bridgelab {

Rational reduce(long long num, long long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

double ModelParams::wave_speed() const { return std::sqrt(beta0); }

ModelParams ModelParams::with_ratio(double ell, double beta0, double alpha, double alpha0,
                                    double k, double gamma, double gamma0, long long p,
                                    long long q) {
  ModelParams out;
  out.ell = ell;
  out.beta0 = beta0;
  out.alpha = alpha;
  out.alpha0 = alpha0;
  out.k = k;
  out.gamma = gamma;
  out.gamma0 = gamma0;
  out.xi_ratio = reduce(p, q);
  out.xi = out.xi_ratio->value() * ell;
  return out;
}

std::vector<std::string> check_params(const ModelParams& p) {
  std::vector<std::string> issues;
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(p.ell) || p.ell <= 0.0) issues.push_back("ell must be positive");
  if (!finite(p.beta0) || p.beta0 <= 0.0) issues.push_back("beta0 must be positive");
  if (!finite(p.alpha) || p.alpha <= 0.0) issues.push_back("alpha must be positive");
  if (!finite(p.alpha0) || p.alpha0 < 0.0) issues.push_back("alpha0 must be nonnegative");
  if (!finite(p.k) || p.k < 0.0) issues.push_back("k must be nonnegative");
  if (!finite(p.gamma) || p.gamma < 0.0) issues.push_back("gamma must be nonnegative");
  if (!finite(p.gamma0) || p.gamma0 < 0.0) issues.push_back("gamma0 must be nonnegative");
  if (p.xi_ratio) {
    if (p.xi_ratio->num <= 0 || p.xi_ratio->num >= p.xi_ratio->den)
      issues.push_back("xi ratio must lie strictly between 0 and 1");
    else if (p.ell > 0.0 &&
             std::abs(p.xi - p.xi_ratio->value() * p.ell) >
                 1e-12 * p.ell)
      issues.push_back("xi coordinate disagrees with xi ratio");
  } else if (!finite(p.xi) || p.xi <= 0.0 || p.xi >= p.ell) {
    issues.push_back("xi must lie strictly inside (0, ell)");
  }
  return issues;
}

ModelParams validate_params(const ModelParams& p) {
  auto issues = check_params(p);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return p;
}

namespace {

// Smallest j >= 0 with sin(mu_j xi) = 0 for xi/ell = p/q reduced:
// needs 2q | (2j+1) p, which for even p (q odd by coprimality) first
// happens at 2j+1 = q.
std::optional<int> smallest_node_mode(const Rational& r) {
  if (r.num % 2 != 0) return std::nullopt;
  return static_cast<int>((r.den - 1) / 2);
}

}  // namespace

DampingPointClass classify_damping_point(const Rational& ratio) {
  Rational r = reduce(ratio.num, ratio.den);
  if (r.num <= 0 || r.num >= r.den)
    throw DomainError("damping point ratio must lie strictly between 0 and 1");
  DampingPointClass out;
  out.ratio = r;
  if (r.den % 2 == 0) {
    out.tag = DampingPointTag::NoGuarantee;
  } else if (r.num % 2 == 0) {
    out.tag = DampingPointTag::UndampedModeExists;
    out.witness_mode = smallest_node_mode(r);
  } else {
    out.tag = DampingPointTag::ExponentialAdmissible;
  }
  return out;
}

DampingPointClass classify_damping_point(double xi_over_ell) {
  if (!(xi_over_ell > 0.0 && xi_over_ell < 1.0))
    throw DomainError("damping point ratio must lie strictly between 0 and 1");
  DampingPointClass out;
  out.tag = DampingPointTag::NoGuarantee;
  long long best_p = 1, best_q = 2;
  double best_err = std::abs(xi_over_ell - 0.5);
  for (long long q = 1; q <= 64; ++q) {
    long long p = std::llround(xi_over_ell * static_cast<double>(q));
    if (p < 1) p = 1;
    if (p > q - 1) p = q - 1;
    if (p < 1) continue;  // q == 1 has no interior fraction
    double err = std::abs(xi_over_ell - static_cast<double>(p) / static_cast<double>(q));
    if (err < best_err - 1e-18) {
      best_err = err;
      best_p = p;
      best_q = q;
    }
  }
  out.nearest = reduce(best_p, best_q);
  out.nearest_error = best_err;
  return out;
}

DampingPointClass classify_damping_point(const ModelParams& p) {
  if (p.xi_ratio) return classify_damping_point(*p.xi_ratio);
  return classify_damping_point(p.xi / p.ell);
}

const char* to_string(DampingPointTag tag) {
  switch (tag) {
    case DampingPointTag::ExponentialAdmissible:
      return "exponential_admissible";
    case DampingPointTag::UndampedModeExists:
      return "undamped_mode_exists";
    case DampingPointTag::NoGuarantee:
      return "no_guarantee";
  }
  return "unknown";
}

ModalState ModalState::zero(int n_modes) {
  ModalState s;
  s.a = Vector::Zero(n_modes);
  s.adot = Vector::Zero(n_modes);
  s.b = Vector::Zero(n_modes);
  s.bdot = Vector::Zero(n_modes);
  return s;
}

ModalState ModalState::from_packed(const Vector& u) {
  if (u.size() % 4 != 0) throw DomainError("packed state length must be a multiple of 4");
  const Eigen::Index n = u.size() / 4;
  ModalState s;
  s.a = u.segment(0, n);
  s.adot = u.segment(n, n);
  s.b = u.segment(2 * n, n);
  s.bdot = u.segment(3 * n, n);
  return s;
}

Vector ModalState::packed() const {
  const Eigen::Index n = a.size();
  Vector u(4 * n);
  u.segment(0, n) = a;
  u.segment(n, n) = adot;
  u.segment(2 * n, n) = b;
  u.segment(3 * n, n) = bdot;
  return u;
}

double modal_frequency(int j, double ell) {
  return (2.0 * j + 1.0) * M_PI / (2.0 * ell);
}

Vector modal_frequencies(int n_modes, double ell) {
  Vector mu(n_modes);
  for (int j = 0; j < n_modes; ++j) mu[j] = modal_frequency(j, ell);
  return mu;
}

Matrix basis_matrix(const Vector& x, int n_modes, double ell) {
  const Vector mu = modal_frequencies(n_modes, ell);
  Matrix phi(x.size(), n_modes);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (int j = 0; j < n_modes; ++j) phi(i, j) = std::sin(mu[j] * x[i]);
  return phi;
}

Matrix basis_slope_matrix(const Vector& x, int n_modes, double ell) {
  const Vector mu = modal_frequencies(n_modes, ell);
  Matrix dphi(x.size(), n_modes);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (int j = 0; j < n_modes; ++j) dphi(i, j) = mu[j] * std::cos(mu[j] * x[i]);
  return dphi;
}

FieldSample synthesize(const ModalState& s, const ModelParams& p, const Vector& x) {
  const Matrix phi = basis_matrix(x, s.n_modes(), p.ell);
  FieldSample f;
  f.v = phi * s.a;
  f.vt = phi * s.adot;
  f.u = phi * s.b;
  f.ut = phi * s.bdot;
  return f;
}

Vector synthesize_cable_slope(const ModalState& s, const ModelParams& p, const Vector& x) {
  return basis_slope_matrix(x, s.n_modes(), p.ell) * s.a;
}

EnergyBreakdown total_energy(const ModalState& s, const ModelParams& p) {
  const Vector mu = modal_frequencies(s.n_modes(), p.ell);
  const double quarter = p.ell / 4.0;
  EnergyBreakdown e;
  e.cable_kinetic = quarter * s.adot.squaredNorm();
  e.cable_potential = quarter * p.beta0 * (mu.array() * s.a.array()).matrix().squaredNorm();
  e.deck_kinetic = quarter * s.bdot.squaredNorm();
  e.deck_bending =
      quarter * p.alpha * (mu.array().square() * s.b.array()).matrix().squaredNorm();
  e.deck_tension = quarter * p.alpha0 * (mu.array() * s.b.array()).matrix().squaredNorm();
  e.coupling = quarter * p.k * (s.a - s.b).squaredNorm();
  e.total = e.cable_kinetic + e.cable_potential + e.deck_kinetic + e.deck_bending +
            e.deck_tension + e.coupling;
  return e;
}

EnergyBreakdown total_energy(const Vector& packed, const ModelParams& p) {
  return total_energy(ModalState::from_packed(packed), p);
}

double damping_power(const ModalState& s, const ModelParams& p) {
  const Matrix phi = basis_matrix(Vector::Constant(1, p.xi), s.n_modes(), p.ell);
  const double vt = (phi * s.adot)(0);
  const double ut = (phi * s.bdot)(0);
  return p.gamma * vt * vt + p.gamma0 * ut * ut;
}

double damping_power(const Vector& packed, const ModelParams& p) {
  return damping_power(ModalState::from_packed(packed), p);
}

}  // namespace bridgelab
