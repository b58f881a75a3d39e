#pragma once

#include <cstdint>
#include <utility>

#include "bridgelab/model.hpp"
#include "bridgelab/types.hpp"

namespace bridgelab {

// Suspender force families. F acts on the cable equation, G on the deck.
//   Zero:              F = G = 0.
//   PowerSeparated:    F = mu1 T_R(u), G = mu2 T_R(v) with T_R the clamped
//                      power s |s|^alpha (growth factor capped at R^alpha
//                      outside the ball). Note the cross pairing: each force
//                      reads the other span's displacement.
//   GradientPotential: (F, G) = grad p_R evaluated at (v, u), where
//                      p_R(x, y) = phi_R(r) x^{2m} y^{2n} is the radially
//                      truncated polynomial potential. The (v, u) argument
//                      order makes F v_t + G u_t an exact time derivative,
//                      which the augmented-energy audit relies on.
//   OneSidedSpring:    F = -k min(v - u, 0), G = -k min(u - v, 0);
//                      globally Lipschitz with constant k, no truncation.
enum class NonlinearFamily { Zero, PowerSeparated, GradientPotential, OneSidedSpring };

struct NonlinearitySpec {
  NonlinearFamily family = NonlinearFamily::Zero;
  double radius = 1.0;  // truncation radius R
  // PowerSeparated
  double mu1 = 0.0, exp_alpha = 0.0;
  double mu2 = 0.0, exp_beta = 0.0;
  // GradientPotential exponents (potential degree 2m + 2n)
  int m = 1, n = 1;
  // OneSidedSpring
  double spring_k = 0.0;
  // Optional constant forcing, packed [0..4N); empty = none.
  Vector forcing;

  static NonlinearitySpec zero() { return {}; }
  static NonlinearitySpec power(double mu1, double alpha, double mu2, double beta, double R);
  static NonlinearitySpec gradient(int m, int n, double R);
  static NonlinearitySpec spring(double k);
};

std::vector<std::string> check_spec(const NonlinearitySpec& s);
NonlinearitySpec validate_spec(const NonlinearitySpec& s);

// Quintic blend h on [0,1]: h(0)=1, h(1)=0, both derivatives vanishing at
// the ends, h(1/2) = 1/2. Throws DomainError outside [0,1].
double hermite_blend(double s);
double hermite_blend_derivative(double s);
double hermite_blend_second_derivative(double s);

// C^2 radial truncation weight: 1 on [0,R], blended with (R/r)^(deg-1) on
// (R,2R), pure power decay beyond.
double radial_weight(double r, double R, int deg);
double radial_weight_derivative(double r, double R, int deg);
double radial_weight_second_derivative(double r, double R, int deg);

// mu s|s|^e for |s| <= R, slope mu R^e beyond; globally Lipschitz.
double truncated_power(double s, double mu, double e, double R);

// Truncated potential p_R(x,y) and its exact gradient.
double gradient_potential(const NonlinearitySpec& s, double x, double y);
std::pair<double, double> gradient_potential_grad(const NonlinearitySpec& s, double x,
                                                  double y);

// Pointwise (F, G) at displacement values (v, u).
std::pair<double, double> suspender_force(const NonlinearitySpec& s, double v, double u);

// Projects the pointwise force field back onto the sine basis:
// evaluate displacements on a Gauss-Legendre grid (4N+8 points), apply the
// family pointwise, project with weight 2/ell, add the constant forcing.
// Output is a packed vector with entries only in the velocity slots.
class ModalLifter {
 public:
  ModalLifter(const ModelParams& params, int n_modes);

  Vector lift(const NonlinearitySpec& spec, const Vector& packed) const;
  // Displacement samples v - u on the quadrature grid (used for the spring
  // differentiability check).
  Vector gap_samples(const Vector& packed) const;

  const Vector& nodes() const { return nodes_; }
  const Vector& weights() const { return weights_; }
  int n_modes() const { return n_modes_; }

 private:
  ModelParams params_;
  int n_modes_;
  Vector nodes_, weights_;
  Matrix basis_;  // nq x N
};

Vector lift_to_state(const NonlinearitySpec& spec, const Vector& packed,
                     const ModelParams& params, int n_modes);

// Directional derivative of the lifted force by Richardson-extrapolated
// central differences. Refuses (NondifferentiableFamily) for the one-sided
// spring when the gap v - u vanishes or changes sign on the sample grid.
Vector directional_derivative(const NonlinearitySpec& spec, const Vector& packed,
                              const Vector& direction, const ModelParams& params,
                              int n_modes);

// Sampled Lipschitz quotient. Scalar families draw argument pairs from
// [-ball, ball] (the constant quoted for them is one-dimensional); the
// gradient family draws point pairs from the disk of that radius.
double lipschitz_estimate(const NonlinearitySpec& spec, double ball, int n_pairs,
                          std::uint64_t seed);

}  // namespace bridgelab
