#pragma once

// Target potentials V = f + tau (r1 - r2) and the constants derived from them.

#include "dcla/core.hpp"
#include "dcla/regularizers.hpp"

#include <functional>
#include <optional>
#include <variant>

namespace dcla {

/// f(x) = (x - m)^T S (x - m) / 2 with S symmetric positive definite.
class QuadraticF {
 public:
  /// Validates symmetry (1e-12) and positive definiteness; computes the
  /// extreme eigenvalues with a symmetric eigensolver.
  QuadraticF(Point mean, Matrix precision);

  const Point& mean() const { return mean_; }
  const Matrix& precision() const { return precision_; }
  int dim() const { return static_cast<int>(mean_.size()); }
  /// Largest eigenvalue of the precision (smoothness constant).
  double L_f() const { return L_f_; }
  /// Smallest eigenvalue of the precision (strong convexity modulus).
  double mu_f() const { return mu_f_; }

 private:
  Point mean_;
  Matrix precision_;
  double L_f_ = 0.0;
  double mu_f_ = 0.0;
};

struct ValueGrad {
  double value = 0.0;
  Point grad;
};

ValueGrad f_eval_grad(const QuadraticF& f, const Point& x);

/// Arbitrary smooth f given by callbacks. L_f is declared by the caller;
/// `mu_f` / `R_f` declare (mu_f, R_f)-distant dissipativity if known.
struct SmoothF {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> grad;
  double L_f = 1.0;
  std::optional<double> mu_f;
  double R_f = 0.0;
};

/// Gradient of a smooth second component, for DC-LA-S.
struct SmoothR2 {
  std::function<Point(const Point&)> grad;
  double L_r2 = 0.0;
};

struct DCPotential {
  std::variant<QuadraticF, SmoothF> f;
  DCRegularizer reg;
  int d = 1;
  std::optional<SmoothR2> smooth_r2;

  DCPotential(QuadraticF quad, DCRegularizer r);
  DCPotential(SmoothF smooth, int dim, DCRegularizer r);

  double f_value(const Point& x) const;
  Point f_grad(const Point& x) const;
  double L_f() const;
};

/// f(x) + r1(x) - r2(x) (scaled components).
double potential_eval(const DCPotential& V, const Point& x);

/// V_lam(x) = f(x) + r1^lam(x) - r2^lam(x).
double smoothed_potential_eval(const DCPotential& V, double lam, const Point& x);

struct DissipativityConstants {
  double mu = 0.0;
  double R = 0.0;
};

/// (mu, R) such that V is (mu, R)-distant dissipative, transferred from f.
///
/// f quadratic gives (mu_f, 0); a SmoothF must declare mu_f. With G2 = 0
/// the constants of f pass through; otherwise mu halves and the radius
/// becomes max(R_f, 4 G2 / mu_f), or max(R_f, (2M/mu_f)^(1/(1-kappa)))
/// for a Hoelder-smooth r2.
DissipativityConstants dissipativity_constants(const DCPotential& V, int d);

struct DclaBound {};
struct DclasBound {
  double L_r2 = 0.0;
};
using StepsizeScheme = std::variant<DclaBound, DclasBound>;

/// Largest step size admitted by the convergence conditions for the q-th
/// Wasserstein distance. DC-LA uses c = 2 + lam L_f; DC-LA-S uses
/// c = 1 + lam L_f + lam L_r2:
///   q = 1:  mu lam^2 / (2 c^2)
///   q >= 2: min(mu lam^2 / (c^2 2^(2q+3) (2q-1)), lam / (4c))
double max_stepsize(int q, double mu, double lam, double L_f, const StepsizeScheme& scheme);

}  // namespace dcla
