#pragma once

// Proximal operators and Moreau envelopes of convex functions.
//
//   prox_{t g}(x) = argmin_y g(y) + |y - x|^2 / (2t)
//   g^lam(x)      = min_y  g(y) + |y - x|^2 / (2 lam)
//
// Everything here is a pure function of its arguments.

#include "dcla/core.hpp"

#include <functional>

namespace dcla {

/// Scalar convex function given by its value and a subgradient selection.
struct ScalarConvexFn {
  std::function<double(double)> value;
  std::function<double(double)> subgradient;
};

/// A convex function on R^d that knows its own prox.
///
/// `prox(t, x)` must return prox_{t g}(x). Components built by the
/// regularizer catalog already fold their scale into `t`.
struct ConvexFunction {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> subgradient;
  std::function<Point(double, const Point&)> prox;

  bool has_prox() const { return static_cast<bool>(prox); }
};

namespace convex {

ConvexFunction zero();
/// w * |x|_1
ConvexFunction l1(double weight = 1.0);
/// w * |x|_2
ConvexFunction l2(double weight = 1.0);
/// w * |x|^2 / 2
ConvexFunction half_squared_norm(double weight = 1.0);
/// s * g for s > 0.
ConvexFunction scaled(ConvexFunction g, double s);

}  // namespace convex

/// Soft threshold: sign(x_i) max(|x_i| - t, 0).
Point prox_l1(const Point& x, double t);

/// Block soft threshold: max(1 - t/|x|_2, 0) x, and 0 at x = 0.
Point prox_l2(const Point& x, double t);

/// prox of t(|.|_1 - eps |.|_2) for eps in (0, 1].
///
/// Three-branch closed form. Where the prox is set-valued the selection is
/// fixed: the single-coordinate branch uses the lowest index among ties of
/// max |x_i|.
Point prox_l1_minus_eps_l2(const Point& x, double t, double eps);

/// prox of t*phi at x for a scalar convex phi.
///
/// Bisection on the strictly increasing map y -> phi'(y) + (y - x)/t,
/// to 1e-10 in y. Throws ConvergenceError if the bracket has to grow
/// beyond |x| + 1e6.
double prox_1d_convex(const ScalarConvexFn& phi, double t, double x);

/// g(p) + |x - p|^2 / (2 lam) with p = prox_{lam g}(x).
double moreau_value(const ConvexFunction& g, double lam, const Point& x);

/// (x - prox_{lam g}(x)) / lam.
Point moreau_grad(const ConvexFunction& g, double lam, const Point& x);

/// prox_{gam g^lam}(x) = (gam prox_{(gam+lam) g}(x) + lam x) / (gam + lam).
///
/// Evaluated as x - gam/(gam+lam) (x - prox_{(gam+lam) g}(x)) so that a
/// prox returning x exactly gives x back bit for bit.
Point prox_of_moreau(const ConvexFunction& g, double lam, double gam, const Point& x);

/// prox of gam * (-|.|) in 1D. Set-valued at v = 0; we return +gam there.
double prox_neg_abs(double v, double gam);

/// Approximate prox_{eta g}(x) by `iters` fixed-point sweeps
/// v <- x - eta * subgrad(v), starting at v = x.
Point approx_prox_fixed_point(const std::function<Point(const Point&)>& subgrad, double eta,
                              const Point& x, int iters);

}  // namespace dcla
