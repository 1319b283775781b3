#include "dcla/prox.hpp"

#include <cmath>
#include <string>

namespace dcla {

namespace {

double sign(double v) { return (v > 0.0) - (v < 0.0); }

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw InvalidArgument(std::string(name) + " must be > 0");
}

}  // namespace

namespace convex {

ConvexFunction zero() {
  return {[](const Point&) { return 0.0; },
          [](const Point& x) -> Point { return Point::Zero(x.size()); },
          [](double, const Point& x) -> Point { return x; }};
}

ConvexFunction l1(double weight) {
  return {[weight](const Point& x) { return weight * x.lpNorm<1>(); },
          [weight](const Point& x) -> Point {
            return x.unaryExpr([weight](double v) { return weight * sign(v); });
          },
          [weight](double t, const Point& x) { return prox_l1(x, t * weight); }};
}

ConvexFunction l2(double weight) {
  return {[weight](const Point& x) { return weight * x.norm(); },
          [weight](const Point& x) -> Point {
            const double n = x.norm();
            if (n == 0.0) return Point::Zero(x.size());
            return (weight / n) * x;
          },
          [weight](double t, const Point& x) { return prox_l2(x, t * weight); }};
}

ConvexFunction half_squared_norm(double weight) {
  return {[weight](const Point& x) { return 0.5 * weight * x.squaredNorm(); },
          [weight](const Point& x) -> Point { return weight * x; },
          [weight](double t, const Point& x) -> Point { return x / (1.0 + t * weight); }};
}

ConvexFunction scaled(ConvexFunction g, double s) {
  require_positive(s, "scale");
  ConvexFunction out;
  out.value = [g, s](const Point& x) { return s * g.value(x); };
  out.subgradient = [g, s](const Point& x) -> Point { return s * g.subgradient(x); };
  if (g.has_prox()) {
    out.prox = [g, s](double t, const Point& x) { return g.prox(t * s, x); };
  }
  return out;
}

}  // namespace convex

Point prox_l1(const Point& x, double t) {
  require_positive(t, "prox_l1: t");
  return x.unaryExpr([t](double v) { return sign(v) * std::max(std::abs(v) - t, 0.0); });
}

Point prox_l2(const Point& x, double t) {
  require_positive(t, "prox_l2: t");
  const double n = x.norm();
  if (n <= t) return Point::Zero(x.size());
  return (1.0 - t / n) * x;
}

Point prox_l1_minus_eps_l2(const Point& x, double t, double eps) {
  require_positive(t, "prox_l1_minus_eps_l2: t");
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw InvalidArgument("prox_l1_minus_eps_l2: eps must lie in (0, 1]");
  }
  Eigen::Index imax = 0;
  const double inf_norm = x.size() > 0 ? x.cwiseAbs().maxCoeff(&imax) : 0.0;

  if (inf_norm <= (1.0 - eps) * t) return Point::Zero(x.size());

  if (inf_norm > t) {
    Point z = prox_l1(x, t);
    return (1.0 + eps * t / z.norm()) * z;
  }

  // maxCoeff reports the first maximal index, which is the tie rule we want.
  Point out = Point::Zero(x.size());
  out[imax] = sign(x[imax]) * (inf_norm + (eps - 1.0) * t);
  return out;
}

double prox_1d_convex(const ScalarConvexFn& phi, double t, double x) {
  require_positive(t, "prox_1d_convex: t");
  auto h = [&](double y) { return phi.subgradient(y) + (y - x) / t; };

  const double limit = std::abs(x) + 1e6;
  double lo = x - 1.0;
  double hi = x + 1.0;
  double width = 1.0;
  while (h(lo) > 0.0) {
    width *= 2.0;
    lo = x - width;
    if (std::abs(lo) > limit) throw ConvergenceError("prox_1d_convex: cannot bracket root from below");
  }
  width = 1.0;
  while (h(hi) < 0.0) {
    width *= 2.0;
    hi = x + width;
    if (std::abs(hi) > limit) throw ConvergenceError("prox_1d_convex: cannot bracket root from above");
  }

  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (h(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

Point prox_or_throw(const ConvexFunction& g, double t, const Point& x) {
  if (!g.has_prox()) throw Unsupported("convex function has no prox");
  return g.prox(t, x);
}

}  // namespace

double moreau_value(const ConvexFunction& g, double lam, const Point& x) {
  require_positive(lam, "moreau_value: lam");
  const Point p = prox_or_throw(g, lam, x);
  return g.value(p) + (x - p).squaredNorm() / (2.0 * lam);
}

Point moreau_grad(const ConvexFunction& g, double lam, const Point& x) {
  require_positive(lam, "moreau_grad: lam");
  return (x - prox_or_throw(g, lam, x)) / lam;
}

Point prox_of_moreau(const ConvexFunction& g, double lam, double gam, const Point& x) {
  require_positive(lam, "prox_of_moreau: lam");
  require_positive(gam, "prox_of_moreau: gam");
  const Point p = prox_or_throw(g, gam + lam, x);
  return x - (gam / (gam + lam)) * (x - p);
}

double prox_neg_abs(double v, double gam) {
  require_positive(gam, "prox_neg_abs: gam");
  return v < 0.0 ? v - gam : v + gam;
}

Point approx_prox_fixed_point(const std::function<Point(const Point&)>& subgrad, double eta,
                              const Point& x, int iters) {
  require_positive(eta, "approx_prox_fixed_point: eta");
  if (iters < 1) throw InvalidArgument("approx_prox_fixed_point: iters must be >= 1");
  Point v = x;
  for (int k = 0; k < iters; ++k) v = x - eta * subgrad(v);
  return v;
}

}  // namespace dcla
