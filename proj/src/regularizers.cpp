#include "dcla/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace dcla {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sign(double v) { return (v > 0.0) - (v < 0.0); }

/// Indices of the q largest |x_i|, ties resolved towards the lowest index.
std::vector<Eigen::Index> top_q_indices(const Point& x, int q) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return std::abs(x[a]) > std::abs(x[b]); });
  idx.resize(static_cast<std::size_t>(q));
  return idx;
}

void check_q(const reg::L1MinusSigmaQ& k, Eigen::Index d) {
  if (k.q > d) {
    throw InvalidArgument("L1MinusSigmaQ: q = " + std::to_string(k.q) + " exceeds dimension " +
                          std::to_string(d));
  }
}

// Per-coordinate pieces of the separable kinds, unscaled.
// (value, subgradient selection) pairs.

double capped_r2(double theta, double v) { return std::max(theta * std::abs(v) - 1.0, 0.0); }
double capped_r2_sub(double theta, double v) {
  return theta * std::abs(v) > 1.0 ? theta * sign(v) : 0.0;
}

double pil_slope(const reg::PiL& k) { return k.theta / (k.a - 1.0); }
double pil_r1(const reg::PiL& k, double v) {
  return pil_slope(k) * std::max(1.0 / k.theta, std::abs(v));
}
double pil_r1_sub(const reg::PiL& k, double v) {
  return k.theta * std::abs(v) > 1.0 ? pil_slope(k) * sign(v) : 0.0;
}
// r1_i - r_i simplifies to max(1/(a-1), theta|v|/(a-1) - 1).
double pil_r2(const reg::PiL& k, double v) {
  return std::max(1.0 / (k.a - 1.0), pil_slope(k) * std::abs(v) - 1.0);
}
double pil_r2_sub(const reg::PiL& k, double v) {
  return k.theta * std::abs(v) > k.a ? pil_slope(k) * sign(v) : 0.0;
}

template <class Value, class Sub>
Point separable_prox(const Point& x, double t, double scale, Value value, Sub sub) {
  ScalarConvexFn phi{[&](double v) { return scale * value(v); },
                     [&](double v) { return scale * sub(v); }};
  Point out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = prox_1d_convex(phi, t, x[i]);
  return out;
}

template <class F>
double coordinate_sum(const Point& x, F f) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += f(x[i]);
  return s;
}

template <class F>
Point coordinate_map(const Point& x, F f) {
  Point out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  return out;
}

Point sign_vector(const Point& x) { return x.unaryExpr([](double v) { return sign(v); }); }

Point l2_subgradient(const Point& x) {
  const double n = x.norm();
  if (n == 0.0) return Point::Zero(x.size());
  return x / n;
}

Point pow_p_prox(const Point& x, double t, double p) {
  const double n = x.norm();
  if (n == 0.0) return Point::Zero(x.size());
  ScalarConvexFn phi{[p](double s) { return std::pow(std::abs(s), p); },
                     [p](double s) { return p * std::pow(std::abs(s), p - 1.0) * sign(s); }};
  const double radius = prox_1d_convex(phi, t, n);
  return (radius / n) * x;
}

Point pow_p_grad(const Point& x, double p) {
  const double n = x.norm();
  if (n == 0.0) return Point::Zero(x.size());
  return p * std::pow(n, p - 2.0) * x;
}

// Unscaled value of one component.
double raw_value(const RegularizerKind& kind, Component which, const Point& x) {
  const bool first = which == Component::R1;
  return std::visit(
      overloaded{
          [&](const reg::L1MinusL2&) { return first ? x.lpNorm<1>() : x.norm(); },
          [&](const reg::L1MinusSigmaQ& k) {
            if (first) return x.lpNorm<1>();
            check_q(k, x.size());
            double s = 0.0;
            for (auto i : top_q_indices(x, k.q)) s += std::abs(x[i]);
            return s;
          },
          [&](const reg::CappedL1& k) {
            if (first) return k.theta * x.lpNorm<1>();
            return coordinate_sum(x, [&](double v) { return capped_r2(k.theta, v); });
          },
          [&](const reg::PiL& k) {
            if (first) return coordinate_sum(x, [&](double v) { return pil_r1(k, v); });
            return coordinate_sum(x, [&](double v) { return pil_r2(k, v); });
          },
          [&](const reg::L1MinusL2PowP& k) {
            return first ? x.lpNorm<1>() : std::pow(x.norm(), k.p);
          },
          [&](const reg::Zero&) { return 0.0; },
          [&](const reg::Custom& c) { return first ? c.r1.value(x) : c.r2.value(x); },
      },
      kind);
}

Point raw_subgradient(const RegularizerKind& kind, Component which, const Point& x) {
  const bool first = which == Component::R1;
  return std::visit(
      overloaded{
          [&](const reg::L1MinusL2&) -> Point {
            return first ? sign_vector(x) : l2_subgradient(x);
          },
          [&](const reg::L1MinusSigmaQ& k) -> Point {
            if (first) return sign_vector(x);
            check_q(k, x.size());
            Point g = Point::Zero(x.size());
            for (auto i : top_q_indices(x, k.q)) g[i] = sign(x[i]);
            return g;
          },
          [&](const reg::CappedL1& k) -> Point {
            if (first) return k.theta * sign_vector(x);
            return coordinate_map(x, [&](double v) { return capped_r2_sub(k.theta, v); });
          },
          [&](const reg::PiL& k) -> Point {
            if (first) return coordinate_map(x, [&](double v) { return pil_r1_sub(k, v); });
            return coordinate_map(x, [&](double v) { return pil_r2_sub(k, v); });
          },
          [&](const reg::L1MinusL2PowP& k) -> Point {
            return first ? sign_vector(x) : pow_p_grad(x, k.p);
          },
          [&](const reg::Zero&) -> Point { return Point::Zero(x.size()); },
          [&](const reg::Custom& c) -> Point {
            return first ? c.r1.subgradient(x) : c.r2.subgradient(x);
          },
      },
      kind);
}

double effective_scale(const DCRegularizer& r) { return r.is_zero() ? 1.0 : r.scale; }

}  // namespace

double reg::L1MinusL2PowP::holder_or_default() const {
  return holder_constant.value_or(std::pow(2.0, p) * p);
}

void DCRegularizer::validate() const {
  if (!is_zero() && !(scale > 0.0 && std::isfinite(scale))) {
    throw InvalidArgument("regularizer scale must be > 0");
  }
  std::visit(overloaded{
                 [](const reg::L1MinusSigmaQ& k) {
                   if (k.q < 1) throw InvalidArgument("L1MinusSigmaQ: q must be >= 1");
                 },
                 [](const reg::CappedL1& k) {
                   if (!(k.theta > 0.0)) throw InvalidArgument("CappedL1: theta must be > 0");
                 },
                 [](const reg::PiL& k) {
                   if (!(k.theta > 0.0)) throw InvalidArgument("PiL: theta must be > 0");
                   if (!(k.a > 1.0)) throw InvalidArgument("PiL: a must be > 1");
                 },
                 [](const reg::L1MinusL2PowP& k) {
                   if (!(k.p > 1.0 && k.p < 2.0)) {
                     throw InvalidArgument("L1MinusL2PowP: p must lie in (1, 2)");
                   }
                   if (k.holder_constant && !(*k.holder_constant > 0.0)) {
                     throw InvalidArgument("L1MinusL2PowP: holder_constant must be > 0");
                   }
                 },
                 [](const reg::Custom& c) {
                   if (!c.r1.value || !c.r1.subgradient || !c.r2.value || !c.r2.subgradient) {
                     throw InvalidArgument("Custom regularizer: value and subgradient required");
                   }
                 },
                 [](const auto&) {},
             },
             kind);
}

std::string kind_name(const DCRegularizer& r) {
  return std::visit(overloaded{
                        [](const reg::L1MinusL2&) -> std::string { return "L1MinusL2"; },
                        [](const reg::L1MinusSigmaQ&) -> std::string { return "L1MinusSigmaQ"; },
                        [](const reg::CappedL1&) -> std::string { return "CappedL1"; },
                        [](const reg::PiL&) -> std::string { return "PiL"; },
                        [](const reg::L1MinusL2PowP&) -> std::string { return "L1MinusL2PowP"; },
                        [](const reg::Zero&) -> std::string { return "Zero"; },
                        [](const reg::Custom& c) -> std::string { return c.name; },
                    },
                    r.kind);
}

DCValue dc_eval(const DCRegularizer& reg, const Point& x) {
  const double s = effective_scale(reg);
  DCValue out;
  out.r1 = s * raw_value(reg.kind, Component::R1, x);
  out.r2 = s * raw_value(reg.kind, Component::R2, x);
  out.r = out.r1 - out.r2;
  return out;
}

DCSubgradient dc_subgradient(const DCRegularizer& reg, const Point& x) {
  const double s = effective_scale(reg);
  return {s * raw_subgradient(reg.kind, Component::R1, x),
          s * raw_subgradient(reg.kind, Component::R2, x)};
}

Point component_prox(const DCRegularizer& reg, Component which, double t, const Point& x) {
  if (!(t > 0.0)) throw InvalidArgument("component_prox: t must be > 0");
  const bool first = which == Component::R1;
  const double s = effective_scale(reg);
  const double ts = t * s;
  return std::visit(
      overloaded{
          [&](const reg::L1MinusL2&) -> Point { return first ? prox_l1(x, ts) : prox_l2(x, ts); },
          [&](const reg::L1MinusSigmaQ& k) -> Point {
            check_q(k, x.size());
            if (first || k.q == x.size()) return prox_l1(x, ts);
            throw Unsupported("L1MinusSigmaQ: prox of the sigma_q component needs q = d");
          },
          [&](const reg::CappedL1& k) -> Point {
            if (first) return prox_l1(x, ts * k.theta);
            return separable_prox(
                x, t, s, [&](double v) { return capped_r2(k.theta, v); },
                [&](double v) { return capped_r2_sub(k.theta, v); });
          },
          [&](const reg::PiL& k) -> Point {
            if (first) {
              return separable_prox(
                  x, t, s, [&](double v) { return pil_r1(k, v); },
                  [&](double v) { return pil_r1_sub(k, v); });
            }
            return separable_prox(
                x, t, s, [&](double v) { return pil_r2(k, v); },
                [&](double v) { return pil_r2_sub(k, v); });
          },
          [&](const reg::L1MinusL2PowP& k) -> Point {
            return first ? prox_l1(x, ts) : pow_p_prox(x, ts, k.p);
          },
          [&](const reg::Zero&) -> Point { return x; },
          [&](const reg::Custom& c) -> Point {
            const ConvexFunction& g = first ? c.r1 : c.r2;
            if (!g.has_prox()) throw Unsupported("Custom regularizer: component has no prox");
            return g.prox(ts, x);
          },
      },
      reg.kind);
}

bool has_component_prox(const DCRegularizer& reg, Component which, int d) {
  if (const auto* k = std::get_if<reg::L1MinusSigmaQ>(&reg.kind)) {
    return which == Component::R1 || k->q == d;
  }
  if (const auto* c = std::get_if<reg::Custom>(&reg.kind)) {
    return (which == Component::R1 ? c->r1 : c->r2).has_prox();
  }
  return true;
}

ConvexFunction component(const DCRegularizer& reg, Component which) {
  if (reg.is_zero()) return convex::zero();
  const double s = reg.scale;
  ConvexFunction g;
  g.value = [reg, which, s](const Point& x) { return s * raw_value(reg.kind, which, x); };
  g.subgradient = [reg, which, s](const Point& x) -> Point {
    return s * raw_subgradient(reg.kind, which, x);
  };
  g.prox = [reg, which](double t, const Point& x) { return component_prox(reg, which, t, x); };
  return g;
}

Point full_prox(const DCRegularizer& reg, double t, const Point& x) {
  if (!(t > 0.0)) throw InvalidArgument("full_prox: t must be > 0");
  if (reg.is_zero()) return x;
  if (std::holds_alternative<reg::L1MinusL2>(reg.kind)) {
    return prox_l1_minus_eps_l2(x, t * reg.scale, 1.0);
  }
  if (const auto* c = std::get_if<reg::Custom>(&reg.kind); c && c->full_prox) {
    return c->full_prox(t * reg.scale, x);
  }
  throw Unsupported("no prox of the full regularizer for kind " + kind_name(reg));
}

bool has_full_prox(const DCRegularizer& reg) {
  if (reg.is_zero() || std::holds_alternative<reg::L1MinusL2>(reg.kind)) return true;
  const auto* c = std::get_if<reg::Custom>(&reg.kind);
  return c && static_cast<bool>(c->full_prox);
}

RegularizerInfo lipschitz_info(const DCRegularizer& reg, int d) {
  if (d < 1) throw InvalidArgument("lipschitz_info: d must be >= 1");
  const double rd = std::sqrt(static_cast<double>(d));
  const double tau = reg.scale;
  return std::visit(
      overloaded{
          [&](const reg::L1MinusL2&) {
            return RegularizerInfo{tau * rd, LipschitzR2{tau}, std::nullopt};
          },
          [&](const reg::L1MinusSigmaQ&) {
            return RegularizerInfo{tau * rd, LipschitzR2{tau * rd}, std::nullopt};
          },
          [&](const reg::CappedL1& k) {
            return RegularizerInfo{tau * k.theta * rd, LipschitzR2{2.0 * tau * k.theta * rd},
                                   std::nullopt};
          },
          [&](const reg::PiL& k) {
            const double c = k.theta / (k.a - 1.0);
            return RegularizerInfo{tau * c * rd, LipschitzR2{2.0 * tau * c * rd}, std::nullopt};
          },
          [&](const reg::L1MinusL2PowP& k) {
            return RegularizerInfo{tau * rd, HolderR2{k.p - 1.0, tau * k.holder_or_default()},
                                   std::nullopt};
          },
          [&](const reg::Zero&) { return RegularizerInfo{0.0, LipschitzR2{0.0}, 0.0}; },
          [&](const reg::Custom& c) {
            RegularizerInfo info;
            info.G1 = tau * c.G1;
            if (c.G2) {
              info.r2_regularity = LipschitzR2{tau * *c.G2};
            } else if (c.holder_kappa && c.holder_M) {
              info.r2_regularity = HolderR2{*c.holder_kappa, tau * *c.holder_M};
            } else {
              info.r2_regularity = LipschitzR2{std::numeric_limits<double>::infinity()};
            }
            return info;
          },
      },
      reg.kind);
}

}  // namespace dcla
