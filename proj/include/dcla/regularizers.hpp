#pragma once

// Catalog of difference-of-convex regularizers r = r1 - r2.
//
// Every built-in kind carries its explicit decomposition into two convex
// components. `scale` (tau) multiplies both components, so r = tau r1 - tau r2
// stays a valid DC split and prox rules simply absorb tau into the step.
//
//   kind              r1                                r2
//   L1MinusL2         |x|_1                             |x|_2
//   L1MinusSigmaQ     |x|_1                             sum of the q largest |x_i|
//   CappedL1          theta |x|_1                       sum max(theta|x_i| - 1, 0)
//   PiL               theta/(a-1) sum max(1/theta,|x_i|) r1 - sum min(1, max(0, (theta|x_i|-1)/(a-1)))
//   L1MinusL2PowP     |x|_1                             |x|_2^p,  1 < p < 2
//   Zero              0                                 0
//   Custom            user supplied                     user supplied

#include "dcla/core.hpp"
#include "dcla/prox.hpp"

#include <optional>
#include <string>
#include <variant>

namespace dcla {

namespace reg {

struct L1MinusL2 {};
struct L1MinusSigmaQ {
  int q = 1;
};
struct CappedL1 {
  double theta = 1.0;
};
struct PiL {
  double theta = 1.0;
  double a = 2.0;
};
struct L1MinusL2PowP {
  double p = 1.5;
  /// Hoelder constant of grad |x|^p. Only an existence result is known, so
  /// this is configuration; the default 2^p * p is a conservative guess.
  /// Used by the dissipativity radius, never by a sampler step.
  std::optional<double> holder_constant;

  double holder_or_default() const;
};
struct Zero {};

/// User-supplied components. G1 / G2 / holder data feed lipschitz_info;
/// `full_prox` (prox of t*(r1 - r2)) enables PSGLA.
struct Custom {
  std::string name = "custom";
  ConvexFunction r1;
  ConvexFunction r2;
  double G1 = 0.0;
  std::optional<double> G2;
  std::optional<double> holder_kappa;
  std::optional<double> holder_M;
  std::function<Point(double, const Point&)> full_prox;
};

}  // namespace reg

using RegularizerKind = std::variant<reg::L1MinusL2, reg::L1MinusSigmaQ, reg::CappedL1, reg::PiL,
                                     reg::L1MinusL2PowP, reg::Zero, reg::Custom>;

struct DCRegularizer {
  RegularizerKind kind = reg::Zero{};
  double scale = 1.0;

  /// Checks scale > 0 (except Zero) and the per-kind parameter ranges.
  void validate() const;
  bool is_zero() const { return std::holds_alternative<reg::Zero>(kind); }
};

std::string kind_name(const DCRegularizer& r);

enum class Component { R1, R2 };

struct DCValue {
  double r1 = 0.0;
  double r2 = 0.0;
  double r = 0.0;
};

struct DCSubgradient {
  Point g1;
  Point g2;
};

/// Lipschitz bound G2 on the subgradients of r2.
struct LipschitzR2 {
  double G2 = 0.0;
};
/// r2 differentiable with (kappa, M)-Hoelder gradient.
struct HolderR2 {
  double kappa = 0.5;
  double M = 1.0;
};

struct RegularizerInfo {
  double G1 = 0.0;
  std::variant<LipschitzR2, HolderR2> r2_regularity = LipschitzR2{};
  /// Set when grad r2 is Lipschitz (DC-LA-S eligible).
  std::optional<double> L_r2;
};

/// Scaled values of r1, r2 and r = r1 - r2. Throws InvalidArgument for
/// L1MinusSigmaQ with q > d.
DCValue dc_eval(const DCRegularizer& reg, const Point& x);

/// Subgradient selections g1 in d(tau r1)(x), g2 in d(tau r2)(x).
///
/// sign(0) := 0, ties among the q largest magnitudes go to the lowest
/// index, and the l2 subgradient at 0 is 0.
DCSubgradient dc_subgradient(const DCRegularizer& reg, const Point& x);

/// prox_{t tau r_which}(x). Throws Unsupported where no prox is available
/// (the sigma_q component for q < d, or a Custom component without prox).
Point component_prox(const DCRegularizer& reg, Component which, double t, const Point& x);

/// The scaled component tau*r_which packaged as a prox-capable function.
ConvexFunction component(const DCRegularizer& reg, Component which);

/// True when component_prox(reg, which, ...) is available for dimension d.
bool has_component_prox(const DCRegularizer& reg, Component which, int d);

/// prox_{t r} of the whole nonconvex r (PSGLA). Available for Zero,
/// L1MinusL2 (closed form with eps = 1) and Custom with `full_prox`.
Point full_prox(const DCRegularizer& reg, double t, const Point& x);
bool has_full_prox(const DCRegularizer& reg);

/// Lipschitz / Hoelder constants of the scaled components in dimension d.
RegularizerInfo lipschitz_info(const DCRegularizer& reg, int d);

}  // namespace dcla
