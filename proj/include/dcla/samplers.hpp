#pragma once

// Langevin transition kernels for V = f + r1 - r2.
//
// Each scheme comes in two flavours: `*_update(..., x, z)` is the
// deterministic map for a given standard normal increment z, and
// `*_step(..., state, rng)` draws z from the chain's stream and applies it.
// Updates throw NonFiniteError if the new state is not finite.

#include "dcla/core.hpp"
#include "dcla/potentials.hpp"

#include <functional>
#include <optional>
#include <string>

namespace dcla {

using Drift = std::function<Point(const Point&)>;

/// x - gamma drift(x) + sqrt(2 gamma) z.
Point ula_update(const Drift& drift, double gamma, const Point& x, const Point& z);
ChainState ula_step(const Drift& drift, double gamma, const ChainState& state, RandomStream& rng);

/// grad f + g1 - g2 with the catalog subgradient selections (plain ULA on
/// the nonsmooth V).
Point subgradient_drift(const DCPotential& V, const Point& x);

/// grad V_lam = grad f + grad r1^lam - grad r2^lam.
Point moreau_drift(const DCPotential& V, double lam, const Point& x);

Point moreau_ula_update(const DCPotential& V, double lam, double gamma, const Point& x,
                        const Point& z);
ChainState moreau_ula_step(const DCPotential& V, double lam, double gamma,
                           const ChainState& state, RandomStream& rng);

/// prox_{gamma r}(x - gamma grad f(x) + sqrt(2 gamma) z). Throws Unsupported
/// when the regularizer has no prox of the full r.
Point psgla_update(const DCPotential& V, double gamma, const Point& x, const Point& z);
ChainState psgla_step(const DCPotential& V, double gamma, const ChainState& state,
                      RandomStream& rng);

/// One DC-LA step, composed from the two elementary stages:
///   Y  = X - gamma grad f(X) + gamma (X - prox_{lam r2}(X)) / lam + sqrt(2 gamma) Z
///   X' = Y - gamma/(gamma+lam) (Y - prox_{(gamma+lam) r1}(Y))
/// which is the forward step on f - r2^lam followed by prox_{gamma r1^lam}.
Point dcla_update(const DCPotential& V, double lam, double gamma, const Point& x, const Point& z);
ChainState dcla_step(const DCPotential& V, double lam, double gamma, const ChainState& state,
                     RandomStream& rng);

/// The same transition written as a single expression in X and Z.
Point dcla_unrolled_update(const DCPotential& V, double lam, double gamma, const Point& x,
                           const Point& z);
ChainState dcla_unrolled_step(const DCPotential& V, double lam, double gamma,
                              const ChainState& state, RandomStream& rng);

/// DC-LA-S: r2 smooth, so its gradient enters the forward step directly.
///   Y  = X - gamma grad f(X) + gamma grad r2(X) + sqrt(2 gamma) Z
///   X' = prox_{gamma r1^lam}(Y)
/// Requires V.smooth_r2; throws InvalidArgument otherwise.
Point dclas_update(const DCPotential& V, double lam, double gamma, const Point& x,
                   const Point& z);
ChainState dclas_step(const DCPotential& V, double lam, double gamma, const ChainState& state,
                      RandomStream& rng);

/// A potential bound to one scheme and its (gamma, lambda).
class StepKernel {
 public:
  /// Checks gamma > 0, lambda > 0 and that the scheme's operators exist
  /// for V (full prox for PSGLA, component proxes for DC-LA, grad r2 for
  /// DC-LA-S).
  StepKernel(DCPotential V, SamplerKind kind, double gamma, double lambda);

  Point advance(const Point& x, const Point& z) const;
  void step(ChainState& state, RandomStream& rng) const;

  SamplerKind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  double lambda() const { return lambda_; }
  const DCPotential& potential() const { return V_; }
  int dim() const { return V_.d; }

 private:
  DCPotential V_;
  SamplerKind kind_;
  double gamma_;
  double lambda_;
};

/// Non-empty when gamma exceeds the q = 1 step-size bound for DC-LA /
/// DC-LA-S. Large steps are often fine in practice, hence a warning.
std::optional<std::string> stepsize_warning(const StepKernel& kernel);

enum class NonFinitePolicy {
  Throw,  ///< rethrow with the chain index attached
  Mark,   ///< fill the chain's row with NaN and continue
};

struct ChainRunOptions {
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
  NonFinitePolicy on_nonfinite = NonFinitePolicy::Throw;
  /// Receives the step-size warning, if any. Defaults to std::clog.
  std::function<void(const std::string&)> warn;
};

/// Runs config.n_chains independent chains of config.n_steps steps from
/// `init` and returns the final states, one row per chain. Chain i uses
/// RandomStream(config.seed, i), so the result does not depend on the
/// number of threads.
Matrix run_chains(const StepKernel& kernel, const SamplerConfig& config, const Point& init,
                  const ChainRunOptions& options = {});

/// One long chain; returns every state after the first `burn_in` steps,
/// (n_steps - burn_in) rows.
Matrix run_single_chain(const StepKernel& kernel, int n_steps, int burn_in, std::uint64_t seed,
                        const Point& init);

/// Number of rows of a run_chains result holding NaN (marked chains).
int count_nonfinite_rows(const Matrix& samples);

}  // namespace dcla
