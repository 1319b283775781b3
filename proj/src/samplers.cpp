#include "dcla/samplers.hpp"

#include <cmath>
#include <exception>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

namespace dcla {

namespace {

Point checked(Point x, const char* scheme) {
  if (!x.allFinite()) throw NonFiniteError(std::string(scheme) + ": state became non-finite");
  return x;
}

void check_step_args(double gamma, double lam) {
  if (!(gamma > 0.0)) throw InvalidArgument("step size gamma must be > 0");
  if (!(lam > 0.0)) throw InvalidArgument("smoothing lambda must be > 0");
}

ChainState advanced(const ChainState& s, Point x) { return {std::move(x), s.step_count + 1}; }

}  // namespace

Point ula_update(const Drift& drift, double gamma, const Point& x, const Point& z) {
  if (!(gamma > 0.0)) throw InvalidArgument("ula: gamma must be > 0");
  const Point b = drift(x);
  if (!b.allFinite()) throw NonFiniteError("ula: drift is non-finite");
  return checked(x - gamma * b + std::sqrt(2.0 * gamma) * z, "ula");
}

ChainState ula_step(const Drift& drift, double gamma, const ChainState& state, RandomStream& rng) {
  const Point z = rng.normal(static_cast<int>(state.x.size()));
  return advanced(state, ula_update(drift, gamma, state.x, z));
}

Point subgradient_drift(const DCPotential& V, const Point& x) {
  const DCSubgradient g = dc_subgradient(V.reg, x);
  return V.f_grad(x) + g.g1 - g.g2;
}

Point moreau_drift(const DCPotential& V, double lam, const Point& x) {
  const Point grad_r1 = (x - component_prox(V.reg, Component::R1, lam, x)) / lam;
  const Point grad_r2 = (x - component_prox(V.reg, Component::R2, lam, x)) / lam;
  return V.f_grad(x) + grad_r1 - grad_r2;
}

Point moreau_ula_update(const DCPotential& V, double lam, double gamma, const Point& x,
                        const Point& z) {
  check_step_args(gamma, lam);
  return ula_update([&](const Point& y) { return moreau_drift(V, lam, y); }, gamma, x, z);
}

ChainState moreau_ula_step(const DCPotential& V, double lam, double gamma,
                           const ChainState& state, RandomStream& rng) {
  const Point z = rng.normal(V.d);
  return advanced(state, moreau_ula_update(V, lam, gamma, state.x, z));
}

Point psgla_update(const DCPotential& V, double gamma, const Point& x, const Point& z) {
  if (!(gamma > 0.0)) throw InvalidArgument("psgla: gamma must be > 0");
  const Point forward = x - gamma * V.f_grad(x) + std::sqrt(2.0 * gamma) * z;
  return checked(full_prox(V.reg, gamma, forward), "psgla");
}

ChainState psgla_step(const DCPotential& V, double gamma, const ChainState& state,
                      RandomStream& rng) {
  const Point z = rng.normal(V.d);
  return advanced(state, psgla_update(V, gamma, state.x, z));
}

Point dcla_update(const DCPotential& V, double lam, double gamma, const Point& x, const Point& z) {
  check_step_args(gamma, lam);
  const Point grad_r2 = (x - component_prox(V.reg, Component::R2, lam, x)) / lam;
  const Point y = x - gamma * V.f_grad(x) + gamma * grad_r2 + std::sqrt(2.0 * gamma) * z;
  const Point p = component_prox(V.reg, Component::R1, gamma + lam, y);
  return checked(y - (gamma / (gamma + lam)) * (y - p), "dcla");
}

ChainState dcla_step(const DCPotential& V, double lam, double gamma, const ChainState& state,
                     RandomStream& rng) {
  const Point z = rng.normal(V.d);
  return advanced(state, dcla_update(V, lam, gamma, state.x, z));
}

Point dcla_unrolled_update(const DCPotential& V, double lam, double gamma, const Point& x,
                           const Point& z) {
  check_step_args(gamma, lam);
  const double sum = gamma + lam;
  const double noise = std::sqrt(2.0 * gamma);
  const Point grad_f = V.f_grad(x);
  const Point prox_r2 = component_prox(V.reg, Component::R2, lam, x);
  const Point inner = (sum / lam) * x - gamma * grad_f - (gamma / lam) * prox_r2 + noise * z;
  return checked(x - (gamma * lam / sum) * grad_f - (gamma / sum) * prox_r2 +
                     (lam * noise / sum) * z +
                     (gamma / sum) * component_prox(V.reg, Component::R1, sum, inner),
                 "dcla_unrolled");
}

ChainState dcla_unrolled_step(const DCPotential& V, double lam, double gamma,
                              const ChainState& state, RandomStream& rng) {
  const Point z = rng.normal(V.d);
  return advanced(state, dcla_unrolled_update(V, lam, gamma, state.x, z));
}

Point dclas_update(const DCPotential& V, double lam, double gamma, const Point& x,
                   const Point& z) {
  check_step_args(gamma, lam);
  if (!V.smooth_r2 || !V.smooth_r2->grad) {
    throw InvalidArgument("dclas: potential has no smooth r2 gradient");
  }
  const Point y = x - gamma * V.f_grad(x) + gamma * V.smooth_r2->grad(x) +
                  std::sqrt(2.0 * gamma) * z;
  const Point p = component_prox(V.reg, Component::R1, gamma + lam, y);
  return checked(y - (gamma / (gamma + lam)) * (y - p), "dclas");
}

ChainState dclas_step(const DCPotential& V, double lam, double gamma, const ChainState& state,
                      RandomStream& rng) {
  const Point z = rng.normal(V.d);
  return advanced(state, dclas_update(V, lam, gamma, state.x, z));
}

StepKernel::StepKernel(DCPotential V, SamplerKind kind, double gamma, double lambda)
    : V_(std::move(V)), kind_(kind), gamma_(gamma), lambda_(lambda) {
  check_step_args(gamma_, lambda_);
  const auto name = std::string(to_string(kind_));
  switch (kind_) {
    case SamplerKind::ULA:
      break;
    case SamplerKind::PSGLA:
      if (!has_full_prox(V_.reg)) {
        throw Unsupported(name + ": no prox of the full regularizer " + kind_name(V_.reg));
      }
      break;
    case SamplerKind::MoreauULA:
    case SamplerKind::DCLA:
      for (auto c : {Component::R1, Component::R2}) {
        if (!has_component_prox(V_.reg, c, V_.d)) {
          throw Unsupported(name + ": missing component prox for " + kind_name(V_.reg));
        }
      }
      break;
    case SamplerKind::DCLAS:
      if (!V_.smooth_r2 || !V_.smooth_r2->grad) {
        throw InvalidArgument(name + ": potential has no smooth r2 gradient");
      }
      if (!has_component_prox(V_.reg, Component::R1, V_.d)) {
        throw Unsupported(name + ": missing r1 prox for " + kind_name(V_.reg));
      }
      break;
  }
}

Point StepKernel::advance(const Point& x, const Point& z) const {
  switch (kind_) {
    case SamplerKind::ULA:
      return ula_update([this](const Point& y) { return subgradient_drift(V_, y); }, gamma_, x, z);
    case SamplerKind::MoreauULA:
      return moreau_ula_update(V_, lambda_, gamma_, x, z);
    case SamplerKind::PSGLA:
      return psgla_update(V_, gamma_, x, z);
    case SamplerKind::DCLA:
      return dcla_update(V_, lambda_, gamma_, x, z);
    case SamplerKind::DCLAS:
      return dclas_update(V_, lambda_, gamma_, x, z);
  }
  throw InvalidArgument("unknown sampler kind");
}

void StepKernel::step(ChainState& state, RandomStream& rng) const {
  const Point z = rng.normal(V_.d);
  state.x = advance(state.x, z);
  ++state.step_count;
}

std::optional<std::string> stepsize_warning(const StepKernel& kernel) {
  const auto kind = kernel.kind();
  if (kind != SamplerKind::DCLA && kind != SamplerKind::DCLAS) return std::nullopt;
  const DCPotential& V = kernel.potential();
  double bound = 0.0;
  try {
    const DissipativityConstants dc = dissipativity_constants(V, V.d);
    StepsizeScheme scheme = DclaBound{};
    if (kind == SamplerKind::DCLAS) scheme = DclasBound{V.smooth_r2->L_r2};
    bound = max_stepsize(1, dc.mu, kernel.lambda(), V.L_f(), scheme);
  } catch (const std::exception&) {
    // Constants not computable for this potential; nothing to compare.
    return std::nullopt;
  }
  if (kernel.gamma() <= bound) return std::nullopt;
  std::ostringstream msg;
  msg << to_string(kind) << ": gamma = " << kernel.gamma()
      << " exceeds the q=1 convergence bound " << bound;
  return msg.str();
}

Matrix run_chains(const StepKernel& kernel, const SamplerConfig& config, const Point& init,
                  const ChainRunOptions& options) {
  config.validate();
  require_valid_point(init, "run_chains init");
  const int d = kernel.dim();
  if (init.size() != d) throw InvalidArgument("run_chains: init has wrong dimension");

  if (auto w = stepsize_warning(kernel)) {
    if (options.warn) {
      options.warn(*w);
    } else {
      std::clog << "warning: " << *w << '\n';
    }
  }

  const int n = config.n_chains;
  Matrix out(n, d);
  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));

  std::mutex error_mutex;
  int first_failed = n;
  std::exception_ptr first_error;

  auto run_one = [&](int chain) {
    RandomStream rng(config.seed, static_cast<std::uint64_t>(chain));
    ChainState state{init, 0};
    try {
      for (int k = 0; k < config.n_steps; ++k) kernel.step(state, rng);
      out.row(chain) = state.x.transpose();
    } catch (const NonFiniteError& e) {
      if (options.on_nonfinite == NonFinitePolicy::Mark) {
        out.row(chain).setConstant(std::numeric_limits<double>::quiet_NaN());
        return;
      }
      std::lock_guard lock(error_mutex);
      if (chain < first_failed) {
        first_failed = chain;
        first_error = std::make_exception_ptr(NonFiniteError(
            "chain " + std::to_string(chain) + " at step " + std::to_string(state.step_count) +
            ": " + e.what()));
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (chain < first_failed) {
        first_failed = chain;
        first_error = std::current_exception();
      }
    }
  };

  if (threads == 1) {
    for (int c = 0; c < n && !first_error; ++c) run_one(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int c = static_cast<int>(t); c < n; c += static_cast<int>(threads)) run_one(c);
      });
    }
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

Matrix run_single_chain(const StepKernel& kernel, int n_steps, int burn_in, std::uint64_t seed,
                        const Point& init) {
  if (burn_in < 0 || n_steps <= burn_in) {
    throw InvalidArgument("run_single_chain: need 0 <= burn_in < n_steps");
  }
  require_valid_point(init, "run_single_chain init");
  if (init.size() != kernel.dim()) throw InvalidArgument("run_single_chain: init has wrong dimension");
  RandomStream rng(seed, 0);
  ChainState state{init, 0};
  Matrix out(n_steps - burn_in, kernel.dim());
  for (int k = 0; k < n_steps; ++k) {
    kernel.step(state, rng);
    if (k >= burn_in) out.row(k - burn_in) = state.x.transpose();
  }
  return out;
}

int count_nonfinite_rows(const Matrix& samples) {
  int n = 0;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    if (!samples.row(i).allFinite()) ++n;
  }
  return n;
}

}  // namespace dcla
