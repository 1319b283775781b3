#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dcla {

/// A point of the state space R^d.
using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error types. Everything derives from std::runtime_error or
// std::invalid_argument so callers can catch broadly.

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested (regularizer, operation) pair has no implementation.
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sampler step produced or consumed a NaN/Inf.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative routine (bracketing, quadrature) ran out of budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool all_finite(const Point& x);

/// Throws InvalidArgument naming `what` if x is empty or holds NaN/Inf.
void require_valid_point(const Point& x, std::string_view what);

/// Deterministic stream of standard normal draws.
///
/// One stream per chain, keyed by (seed, stream_index). The engine is
/// seeded through std::seed_seq so neighbouring indices give unrelated
/// states; results never depend on which thread runs the chain.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index);

  double normal();
  Point normal(int d);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }
  std::uint64_t draws() const { return draws_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// d independent N(0, 1) draws; advances the stream by d.
Point draw_normal(RandomStream& stream, int d);

struct ChainState {
  Point x;
  std::uint64_t step_count = 0;
};

enum class SamplerKind { ULA, MoreauULA, PSGLA, DCLA, DCLAS };

std::string_view to_string(SamplerKind kind);
SamplerKind sampler_kind_from_string(std::string_view name);

struct SamplerConfig {
  double gamma = 0.005;
  double lambda = 0.01;
  int n_chains = 1;
  int n_steps = 1;
  std::uint64_t seed = 0;
  SamplerKind kind = SamplerKind::DCLA;

  /// Throws InvalidArgument on gamma/lambda <= 0 or non-positive counts.
  /// n_steps == 0 is accepted (a zero-length run returns the initial state).
  void validate() const;
};

}  // namespace dcla
