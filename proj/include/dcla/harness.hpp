#pragma once

// Experiment orchestration: JSON configuration, multi-sampler runs with
// binned-KL evaluation, and (lambda, gamma) ablation sweeps.
//
// The configuration schema is documented in docs/config_schema.md.

#include "dcla/core.hpp"
#include "dcla/diagnostics.hpp"
#include "dcla/potentials.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dcla {

constexpr int kConfigSchemaVersion = 1;

/// Schema violation; the message starts with the offending field path.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class RunMode { MultiChainLast, SingleChainBurnIn };

struct HistogramSpec {
  std::optional<Box2D> box;  ///< default_box() when absent
  int bins = 40;
  std::vector<int> bin_sweep{20, 30, 40, 60};
  int quad_order = 8;
  double quad_tol = 1e-8;
};

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  Point mean;
  Matrix precision;
  DCRegularizer regularizer;
  std::vector<SamplerKind> samplers{SamplerKind::ULA, SamplerKind::MoreauULA, SamplerKind::PSGLA,
                                    SamplerKind::DCLA};
  double gamma = 0.005;
  double lambda = 0.01;
  int n_chains = 5000;
  int n_steps = 1000;
  std::uint64_t seed = 0;
  Point init;  ///< zeros when absent
  HistogramSpec histogram;
  RunMode mode = RunMode::MultiChainLast;
  int burn_in = 500;
  std::string output_dir = "out";

  /// The potential described by the config (DC-LA-S gets a zero grad r2
  /// when the regularizer is Zero).
  DCPotential potential() const;
  /// Bin resolutions to evaluate: bin_sweep plus `bins`, sorted, unique.
  std::vector<int> resolutions() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
/// Reads and validates a config file. Throws ConfigError.
ExperimentConfig parse_config(const std::filesystem::path& path);

struct RunOptions {
  unsigned threads = 0;  ///< 0: hardware concurrency
  bool quiet = false;
};

/// Worker count from DCLA_THREADS, or 0 (auto) when unset or invalid.
unsigned threads_from_env();

struct SamplerReport {
  SamplerKind kind;
  std::vector<std::pair<int, double>> kl;  ///< (bins, binned KL)
  std::vector<std::pair<int, long>> n_outside;
  Moments moments;
  double wall_time_s = 0.0;
};

struct RunReport {
  double Z = 0.0;
  Box2D box;
  std::vector<SamplerReport> samplers;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> files;
  double wall_time_s = 0.0;
  nlohmann::json metrics;
};

/// Runs every configured sampler and writes samples_<kind>.csv,
/// hist_<kind>.csv, target_hist.csv and metrics.json under `out_dir`.
/// Histograms and KL are produced only for two-dimensional potentials.
RunReport run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                         const RunOptions& options = {});

struct AblationRow {
  double lambda = 0.0;
  double gamma = 0.0;
  double binned_kl = 0.0;
  int n_nonfinite_chains = 0;
};

/// DC-LA over the (lambda, gamma) grid at the config's `bins` resolution.
/// Divergent chains are dropped and counted. Writes ablation.csv and
/// ablation_meta.json under `out_dir`.
std::vector<AblationRow> run_ablation(const ExperimentConfig& cfg,
                                      const std::vector<double>& lambdas,
                                      const std::vector<double>& gammas,
                                      const std::filesystem::path& out_dir,
                                      const RunOptions& options = {});

/// Comma-separated list of reals ("1e-4,3e-4").
std::vector<double> parse_real_list(const std::string& text);

}  // namespace dcla
