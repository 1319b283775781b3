#include "dcla/harness.hpp"

#include "dcla/samplers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

namespace dcla {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

// A JSON object with a field path; rejects keys outside `allowed`.
class Obj {
 public:
  Obj(const json& j, std::string path, std::initializer_list<const char*> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items()) {
      if (!ok.count(k)) fail(join(path_, k), "unknown key");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& at(const char* key) const {
    if (!j_.contains(key)) fail(join(path_, key), "required field is missing");
    return j_.at(key);
  }
  std::string path(const char* key) const { return join(path_, key); }

  double real(const char* key, double def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number()) fail(path(key), "expected a number");
    return v.get<double>();
  }
  long integer(const char* key, long def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(path(key), "expected an integer");
    return v.get<long>();
  }
  std::string string(const char* key, const std::string& def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(path(key), "expected a string");
    return v.get<std::string>();
  }

 private:
  const json& j_;
  std::string path_;
};

Point read_vector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of numbers");
  Point out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    if (!std::isfinite(out[static_cast<Eigen::Index>(i)])) {
      fail(path + "[" + std::to_string(i) + "]", "must be finite");
    }
  }
  return out;
}

Matrix read_matrix(const json& v, const std::string& path, Eigen::Index d) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != d) {
    fail(path, "expected " + std::to_string(d) + " rows");
  }
  Matrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    const Point row = read_vector(v[static_cast<std::size_t>(i)], row_path);
    if (row.size() != d) fail(row_path, "expected " + std::to_string(d) + " columns");
    out.row(i) = row.transpose();
  }
  return out;
}

json to_json(const Point& x) { return std::vector<double>(x.data(), x.data() + x.size()); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Point(m.row(i).transpose())));
  return rows;
}

json box_json(const Box2D& b) { return {b.x_lo, b.x_hi, b.y_lo, b.y_hi}; }

DCRegularizer read_regularizer(const json& j, const std::string& path) {
  Obj o(j, path, {"kind", "scale", "params"});
  const std::string kind = o.string("kind", "Zero");
  DCRegularizer r;
  r.scale = o.real("scale", 1.0);
  static const json empty = json::object();
  const json& params = o.has("params") ? o.at("params") : empty;
  const std::string ppath = o.path("params");

  if (kind == "L1MinusL2") {
    Obj(params, ppath, {});
    r.kind = reg::L1MinusL2{};
  } else if (kind == "L1MinusSigmaQ") {
    Obj p(params, ppath, {"q"});
    r.kind = reg::L1MinusSigmaQ{static_cast<int>(p.integer("q", 1))};
  } else if (kind == "CappedL1") {
    Obj p(params, ppath, {"theta"});
    r.kind = reg::CappedL1{p.real("theta", 1.0)};
  } else if (kind == "PiL") {
    Obj p(params, ppath, {"theta", "a"});
    r.kind = reg::PiL{p.real("theta", 1.0), p.real("a", 2.0)};
  } else if (kind == "L1MinusL2PowP") {
    Obj p(params, ppath, {"p", "holder_constant"});
    reg::L1MinusL2PowP k;
    k.p = p.real("p", 1.5);
    if (p.has("holder_constant")) k.holder_constant = p.real("holder_constant", 0.0);
    r.kind = k;
  } else if (kind == "Zero") {
    Obj(params, ppath, {});
    r.kind = reg::Zero{};
  } else {
    fail(o.path("kind"), "unknown regularizer kind '" + kind + "'");
  }
  try {
    r.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return r;
}

json regularizer_json(const DCRegularizer& r) {
  json params = json::object();
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, reg::L1MinusSigmaQ>) {
          params["q"] = k.q;
        } else if constexpr (std::is_same_v<K, reg::CappedL1>) {
          params["theta"] = k.theta;
        } else if constexpr (std::is_same_v<K, reg::PiL>) {
          params["theta"] = k.theta;
          params["a"] = k.a;
        } else if constexpr (std::is_same_v<K, reg::L1MinusL2PowP>) {
          params["p"] = k.p;
          if (k.holder_constant) params["holder_constant"] = *k.holder_constant;
        } else if constexpr (std::is_same_v<K, reg::Custom>) {
          throw InvalidArgument("a Custom regularizer cannot be written to a config");
        }
      },
      r.kind);
  return {{"kind", kind_name(r)}, {"scale", r.scale}, {"params", params}};
}

std::string_view mode_name(RunMode m) {
  return m == RunMode::MultiChainLast ? "multi_chain_last" : "single_chain_burn_in";
}

}  // namespace

DCPotential ExperimentConfig::potential() const {
  DCPotential V(QuadraticF(mean, precision), regularizer);
  if (regularizer.is_zero()) {
    const auto d = mean.size();
    V.smooth_r2 = SmoothR2{[d](const Point&) { return Point(Point::Zero(d)); }, 0.0};
  }
  return V;
}

std::vector<int> ExperimentConfig::resolutions() const {
  std::set<int> s(histogram.bin_sweep.begin(), histogram.bin_sweep.end());
  s.insert(histogram.bins);
  return {s.begin(), s.end()};
}

ExperimentConfig config_from_json(const json& j) {
  Obj root(j, "", {"schema_version", "potential", "samplers", "sampler", "histogram", "mode",
                   "output_dir"});
  ExperimentConfig cfg;

  const json& ver = root.at("schema_version");
  if (!ver.is_number_integer() || ver.get<long>() != kConfigSchemaVersion) {
    fail("schema_version", "unsupported version (expected " +
                               std::to_string(kConfigSchemaVersion) + ")");
  }

  Obj pot(root.at("potential"), "potential", {"f", "regularizer"});
  Obj f(pot.at("f"), "potential.f", {"mean", "precision"});
  cfg.mean = read_vector(f.at("mean"), "potential.f.mean");
  cfg.precision = read_matrix(f.at("precision"), "potential.f.precision", cfg.mean.size());
  try {
    QuadraticF check(cfg.mean, cfg.precision);
  } catch (const std::invalid_argument& e) {
    fail("potential.f.precision", e.what());
  }
  if (pot.has("regularizer")) {
    cfg.regularizer = read_regularizer(pot.at("regularizer"), "potential.regularizer");
  }
  const int d = static_cast<int>(cfg.mean.size());

  if (root.has("samplers")) {
    const json& s = root.at("samplers");
    if (!s.is_array() || s.empty()) fail("samplers", "expected a non-empty array");
    cfg.samplers.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string p = "samplers[" + std::to_string(i) + "]";
      if (!s[i].is_string()) fail(p, "expected a sampler name");
      try {
        const SamplerKind k = sampler_kind_from_string(s[i].get<std::string>());
        if (std::find(cfg.samplers.begin(), cfg.samplers.end(), k) != cfg.samplers.end()) {
          fail(p, "duplicate sampler");
        }
        cfg.samplers.push_back(k);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        fail(p, e.what());
      }
    }
  }

  cfg.init = Point::Zero(d);
  if (root.has("sampler")) {
    Obj s(root.at("sampler"), "sampler", {"gamma", "lambda", "n_chains", "n_steps", "seed", "init"});
    cfg.gamma = s.real("gamma", cfg.gamma);
    cfg.lambda = s.real("lambda", cfg.lambda);
    const long nc = s.integer("n_chains", cfg.n_chains);
    const long ns = s.integer("n_steps", cfg.n_steps);
    if (nc < 1 || nc > 100000000) fail("sampler.n_chains", "must be >= 1");
    if (ns < 1 || ns > 1000000000) fail("sampler.n_steps", "must be >= 1");
    cfg.n_chains = static_cast<int>(nc);
    cfg.n_steps = static_cast<int>(ns);
    if (s.has("seed")) {
      const json& v = s.at("seed");
      if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        fail("sampler.seed", "expected a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    }
    if (s.has("init")) {
      cfg.init = read_vector(s.at("init"), "sampler.init");
      if (cfg.init.size() != d) fail("sampler.init", "dimension differs from potential.f.mean");
    }
  }
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) fail("sampler.gamma", "gamma must be > 0");
  if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda)) {
    fail("sampler.lambda", "lambda must be > 0");
  }

  if (root.has("histogram")) {
    Obj h(root.at("histogram"), "histogram", {"box", "bins", "bin_sweep", "quad_order", "quad_tol"});
    if (h.has("box")) {
      const Point b = read_vector(h.at("box"), "histogram.box");
      if (b.size() != 4) fail("histogram.box", "expected [x_lo, x_hi, y_lo, y_hi]");
      if (!(b[1] > b[0]) || !(b[3] > b[2])) fail("histogram.box", "need x_lo < x_hi and y_lo < y_hi");
      cfg.histogram.box = Box2D{b[0], b[1], b[2], b[3]};
    }
    const long bins = h.integer("bins", cfg.histogram.bins);
    if (bins < 2 || bins > 10000) fail("histogram.bins", "must be >= 2");
    cfg.histogram.bins = static_cast<int>(bins);
    if (h.has("bin_sweep")) {
      const json& s = h.at("bin_sweep");
      if (!s.is_array()) fail("histogram.bin_sweep", "expected an array of integers");
      cfg.histogram.bin_sweep.clear();
      for (std::size_t i = 0; i < s.size(); ++i) {
        const std::string p = "histogram.bin_sweep[" + std::to_string(i) + "]";
        if (!s[i].is_number_integer()) fail(p, "expected an integer");
        const long n = s[i].get<long>();
        if (n < 2 || n > 10000) fail(p, "must be >= 2");
        cfg.histogram.bin_sweep.push_back(static_cast<int>(n));
      }
    }
    const long order = h.integer("quad_order", cfg.histogram.quad_order);
    if (order < 1 || order > 64) fail("histogram.quad_order", "must lie in [1, 64]");
    cfg.histogram.quad_order = static_cast<int>(order);
    cfg.histogram.quad_tol = h.real("quad_tol", cfg.histogram.quad_tol);
    if (!(cfg.histogram.quad_tol > 0.0)) fail("histogram.quad_tol", "must be > 0");
  }

  if (root.has("mode")) {
    Obj m(root.at("mode"), "mode", {"type", "burn_in"});
    const std::string type = m.string("type", "multi_chain_last");
    if (type == "multi_chain_last") {
      cfg.mode = RunMode::MultiChainLast;
      if (m.has("burn_in")) fail("mode.burn_in", "only valid for single_chain_burn_in");
    } else if (type == "single_chain_burn_in") {
      cfg.mode = RunMode::SingleChainBurnIn;
      const long b = m.integer("burn_in", cfg.burn_in);
      if (b < 0) fail("mode.burn_in", "must be >= 0");
      cfg.burn_in = static_cast<int>(b);
      if (cfg.burn_in >= cfg.n_steps) fail("mode.burn_in", "must be < sampler.n_steps");
    } else {
      fail("mode.type", "expected multi_chain_last or single_chain_burn_in");
    }
  }

  cfg.output_dir = root.string("output_dir", cfg.output_dir);

  // Every sampler must be runnable on this potential.
  const DCPotential V = cfg.potential();
  for (std::size_t i = 0; i < cfg.samplers.size(); ++i) {
    try {
      StepKernel(V, cfg.samplers[i], cfg.gamma, cfg.lambda);
    } catch (const std::exception& e) {
      fail("samplers[" + std::to_string(i) + "]", e.what());
    }
  }
  if (d != 2 && cfg.histogram.box) fail("histogram.box", "only meaningful for d = 2");
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json samplers = json::array();
  for (auto k : cfg.samplers) samplers.push_back(std::string(to_string(k)));
  json hist = {{"bins", cfg.histogram.bins},
               {"bin_sweep", cfg.histogram.bin_sweep},
               {"quad_order", cfg.histogram.quad_order},
               {"quad_tol", cfg.histogram.quad_tol}};
  if (cfg.histogram.box) hist["box"] = box_json(*cfg.histogram.box);
  json mode = {{"type", mode_name(cfg.mode)}};
  if (cfg.mode == RunMode::SingleChainBurnIn) mode["burn_in"] = cfg.burn_in;
  return {
      {"schema_version", cfg.schema_version},
      {"potential",
       {{"f", {{"mean", to_json(cfg.mean)}, {"precision", to_json(cfg.precision)}}},
        {"regularizer", regularizer_json(cfg.regularizer)}}},
      {"samplers", samplers},
      {"sampler",
       {{"gamma", cfg.gamma},
        {"lambda", cfg.lambda},
        {"n_chains", cfg.n_chains},
        {"n_steps", cfg.n_steps},
        {"seed", cfg.seed},
        {"init", to_json(cfg.init)}}},
      {"histogram", hist},
      {"mode", mode},
      {"output_dir", cfg.output_dir},
  };
}

ExperimentConfig parse_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return config_from_json(j);
}

unsigned threads_from_env() {
  const char* v = std::getenv("DCLA_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) return 0;
  return static_cast<unsigned>(n);
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kDefaultCoverage = 0.999;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void write_samples_csv(const fs::path& p, const Matrix& samples) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  for (Eigen::Index c = 0; c < samples.cols(); ++c) os << (c ? "," : "") << 'x' << c;
  os << '\n' << std::setprecision(17);
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    for (Eigen::Index c = 0; c < samples.cols(); ++c) os << (c ? "," : "") << samples(r, c);
    os << '\n';
  }
}

void write_hist_file(const fs::path& p, const Histogram2D& h) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  write_histogram_csv(os, h);
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << j.dump(2) << '\n';
}

struct Evaluation {
  Box2D box;
  std::string box_rule;
  double Z = 0.0;
  std::vector<int> resolutions;
  std::vector<std::pair<std::vector<double>, std::vector<double>>> edges;
  std::vector<Histogram2D> target;
};

Evaluation prepare_evaluation(const ExperimentConfig& cfg, const DCPotential& V,
                              const std::vector<int>& resolutions) {
  Evaluation ev;
  if (cfg.histogram.box) {
    ev.box = *cfg.histogram.box;
    ev.box_rule = "config";
  } else {
    ev.box = default_box(V, kDefaultCoverage, cfg.histogram.quad_tol);
    ev.box_rule = "smallest square around the mean holding 99.9% of the mass within 6/sqrt(mu_f)";
  }
  ev.Z = normalize_density(V, ev.box, cfg.histogram.quad_tol);
  ev.resolutions = resolutions;
  for (int n : resolutions) {
    auto xe = aligned_edges(ev.box.x_lo, ev.box.x_hi, n);
    auto ye = aligned_edges(ev.box.y_lo, ev.box.y_hi, n);
    ev.target.push_back(target_hist(V, ev.Z, xe, ye, cfg.histogram.quad_order));
    ev.edges.emplace_back(std::move(xe), std::move(ye));
  }
  return ev;
}

json evaluation_json(const Evaluation& ev) {
  return {{"Z", ev.Z}, {"box", box_json(ev.box)}, {"box_rule", ev.box_rule},
          {"bin_resolutions", ev.resolutions}};
}

SamplerConfig sampler_config(const ExperimentConfig& cfg, SamplerKind kind, double gamma,
                             double lambda) {
  SamplerConfig sc;
  sc.gamma = gamma;
  sc.lambda = lambda;
  sc.n_chains = cfg.n_chains;
  sc.n_steps = cfg.n_steps;
  sc.seed = cfg.seed;
  sc.kind = kind;
  return sc;
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir,
                         const RunOptions& options) {
  const auto t_start = Clock::now();
  fs::create_directories(out_dir);
  RunReport report;
  const DCPotential V = cfg.potential();
  const bool two_d = V.d == 2;

  auto warn = [&](const std::string& w) {
    report.warnings.push_back(w);
    if (!options.quiet) std::clog << "warning: " << w << '\n';
  };

  const std::vector<int> res = cfg.resolutions();
  std::optional<Evaluation> ev;
  if (two_d) {
    ev = prepare_evaluation(cfg, V, res);
    report.Z = ev->Z;
    report.box = ev->box;
  } else {
    warn("dimension " + std::to_string(V.d) + ": histograms and KL are skipped");
  }
  const auto main_res = static_cast<std::size_t>(
      std::find(res.begin(), res.end(), cfg.histogram.bins) - res.begin());

  if (ev) {
    const fs::path p = out_dir / "target_hist.csv";
    write_hist_file(p, ev->target[main_res]);
    report.files.push_back(p);
  }

  json sampler_metrics = json::object();
  for (SamplerKind kind : cfg.samplers) {
    const auto t0 = Clock::now();
    const StepKernel kernel(V, kind, cfg.gamma, cfg.lambda);
    Matrix samples;
    if (cfg.mode == RunMode::MultiChainLast) {
      ChainRunOptions ro;
      ro.threads = options.threads;
      ro.warn = warn;
      samples = run_chains(kernel, sampler_config(cfg, kind, cfg.gamma, cfg.lambda), cfg.init, ro);
    } else {
      if (auto w = stepsize_warning(kernel)) warn(*w);
      samples = run_single_chain(kernel, cfg.n_steps, cfg.burn_in, cfg.seed, cfg.init);
    }

    SamplerReport sr;
    sr.kind = kind;
    const std::string name(to_string(kind));
    const fs::path sp = out_dir / ("samples_" + name + ".csv");
    write_samples_csv(sp, samples);
    report.files.push_back(sp);
    sr.moments = sample_moments(samples);

    json kl = json::object();
    json outside = json::object();
    if (ev) {
      for (std::size_t r = 0; r < ev->resolutions.size(); ++r) {
        const SampleHistogram h = histogram2d(samples, ev->edges[r].first, ev->edges[r].second);
        const double v = binned_kl(h.hist, ev->target[r]);
        sr.kl.emplace_back(ev->resolutions[r], v);
        sr.n_outside.emplace_back(ev->resolutions[r], h.n_outside);
        kl[std::to_string(ev->resolutions[r])] = v;
        outside[std::to_string(ev->resolutions[r])] = h.n_outside;
        if (r == main_res) {
          const fs::path hp = out_dir / ("hist_" + name + ".csv");
          write_hist_file(hp, h.hist);
          report.files.push_back(hp);
        }
      }
    }
    sr.wall_time_s = seconds_since(t0);
    sampler_metrics[name] = {{"binned_kl", kl},
                             {"n_outside", outside},
                             {"n_samples", samples.rows()},
                             {"mean", to_json(sr.moments.mean)},
                             {"cov", to_json(sr.moments.cov)},
                             {"wall_time_s", sr.wall_time_s}};
    report.samplers.push_back(std::move(sr));
  }

  report.wall_time_s = seconds_since(t_start);
  const fs::path mp = out_dir / "metrics.json";
  report.files.push_back(mp);
  json files = json::array();
  for (const auto& f : report.files) files.push_back(f.filename().string());

  json m = {{"schema_version", kConfigSchemaVersion},
            {"config", config_to_json(cfg)},
            {"seed", cfg.seed},
            {"dim", V.d},
            {"samplers", sampler_metrics},
            {"warnings", report.warnings},
            {"wall_time_s", report.wall_time_s},
            {"files", files}};
  if (ev) m["evaluation"] = evaluation_json(*ev);
  write_json(mp, m);
  report.metrics = std::move(m);
  return report;
}

std::vector<AblationRow> run_ablation(const ExperimentConfig& cfg,
                                      const std::vector<double>& lambdas,
                                      const std::vector<double>& gammas, const fs::path& out_dir,
                                      const RunOptions& options) {
  if (lambdas.empty() || gammas.empty()) throw InvalidArgument("run_ablation: empty grid");
  for (double v : lambdas) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("run_ablation: lambda must be > 0");
  }
  for (double v : gammas) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("run_ablation: gamma must be > 0");
  }
  const DCPotential V = cfg.potential();
  if (V.d != 2) throw InvalidArgument("run_ablation: potential must be two-dimensional");
  const auto t_start = Clock::now();
  fs::create_directories(out_dir);
  const Evaluation ev = prepare_evaluation(cfg, V, {cfg.histogram.bins});
  const auto& [xe, ye] = ev.edges.front();

  std::vector<AblationRow> rows;
  std::vector<std::string> warnings;
  for (double lam : lambdas) {
    for (double gam : gammas) {
      const StepKernel kernel(V, SamplerKind::DCLA, gam, lam);
      ChainRunOptions ro;
      ro.threads = options.threads;
      ro.on_nonfinite = NonFinitePolicy::Mark;
      ro.warn = [&](const std::string& w) { warnings.push_back(w); };
      const Matrix samples =
          run_chains(kernel, sampler_config(cfg, SamplerKind::DCLA, gam, lam), cfg.init, ro);

      AblationRow row{lam, gam, std::numeric_limits<double>::quiet_NaN(),
                      count_nonfinite_rows(samples)};
      if (row.n_nonfinite_chains < samples.rows()) {
        try {
          row.binned_kl = binned_kl(histogram2d(samples, xe, ye).hist, ev.target.front());
        } catch (const InvalidArgument&) {
          // every finite chain left the grid
        }
      }
      if (!options.quiet) {
        std::clog << "lambda=" << lam << " gamma=" << gam << " kl=" << row.binned_kl
                  << " nonfinite=" << row.n_nonfinite_chains << '\n';
      }
      rows.push_back(row);
    }
  }

  {
    std::ofstream os(out_dir / "ablation.csv");
    if (!os) throw std::runtime_error("cannot write ablation.csv");
    os << "lambda,gamma,binned_kl,n_nonfinite_chains\n" << std::setprecision(17);
    for (const auto& r : rows) {
      os << r.lambda << ',' << r.gamma << ',' << r.binned_kl << ',' << r.n_nonfinite_chains << '\n';
    }
  }
  json meta = {{"schema_version", kConfigSchemaVersion},
               {"config", config_to_json(cfg)},
               {"seed", cfg.seed},
               {"sampler", "DCLA"},
               {"lambda_grid", lambdas},
               {"gamma_grid", gammas},
               {"bins", cfg.histogram.bins},
               {"evaluation", evaluation_json(ev)},
               {"warnings", warnings},
               {"wall_time_s", seconds_since(t_start)},
               {"files", {"ablation.csv", "ablation_meta.json"}}};
  write_json(out_dir / "ablation_meta.json", meta);
  return rows;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw InvalidArgument("not a number: '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size()) throw InvalidArgument("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("empty list");
  return out;
}

}  // namespace dcla
