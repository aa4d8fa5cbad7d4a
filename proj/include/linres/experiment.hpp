#pragma once

#include "linres/config.hpp"
#include "linres/gradients.hpp"
#include "linres/model.hpp"
#include "linres/optimum.hpp"
#include "linres/spectral.hpp"
#include "linres/synthetic.hpp"
#include "linres/theory.hpp"
#include "linres/trainer.hpp"
#include "linres/transforms.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace linres {

// Floats in emitted artifacts carry 17 significant digits so that re-parsing
// round-trips exactly and byte comparison is a valid determinism check.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

enum class OutputFormat { Csv, Json };

inline OutputFormat output_format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown output format: " + s);
}

enum class TransformKind { Gaussian, PlainIdentity, ModifiedIdentity };

inline TransformKind transform_kind_from_string(const std::string& s) {
  if (s == "gaussian") return TransformKind::Gaussian;
  if (s == "plain_identity") return TransformKind::PlainIdentity;
  if (s == "modified_identity") return TransformKind::ModifiedIdentity;
  throw std::invalid_argument("unknown transform kind: " + s);
}

inline const char* to_string(TransformKind k) {
  switch (k) {
    case TransformKind::Gaussian: return "gaussian";
    case TransformKind::PlainIdentity: return "plain_identity";
    case TransformKind::ModifiedIdentity: return "modified_identity";
  }
  return "unknown";
}

inline const char* to_string(TrainConfig::Algorithm a) {
  switch (a) {
    case TrainConfig::Algorithm::Gd: return "gd";
    case TrainConfig::Algorithm::Sgd: return "sgd";
    case TrainConfig::Algorithm::GdStandardBaseline: return "gd_standard_baseline";
  }
  return "unknown";
}

inline TrainConfig::Algorithm algorithm_from_string(const std::string& s) {
  if (s == "gd") return TrainConfig::Algorithm::Gd;
  if (s == "sgd") return TrainConfig::Algorithm::Sgd;
  if (s == "gd_standard_baseline") return TrainConfig::Algorithm::GdStandardBaseline;
  throw std::invalid_argument("unknown algorithm: " + s);
}

// Full description of one run. All randomness flows from the three named
// seeds; the canonical key-value echo of this struct reproduces the run.
struct ExperimentConfig {
  // data
  int d = 10;
  int k = 10;
  int n = 1000;
  double noise = 0.1;
  MapKind map = MapKind::NegIdentity;
  std::uint64_t data_seed = 1;
  // transforms
  TransformKind transform = TransformKind::Gaussian;
  int m = 200;
  double alpha = 1.0;
  double beta = 1.0;
  std::uint64_t transform_seed = 2;
  // model
  int depth = 10;
  // training
  TrainConfig::Algorithm algorithm = TrainConfig::Algorithm::Gd;
  std::string eta_mode = "auto";  // "auto" or "fixed"
  double eta_value = 0.0;
  double eta_scale = 1.0;  // multiplier on the auto step size
  std::string horizon_mode = "auto";  // "auto" or "fixed"
  long long horizon_value = 0;
  double epsilon_rel = 1e-3;  // target gap as a fraction of the initial gap
  std::optional<double> epsilon_abs;
  bool early_stop = false;
  int batch = 0;
  std::uint64_t train_seed = 3;
  bool interpolation = false;
  double delta = 0.1;
  double init_scale = 1.0;  // baseline init scale
  long long record_every = 1;
  // theory checks
  bool checks_enabled = false;
  long long checks_every = 0;  // 0 -> record_every

  static ExperimentConfig from_kv(const KeyValueConfig& kv) {
    ExperimentConfig c;
    c.d = static_cast<int>(kv.get_int("data.d", c.d));
    c.k = static_cast<int>(kv.get_int("data.k", c.k));
    c.n = static_cast<int>(kv.get_int("data.n", c.n));
    c.noise = kv.get_double("data.noise", c.noise);
    c.map = map_kind_from_string(kv.get_string("data.map", to_string(c.map)));
    c.data_seed = kv.get_u64("data.seed", c.data_seed);
    c.transform = transform_kind_from_string(
        kv.get_string("transform.kind", to_string(c.transform)));
    c.m = static_cast<int>(kv.get_int("transform.m", c.m));
    c.alpha = kv.get_double("transform.alpha", c.alpha);
    c.beta = kv.get_double("transform.beta", c.beta);
    c.transform_seed = kv.get_u64("transform.seed", c.transform_seed);
    c.depth = static_cast<int>(kv.get_int("model.depth", c.depth));
    c.algorithm =
        algorithm_from_string(kv.get_string("train.algorithm", to_string(c.algorithm)));
    const std::string eta = kv.get_string("train.eta", "auto");
    if (eta == "auto") {
      c.eta_mode = "auto";
    } else {
      c.eta_mode = "fixed";
      c.eta_value = KeyValueConfig::parse("v = " + eta).require_double("v");
    }
    c.eta_scale = kv.get_double("train.eta_scale", c.eta_scale);
    const std::string horizon = kv.get_string("train.horizon", "auto");
    if (horizon == "auto") {
      c.horizon_mode = "auto";
    } else {
      c.horizon_mode = "fixed";
      c.horizon_value = KeyValueConfig::parse("v = " + horizon).require_int("v");
    }
    c.epsilon_rel = kv.get_double("train.epsilon_rel", c.epsilon_rel);
    if (kv.has("train.epsilon_abs"))
      c.epsilon_abs = kv.require_double("train.epsilon_abs");
    c.early_stop = kv.get_bool("train.early_stop", c.early_stop);
    c.batch = static_cast<int>(kv.get_int("train.batch", c.batch));
    c.train_seed = kv.get_u64("train.seed", c.train_seed);
    c.interpolation = kv.get_bool("train.interpolation", c.interpolation);
    c.delta = kv.get_double("train.delta", c.delta);
    c.init_scale = kv.get_double("train.init_scale", c.init_scale);
    c.record_every = kv.get_int("train.record_every", c.record_every);
    c.checks_enabled = kv.get_bool("checks.enabled", c.checks_enabled);
    c.checks_every = kv.get_int("checks.every", c.checks_every);
    return c;
  }

  KeyValueConfig to_kv() const {
    KeyValueConfig kv;
    kv.set("data.d", std::to_string(d));
    kv.set("data.k", std::to_string(k));
    kv.set("data.n", std::to_string(n));
    kv.set("data.noise", format_double(noise));
    kv.set("data.map", to_string(map));
    kv.set("data.seed", std::to_string(data_seed));
    kv.set("transform.kind", to_string(transform));
    kv.set("transform.m", std::to_string(m));
    kv.set("transform.alpha", format_double(alpha));
    kv.set("transform.beta", format_double(beta));
    kv.set("transform.seed", std::to_string(transform_seed));
    kv.set("model.depth", std::to_string(depth));
    kv.set("train.algorithm", to_string(algorithm));
    kv.set("train.eta", eta_mode == "auto" ? "auto" : format_double(eta_value));
    kv.set("train.eta_scale", format_double(eta_scale));
    kv.set("train.horizon",
           horizon_mode == "auto" ? "auto" : std::to_string(horizon_value));
    kv.set("train.epsilon_rel", format_double(epsilon_rel));
    if (epsilon_abs) kv.set("train.epsilon_abs", format_double(*epsilon_abs));
    kv.set("train.early_stop", early_stop ? "true" : "false");
    kv.set("train.batch", std::to_string(batch));
    kv.set("train.seed", std::to_string(train_seed));
    kv.set("train.interpolation", interpolation ? "true" : "false");
    kv.set("train.delta", format_double(delta));
    kv.set("train.init_scale", format_double(init_scale));
    kv.set("train.record_every", std::to_string(record_every));
    kv.set("checks.enabled", checks_enabled ? "true" : "false");
    kv.set("checks.every", std::to_string(checks_every));
    return kv;
  }

  TransformSpec transform_spec() const {
    TransformSpec spec;
    spec.dims = {m, d, k};
    switch (transform) {
      case TransformKind::Gaussian:
        spec.kind = GaussianTransform{alpha, beta, transform_seed};
        break;
      case TransformKind::PlainIdentity:
        spec.kind = PlainIdentityTransform{};
        break;
      case TransformKind::ModifiedIdentity:
        spec.kind = ModifiedIdentityTransform{alpha, {}, {}};
        break;
    }
    return spec;
  }
};

struct RunSummary {
  double initial_loss = 0.0;
  double optimal_loss = 0.0;
  double initial_gap = 0.0;
  double final_loss = 0.0;
  double final_gap = 0.0;
  double best_gap = 0.0;
  long long best_iter = 0;
  long long final_iter = 0;
  long long iters_to_1e1 = -1;  // first recorded iterate with gap <= 1e-1 gap0
  long long iters_to_1e2 = -1;
  long long iters_to_1e3 = -1;
  RunStatus status = RunStatus::Horizon;
  double eta = 0.0;
  long long horizon = 0;
  double epsilon = 0.0;
  bool condition_satisfied = false;
  double condition_lhs = 0.0;
  double condition_rhs = 0.0;
};

struct RunArtifact {
  ExperimentConfig config;
  Trace trace;
  std::vector<BoundReport> bounds;
  RunSummary summary;
};

namespace detail {

inline double resolve_initial_loss(const ExperimentConfig& cfg, const Matrix& a,
                                   const Matrix& b, const Dataset& data) {
  if (cfg.algorithm == TrainConfig::Algorithm::GdStandardBaseline) {
    Rng rng(cfg.train_seed);
    const double stddev = cfg.init_scale / std::sqrt(static_cast<double>(cfg.m));
    Matrix acc = a;
    for (int l = 0; l < cfg.depth; ++l)
      acc = rng.gaussian_matrix(cfg.m, cfg.m, stddev) * acc;
    return 0.5 * ((b * acc) * data.x - data.y).squaredNorm();
  }
  const ResNetParams p0 = zero_init(a, b, cfg.depth);
  return loss(p0, data);
}

}  // namespace detail

// Builds data, transforms, optimum and step size/horizon from the config,
// runs the trainer, and attaches theory checks per recorded iterate when
// enabled. Deterministic given the config (including its seeds).
inline RunArtifact run_experiment(const ExperimentConfig& cfg) {
  const SyntheticData synth =
      gen_synthetic(cfg.d, cfg.k, cfg.n, cfg.noise, cfg.data_seed, cfg.map);
  const Dataset& data = synth.data;
  const auto [a, b] = build_transforms(cfg.transform_spec());
  const OptimalFit fit = fit_optimum(data);
  const SpectralStats stats = spectral_stats(a, b, data.x, data.rank);

  const double initial_loss = detail::resolve_initial_loss(cfg, a, b, data);
  const double initial_gap = initial_loss - fit.optimal_loss;
  const double epsilon =
      cfg.epsilon_abs ? *cfg.epsilon_abs : cfg.epsilon_rel * initial_gap;
  require(epsilon > 0.0, "run_experiment: target epsilon must be positive");

  const bool sgd = cfg.algorithm == TrainConfig::Algorithm::Sgd;
  // An exactly interpolating dataset never yields a bit-exact zero optimum
  // from the solver; snap negligible values so the interpolation step-size
  // form stays reachable. The trace still reports the computed optimum.
  const double step_optimal_loss =
      cfg.interpolation &&
              fit.optimal_loss <= 1e-12 * std::max(initial_loss, 1.0)
          ? 0.0
          : fit.optimal_loss;
  double eta = 0.0;
  long long horizon_t = 0;
  if (cfg.eta_mode == "fixed") {
    eta = cfg.eta_value;
  } else if (!sgd) {
    eta = step_size_gd(stats, initial_loss, cfg.depth) * cfg.eta_scale;
  } else {
    // eta and T are mutually dependent through log(T/delta); two fixed-point
    // rounds pin them (the dependence is logarithmic).
    long long t_guess =
        cfg.horizon_mode == "fixed" ? std::max<long long>(cfg.horizon_value, 1) : 100000;
    for (int round = 0; round < 2; ++round) {
      eta = step_size_sgd(stats, cfg.depth, initial_loss, step_optimal_loss,
                          cfg.n, cfg.batch, epsilon, cfg.delta, t_guess,
                          cfg.interpolation, cfg.eta_scale);
      if (cfg.horizon_mode == "fixed") break;
      t_guess = std::max<long long>(
          horizon(stats, eta, cfg.depth, initial_gap, epsilon), 1);
    }
  }
  horizon_t = cfg.horizon_mode == "fixed"
                  ? cfg.horizon_value
                  : horizon(stats, eta, cfg.depth, initial_gap, epsilon);

  ConditionReport condition;
  if (sgd) {
    condition = check_sgd_condition(stats, initial_loss, cfg.n, cfg.batch,
                                    epsilon, cfg.interpolation);
  } else {
    condition = check_gd_condition(stats, initial_loss, fit.optimal_loss);
  }

  TrainConfig tc;
  tc.algorithm = cfg.algorithm;
  tc.eta = eta;
  tc.horizon = horizon_t;
  tc.batch = cfg.batch;
  tc.seed = cfg.train_seed;
  if (cfg.early_stop) tc.early_stop_gap = epsilon;
  tc.record_every = cfg.record_every;

  RunArtifact artifact;
  artifact.config = cfg;

  TraceHooks hooks;
  auto previous = std::make_shared<std::optional<ResNetParams>>();
  const long long check_stride =
      cfg.checks_every > 0 ? cfg.checks_every : cfg.record_every;
  const bool resnet_checks =
      cfg.checks_enabled && cfg.algorithm != TrainConfig::Algorithm::GdStandardBaseline;
  if (resnet_checks) {
    hooks.on_record = [&artifact, &data, stats, fit, previous, check_stride](
                          long long iter, const ResNetParams& params,
                          const GradientSet&) {
      if (iter % check_stride != 0) return;
      std::vector<BoundReport> reports =
          gradient_bound_check(params, data, stats, fit.optimal_loss);
      if (previous->has_value()) {
        reports.push_back(smoothness_check(**previous, params, data, stats));
      }
      for (BoundReport& r : reports) {
        r.iterate = iter;
        artifact.bounds.push_back(std::move(r));
      }
      *previous = params;
    };
  }

  switch (cfg.algorithm) {
    case TrainConfig::Algorithm::Gd:
      artifact.trace = run_gd(zero_init(a, b, cfg.depth), data, tc,
                              fit.optimal_loss, hooks);
      break;
    case TrainConfig::Algorithm::Sgd:
      artifact.trace = run_sgd(zero_init(a, b, cfg.depth), data, tc,
                               fit.optimal_loss, hooks);
      break;
    case TrainConfig::Algorithm::GdStandardBaseline:
      artifact.trace = run_standard_baseline(a, b, data, tc, cfg.depth,
                                             fit.optimal_loss, cfg.init_scale,
                                             hooks);
      break;
  }

  RunSummary& s = artifact.summary;
  s.initial_loss = artifact.trace.initial_loss;
  s.optimal_loss = fit.optimal_loss;
  s.initial_gap = artifact.trace.initial_loss - fit.optimal_loss;
  s.final_loss = artifact.trace.final_loss;
  s.final_gap = artifact.trace.final_loss - fit.optimal_loss;
  s.best_gap = artifact.trace.best_gap;
  s.best_iter = artifact.trace.best_iter;
  s.final_iter = artifact.trace.final_iter;
  s.status = artifact.trace.status;
  s.eta = eta;
  s.horizon = horizon_t;
  s.epsilon = epsilon;
  s.condition_satisfied = condition.satisfied;
  s.condition_lhs = condition.lhs;
  s.condition_rhs = condition.rhs;
  for (const TraceRecord& r : artifact.trace.records) {
    if (s.iters_to_1e1 < 0 && r.gap <= 1e-1 * s.initial_gap) s.iters_to_1e1 = r.iter;
    if (s.iters_to_1e2 < 0 && r.gap <= 1e-2 * s.initial_gap) s.iters_to_1e2 = r.iter;
    if (s.iters_to_1e3 < 0 && r.gap <= 1e-3 * s.initial_gap) s.iters_to_1e3 = r.iter;
  }
  return artifact;
}

// ---------------------------------------------------------------------------
// Artifact serialization

inline std::string trace_to_csv(const Trace& trace) {
  std::ostringstream out;
  out << "iter,loss,gap,max_w_fro,grad_sq_sum,rho_bound,status\n";
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& r = trace.records[i];
    const bool last = i + 1 == trace.records.size();
    out << r.iter << ',' << format_double(r.loss) << ',' << format_double(r.gap)
        << ',' << format_double(r.max_w_fro) << ','
        << format_double(r.grad_sq_sum) << ',' << format_double(r.rho_bound)
        << ',' << (last ? to_string(trace.status) : "ok") << '\n';
  }
  return out.str();
}

inline std::string trace_to_json(const Trace& trace) {
  std::ostringstream out;
  out << "{\n  \"status\": \"" << to_string(trace.status) << "\",\n";
  out << "  \"eta\": " << format_double(trace.eta) << ",\n";
  out << "  \"rho_bound\": " << format_double(trace.rho_bound) << ",\n";
  out << "  \"optimal_loss\": " << format_double(trace.optimal_loss) << ",\n";
  out << "  \"best_gap\": " << format_double(trace.best_gap) << ",\n";
  out << "  \"best_iter\": " << trace.best_iter << ",\n";
  out << "  \"records\": [\n";
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& r = trace.records[i];
    out << "    {\"iter\": " << r.iter << ", \"loss\": " << format_double(r.loss)
        << ", \"gap\": " << format_double(r.gap)
        << ", \"max_w_fro\": " << format_double(r.max_w_fro)
        << ", \"grad_sq_sum\": " << format_double(r.grad_sq_sum)
        << ", \"grad_bound_lower\": " << format_double(r.grad_bound_lower)
        << ", \"grad_bound_upper\": " << format_double(r.grad_bound_upper)
        << ", \"rho_bound\": " << format_double(r.rho_bound) << "}"
        << (i + 1 == trace.records.size() ? "\n" : ",\n");
  }
  out << "  ]\n}\n";
  return out.str();
}

inline std::string bounds_to_csv(const std::vector<BoundReport>& bounds) {
  std::ostringstream out;
  out << "iter,quantity,layer,lhs,rhs,slack,applicable,satisfied\n";
  for (const BoundReport& r : bounds) {
    out << r.iterate << ',' << r.quantity << ',' << r.layer << ','
        << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
        << format_double(r.slack) << ',' << (r.applicable ? 1 : 0) << ','
        << (r.satisfied ? 1 : 0) << '\n';
  }
  return out.str();
}

inline std::string bounds_to_json(const std::vector<BoundReport>& bounds) {
  std::ostringstream out;
  out << "[\n";
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const BoundReport& r = bounds[i];
    out << "  {\"iter\": " << r.iterate << ", \"quantity\": \"" << r.quantity
        << "\", \"layer\": " << r.layer << ", \"lhs\": " << format_double(r.lhs)
        << ", \"rhs\": " << format_double(r.rhs)
        << ", \"slack\": " << format_double(r.slack)
        << ", \"applicable\": " << (r.applicable ? "true" : "false")
        << ", \"satisfied\": " << (r.satisfied ? "true" : "false") << "}"
        << (i + 1 == bounds.size() ? "\n" : ",\n");
  }
  out << "]\n";
  return out.str();
}

inline std::string summary_to_text(const RunSummary& s) {
  std::ostringstream out;
  out << "status = " << to_string(s.status) << "\n";
  out << "eta = " << format_double(s.eta) << "\n";
  out << "horizon = " << s.horizon << "\n";
  out << "epsilon = " << format_double(s.epsilon) << "\n";
  out << "initial_loss = " << format_double(s.initial_loss) << "\n";
  out << "optimal_loss = " << format_double(s.optimal_loss) << "\n";
  out << "initial_gap = " << format_double(s.initial_gap) << "\n";
  out << "final_loss = " << format_double(s.final_loss) << "\n";
  out << "final_gap = " << format_double(s.final_gap) << "\n";
  out << "best_gap = " << format_double(s.best_gap) << "\n";
  out << "best_iter = " << s.best_iter << "\n";
  out << "final_iter = " << s.final_iter << "\n";
  out << "iters_to_gap_1e-1 = " << s.iters_to_1e1 << "\n";
  out << "iters_to_gap_1e-2 = " << s.iters_to_1e2 << "\n";
  out << "iters_to_gap_1e-3 = " << s.iters_to_1e3 << "\n";
  out << "condition_satisfied = " << (s.condition_satisfied ? "true" : "false") << "\n";
  out << "condition_lhs = " << format_double(s.condition_lhs) << "\n";
  out << "condition_rhs = " << format_double(s.condition_rhs) << "\n";
  return out.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write file: " + path);
  f << content;
}

// Writes <prefix>.config.txt, <prefix>.trace.{csv|json}, <prefix>.summary.txt
// and, when checks ran, <prefix>.bounds.{csv|json}. Returns the paths written.
inline std::vector<std::string> write_artifact(const RunArtifact& artifact,
                                               const std::string& prefix,
                                               OutputFormat format) {
  std::vector<std::string> paths;
  const std::string config_path = prefix + ".config.txt";
  write_text_file(config_path, artifact.config.to_kv().to_text());
  paths.push_back(config_path);

  const bool csv = format == OutputFormat::Csv;
  const std::string trace_path = prefix + (csv ? ".trace.csv" : ".trace.json");
  write_text_file(trace_path, csv ? trace_to_csv(artifact.trace)
                                  : trace_to_json(artifact.trace));
  paths.push_back(trace_path);

  if (!artifact.bounds.empty()) {
    const std::string bounds_path = prefix + (csv ? ".bounds.csv" : ".bounds.json");
    write_text_file(bounds_path, csv ? bounds_to_csv(artifact.bounds)
                                     : bounds_to_json(artifact.bounds));
    paths.push_back(bounds_path);
  }

  const std::string summary_path = prefix + ".summary.txt";
  write_text_file(summary_path, summary_to_text(artifact.summary));
  paths.push_back(summary_path);
  return paths;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { Depth, Width, Batch, Seed };

inline SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "depth") return SweepAxis::Depth;
  if (s == "width") return SweepAxis::Width;
  if (s == "batch") return SweepAxis::Batch;
  if (s == "seed") return SweepAxis::Seed;
  throw std::invalid_argument("unknown sweep axis: " + s);
}

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Depth: return "depth";
    case SweepAxis::Width: return "width";
    case SweepAxis::Batch: return "batch";
    case SweepAxis::Seed: return "seed";
  }
  return "unknown";
}

struct SweepEntry {
  long long value = 0;
  bool ok = false;
  std::string error;
  RunArtifact artifact;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::Depth;
  std::vector<SweepEntry> entries;
};

// One run per axis value; per-run failures are isolated so the sweep finishes.
inline SweepResult sweep(const ExperimentConfig& base, SweepAxis axis,
                         const std::vector<long long>& values) {
  SweepResult result;
  result.axis = axis;
  for (long long v : values) {
    SweepEntry entry;
    entry.value = v;
    ExperimentConfig cfg = base;
    switch (axis) {
      case SweepAxis::Depth: cfg.depth = static_cast<int>(v); break;
      case SweepAxis::Width: cfg.m = static_cast<int>(v); break;
      case SweepAxis::Batch: cfg.batch = static_cast<int>(v); break;
      case SweepAxis::Seed: cfg.train_seed = static_cast<std::uint64_t>(v); break;
    }
    try {
      entry.artifact = run_experiment(cfg);
      entry.ok = true;
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    result.entries.push_back(std::move(entry));
  }
  return result;
}

inline std::string sweep_table(const SweepResult& result) {
  std::ostringstream out;
  out << to_string(result.axis)
      << "\tstatus\tfinal_gap\tbest_gap\titers_1e-1\titers_1e-2\titers_1e-3\teta\n";
  for (const SweepEntry& e : result.entries) {
    out << e.value << '\t';
    if (!e.ok) {
      out << "error: " << e.error << '\n';
      continue;
    }
    const RunSummary& s = e.artifact.summary;
    out << to_string(s.status) << '\t' << format_double(s.final_gap) << '\t'
        << format_double(s.best_gap) << '\t' << s.iters_to_1e1 << '\t'
        << s.iters_to_1e2 << '\t' << s.iters_to_1e3 << '\t'
        << format_double(s.eta) << '\n';
  }
  return out.str();
}

}  // namespace linres
