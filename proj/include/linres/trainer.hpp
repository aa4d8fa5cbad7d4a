#pragma once

#include "linres/gradients.hpp"
#include "linres/model.hpp"
#include "linres/rng.hpp"
#include "linres/spectral.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace linres {

struct TrainConfig {
  enum class Algorithm { Gd, Sgd, GdStandardBaseline };

  Algorithm algorithm = Algorithm::Gd;
  double eta = 0.0;       // step size, > 0
  long long horizon = 0;  // iteration budget T
  int batch = 0;          // minibatch size (SGD only), in [1, n]
  std::uint64_t seed = 0; // batch sampling / baseline init
  std::optional<double> early_stop_gap;  // optional target; off by default
  long long record_every = 1;
};

struct TraceRecord {
  long long iter = 0;
  double loss = 0.0;
  double gap = 0.0;          // loss - optimal_loss
  double max_w_fro = 0.0;    // max_l ||W_l||_F
  double grad_sq_sum = 0.0;  // sum_l ||g_l||_F^2 of the update gradient
  double grad_bound_lower = 0.0; // (2/e) mu_A^2 mu_B^2 sigma_r^2 * gap
  double grad_bound_upper = 0.0; // 2e lam_A^2 lam_B^2 ||X||_2^2 * gap
  double rho_bound = 0.0;    // certified per-step contraction factor
};

enum class RunStatus { Horizon, EarlyStop, Diverged };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Horizon: return "horizon";
    case RunStatus::EarlyStop: return "early-stop";
    case RunStatus::Diverged: return "diverged";
  }
  return "unknown";
}

struct Trace {
  std::vector<TraceRecord> records;
  RunStatus status = RunStatus::Horizon;
  double eta = 0.0;
  double rho_bound = 0.0;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double optimal_loss = 0.0;
  double best_gap = std::numeric_limits<double>::infinity();
  long long best_iter = 0;
  long long final_iter = 0;
};

// Optional observer invoked at every recorded iterate with the live weights
// and the gradient used for that step; feeds bound streams and tests.
struct TraceHooks {
  std::function<void(long long iter, const ResNetParams& params,
                     const GradientSet& grads)>
      on_record;
};

// Step size that certifies the gradient-descent linear rate:
//   eta = 1 / (2 L lam_A lam_B ||X||_2 (sqrt(e L0) + 0.5 e lam_A lam_B ||X||_2)).
inline double step_size_gd(const SpectralStats& stats, double initial_loss,
                           int depth) {
  require(depth >= 1, "step_size_gd: depth must be at least 1");
  require(initial_loss >= 0.0, "step_size_gd: initial loss must be non-negative");
  const double e = std::numbers::e;
  const double lam_x = stats.a_spec * stats.b_spec * stats.x_spec;
  require(lam_x > 0.0, "step_size_gd: degenerate spectral quantities");
  return 1.0 / (2.0 * depth * lam_x *
                (std::sqrt(e * initial_loss) + 0.5 * e * lam_x));
}

// Certified SGD step sizes, as the convergence arguments set them.
// Non-interpolating (best-iterate) form with eps' = epsilon / 3:
//   eta = B mu_A^2 mu_B^2 sigma_r^2 / (6 e^3 L n lam_A^4 lam_B^4 ||X||_2^2)
//         * min{ eps' / (||X||_{2,inf}^2 L*),
//                log^2(2) B / (3 n ||X||_2^2 log(T/delta) log(L0/eps')) }.
// Interpolating (L* = 0) form:
//   eta = log(2) B^2 mu_A^2 mu_B^2 sigma_r^2
//         / (54 e^3 L n^2 lam_A^4 lam_B^4 ||X||_2^4 log(T/delta)).
// `scale` is an explicit override on the proof constant.
inline double step_size_sgd(const SpectralStats& stats, int depth,
                            double initial_loss, double optimal_loss, int n,
                            int batch, double epsilon, double delta,
                            long long horizon_t, bool interpolation,
                            double scale = 1.0) {
  require(depth >= 1, "step_size_sgd: depth must be at least 1");
  require(n >= 1 && batch >= 1 && batch <= n, "step_size_sgd: need n >= B >= 1");
  require(delta > 0.0 && delta < 1.0, "step_size_sgd: delta in (0,1)");
  require(horizon_t >= 1, "step_size_sgd: horizon must be at least 1");
  require(initial_loss >= 0.0 && optimal_loss >= 0.0,
          "step_size_sgd: losses must be non-negative");
  require(scale > 0.0, "step_size_sgd: scale must be positive");
  const double e = std::numbers::e;
  const double e3 = e * e * e;
  const double mu2 = stats.a_min * stats.a_min * stats.b_min * stats.b_min;
  const double lam2 = stats.a_spec * stats.a_spec * stats.b_spec * stats.b_spec;
  const double x2 = stats.x_spec * stats.x_spec;
  const double sigma_r2 = stats.x_sigma_r * stats.x_sigma_r;
  require(lam2 > 0.0 && x2 > 0.0 && sigma_r2 > 0.0,
          "step_size_sgd: degenerate spectral quantities");
  const double log_t_delta = std::log(static_cast<double>(horizon_t) / delta);
  require(log_t_delta > 0.0, "step_size_sgd: log(T/delta) must be positive");

  if (interpolation) {
    require(optimal_loss == 0.0,
            "step_size_sgd: interpolation form requires optimal_loss == 0");
    const double b2 = static_cast<double>(batch) * batch;
    const double n2 = static_cast<double>(n) * n;
    return scale * std::numbers::ln2 * b2 * mu2 * sigma_r2 /
           (54.0 * e3 * depth * n2 * lam2 * lam2 * x2 * x2 * log_t_delta);
  }

  require(epsilon > 0.0, "step_size_sgd: epsilon must be positive");
  const double eps_inner = epsilon / 3.0;
  const double outer = batch * mu2 * sigma_r2 /
                       (6.0 * e3 * depth * n * lam2 * lam2 * x2);
  const double branch_floor =
      optimal_loss > 0.0
          ? eps_inner / (stats.x_col_max * stats.x_col_max * optimal_loss)
          : std::numeric_limits<double>::infinity();
  const double log_l0_eps = std::log(initial_loss / eps_inner);
  require(log_l0_eps > 0.0, "step_size_sgd: epsilon must be below 3 * initial_loss");
  const double branch_traj = std::numbers::ln2 * std::numbers::ln2 * batch /
                             (3.0 * n * x2 * log_t_delta * log_l0_eps);
  return scale * outer * std::min(branch_floor, branch_traj);
}

// Iterations to drive the optimality gap below epsilon at the certified rate:
//   T = ceil( e log(gap0 / eps) / (eta L mu_A^2 mu_B^2 sigma_r^2) ).
// Returns 0 when the target is already met.
inline long long horizon(const SpectralStats& stats, double eta, int depth,
                         double initial_gap, double epsilon) {
  require(eta > 0.0, "horizon: eta must be positive");
  require(depth >= 1, "horizon: depth must be at least 1");
  require(epsilon > 0.0, "horizon: epsilon must be positive");
  if (epsilon >= initial_gap) return 0;
  const double mu2 = stats.a_min * stats.a_min * stats.b_min * stats.b_min;
  const double sigma_r2 = stats.x_sigma_r * stats.x_sigma_r;
  require(mu2 > 0.0 && sigma_r2 > 0.0, "horizon: degenerate spectral quantities");
  const double t = std::numbers::e * std::log(initial_gap / epsilon) /
                   (eta * depth * mu2 * sigma_r2);
  return static_cast<long long>(std::ceil(t));
}

namespace detail {

inline double max_fro_norm(const std::vector<Matrix>& ws) {
  double v = 0.0;
  for (const Matrix& w : ws) v = std::max(v, w.norm());
  return v;
}

// Shared descent loop. `make_gradient` produces the update direction at the
// current weights; `eval_loss` evaluates the full training loss. Records carry
// the state at iterate t (pre-update); the terminal iterate is always recorded
// and owns the run status.
template <typename GradFn, typename LossFn>
Trace run_loop(ResNetParams params, const TrainConfig& cfg, double optimal_loss,
               const SpectralStats& stats, GradFn&& make_gradient,
               LossFn&& eval_loss, const TraceHooks& hooks) {
  require(cfg.eta > 0.0, "trainer: eta must be positive");
  require(cfg.horizon >= 0, "trainer: horizon must be non-negative");
  require(cfg.record_every >= 1, "trainer: record_every must be positive");

  const int depth = params.depth();
  const double e = std::numbers::e;
  const double mu2 = stats.a_min * stats.a_min * stats.b_min * stats.b_min;
  const double lam2 = stats.a_spec * stats.a_spec * stats.b_spec * stats.b_spec;
  const double sigma_r2 = stats.x_sigma_r * stats.x_sigma_r;
  const double x2 = stats.x_spec * stats.x_spec;
  const double rho = 1.0 - cfg.eta * depth * mu2 * sigma_r2 / e;

  Trace trace;
  trace.eta = cfg.eta;
  trace.rho_bound = rho;
  trace.optimal_loss = optimal_loss;

  double initial_loss = 0.0;
  const double divergence_factor = 1e3;

  for (long long t = 0;; ++t) {
    const GradientSet grads = make_gradient(params);
    const double current_loss = eval_loss(params);
    if (t == 0) {
      initial_loss = current_loss;
      trace.initial_loss = current_loss;
    }
    const double gap = current_loss - optimal_loss;
    if (gap < trace.best_gap) {
      trace.best_gap = gap;
      trace.best_iter = t;
    }

    const bool finite = std::isfinite(current_loss);
    const bool diverged = !finite || current_loss > divergence_factor * initial_loss;
    const bool early = cfg.early_stop_gap && gap <= *cfg.early_stop_gap;
    const bool at_horizon = t >= cfg.horizon;
    const bool terminal = diverged || early || at_horizon;

    if (terminal || t % cfg.record_every == 0) {
      TraceRecord rec;
      rec.iter = t;
      rec.loss = current_loss;
      rec.gap = gap;
      rec.max_w_fro = max_fro_norm(params.hidden());
      rec.grad_sq_sum = grads.squared_fro_sum();
      rec.grad_bound_lower = (2.0 / e) * mu2 * sigma_r2 * gap;
      rec.grad_bound_upper = 2.0 * e * lam2 * x2 * gap;
      rec.rho_bound = rho;
      trace.records.push_back(rec);
      if (hooks.on_record) hooks.on_record(t, params, grads);
    }

    if (terminal) {
      trace.status = diverged ? RunStatus::Diverged
                              : (at_horizon ? RunStatus::Horizon
                                            : RunStatus::EarlyStop);
      trace.final_loss = current_loss;
      trace.final_iter = t;
      return trace;
    }

    for (int l = 0; l < depth; ++l)
      params.hidden()[static_cast<std::size_t>(l)] -=
          cfg.eta * grads.layers[static_cast<std::size_t>(l)];
  }
}

}  // namespace detail

// Full-batch gradient descent on the hidden layers, A and B frozen.
inline Trace run_gd(const ResNetParams& p0, const Dataset& data,
                    const TrainConfig& cfg, double optimal_loss,
                    const TraceHooks& hooks = {}) {
  require(cfg.algorithm == TrainConfig::Algorithm::Gd,
          "run_gd: config algorithm must be Gd");
  const SpectralStats stats =
      spectral_stats(p0.input_map(), p0.output_map(), data.x, data.rank);
  return detail::run_loop(
      p0, cfg, optimal_loss, stats,
      [&data](const ResNetParams& p) { return full_gradient(p, data); },
      [&data](const ResNetParams& p) { return loss(p, data); }, hooks);
}

// Minibatch SGD: each step draws a fresh uniform size-B subset without
// replacement and applies the n/B-scaled gradient. With B = n the sampled set
// is all of [0, n) and the trajectory reproduces run_gd bit for bit.
inline Trace run_sgd(const ResNetParams& p0, const Dataset& data,
                     const TrainConfig& cfg, double optimal_loss,
                     const TraceHooks& hooks = {}) {
  require(cfg.algorithm == TrainConfig::Algorithm::Sgd,
          "run_sgd: config algorithm must be Sgd");
  require(cfg.batch >= 1 && cfg.batch <= data.n(),
          "run_sgd: batch size must be in [1, n]");
  const SpectralStats stats =
      spectral_stats(p0.input_map(), p0.output_map(), data.x, data.rank);
  Rng rng(cfg.seed);
  return detail::run_loop(
      p0, cfg, optimal_loss, stats,
      [&data, &cfg, &rng](const ResNetParams& p) {
        const std::vector<int> batch =
            rng.sample_without_replacement(data.n(), cfg.batch);
        return minibatch_gradient(p, data, batch, data.n());
      },
      [&data](const ResNetParams& p) { return loss(p, data); }, hooks);
}

// Depth-comparison baseline: plain product network B W_L ... W_1 A trained by
// full-batch GD from Gaussian init with per-entry variance init_scale^2 / m.
inline Trace run_standard_baseline(const Matrix& input_map,
                                   const Matrix& output_map, const Dataset& data,
                                   const TrainConfig& cfg, int depth,
                                   double optimal_loss, double init_scale = 1.0,
                                   const TraceHooks& hooks = {}) {
  require(cfg.algorithm == TrainConfig::Algorithm::GdStandardBaseline,
          "run_standard_baseline: config algorithm must be GdStandardBaseline");
  require(depth >= 1, "run_standard_baseline: depth must be at least 1");
  require(init_scale > 0.0, "run_standard_baseline: init_scale must be positive");
  const int m = static_cast<int>(input_map.rows());
  Rng rng(cfg.seed);
  std::vector<Matrix> hidden;
  hidden.reserve(static_cast<std::size_t>(depth));
  const double stddev = init_scale / std::sqrt(static_cast<double>(m));
  for (int l = 0; l < depth; ++l)
    hidden.push_back(rng.gaussian_matrix(m, m, stddev));
  ResNetParams p0(input_map, output_map, std::move(hidden));

  const SpectralStats stats =
      spectral_stats(p0.input_map(), p0.output_map(), data.x, data.rank);
  return detail::run_loop(
      p0, cfg, optimal_loss, stats,
      [&data](const ResNetParams& p) {
        GradientSet g;
        g.layers = detail::chain_gradient(p.input_map(), p.output_map(),
                                          p.hidden(), data.x, data.y,
                                          /*skip=*/false, 1.0)
                       .layer_grads;
        return g;
      },
      [&data](const ResNetParams& p) {
        return 0.5 * (standard_linear_forward(p, data.x) - data.y).squaredNorm();
      },
      hooks);
}

}  // namespace linres
