#pragma once

#include "linres/gradients.hpp"
#include "linres/model.hpp"
#include "linres/optimum.hpp"
#include "linres/rng.hpp"
#include "linres/spectral.hpp"
#include "linres/transforms.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace linres {

// One evaluated inequality instance: satisfied means lhs <= rhs up to a
// relative tolerance of 1e-9 (scaled by max(|lhs|, |rhs|, 1)). `applicable`
// is false when the inequality's hypothesis does not hold at the query point.
struct BoundReport {
  std::string quantity;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double slack = 0.0;
  long long iterate = -1;
  int layer = -1;
  bool applicable = true;
};

inline constexpr double kBoundRelTol = 1e-9;

namespace detail {

inline bool leq_with_tol(double lhs, double rhs, double rel_tol = kBoundRelTol) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  return lhs <= rhs + rel_tol * scale;
}

inline BoundReport make_report(std::string quantity, double lhs, double rhs,
                               int layer = -1, bool applicable = true) {
  BoundReport r;
  r.quantity = std::move(quantity);
  r.lhs = lhs;
  r.rhs = rhs;
  r.layer = layer;
  r.applicable = applicable;
  r.satisfied = applicable ? leq_with_tol(lhs, rhs) : false;
  r.slack = rhs - lhs;
  return r;
}

inline double max_hidden_spectral_norm(const ResNetParams& p) {
  double v = 0.0;
  for (const Matrix& w : p.hidden()) {
    const std::vector<double> sv = singular_values(w);
    if (!sv.empty()) v = std::max(v, sv.front());
  }
  return v;
}

inline double max_hidden_fro_norm(const ResNetParams& p) {
  double v = 0.0;
  for (const Matrix& w : p.hidden()) v = std::max(v, w.norm());
  return v;
}

// The ball in which the gradient/smoothness inequalities are proved, with a
// hair of slack so points constructed exactly on the boundary stay applicable.
inline bool inside_ball(double norm, int depth) {
  return norm <= (0.5 / static_cast<double>(depth)) * (1.0 + 1e-9);
}

}  // namespace detail

// PL-type gradient bounds. Inside the ball max_l ||W_l||_2 <= 0.5/L, every
// layer gradient satisfies
//   (2/e) mu_A^2 mu_B^2 sigma_r^2 (L(W) - L*)  <=  ||grad_l||_F^2
//                                              <=  2e lambda_A^2 lambda_B^2 ||X||_2^2 (L(W) - L*).
// Returns 2L reports (lower, upper per layer); tagged inapplicable outside.
inline std::vector<BoundReport> gradient_bound_check(const ResNetParams& p,
                                             const Dataset& data,
                                             const SpectralStats& stats,
                                             double optimal_loss) {
  const int depth = p.depth();
  const bool applicable =
      detail::inside_ball(detail::max_hidden_spectral_norm(p), depth);
  const GradientSet grads = full_gradient(p, data);
  const double gap = loss(p, data) - optimal_loss;
  const double e = std::numbers::e;
  const double lower = (2.0 / e) * stats.a_min * stats.a_min * stats.b_min *
                       stats.b_min * stats.x_sigma_r * stats.x_sigma_r * gap;
  const double upper = 2.0 * e * stats.a_spec * stats.a_spec * stats.b_spec *
                       stats.b_spec * stats.x_spec * stats.x_spec * gap;
  std::vector<BoundReport> reports;
  reports.reserve(2 * static_cast<std::size_t>(depth));
  for (int l = 0; l < depth; ++l) {
    const double g2 = grads.layers[static_cast<std::size_t>(l)].squaredNorm();
    reports.push_back(
        detail::make_report("grad_sq_lower", lower, g2, l + 1, applicable));
    reports.push_back(
        detail::make_report("grad_sq_upper", g2, upper, l + 1, applicable));
  }
  return reports;
}

// Per-example gradient bound: ||grad_l of the example loss||_F^2
//   <= 2e lambda_A^2 lambda_B^2 ||x_i||_2^2 * example_loss.
inline std::vector<BoundReport> example_gradient_bound_check(
    const ResNetParams& p, const Dataset& data, int index,
    const SpectralStats& stats) {
  require(index >= 0 && index < data.n(),
          "example_gradient_bound_check: index out of range");
  const int depth = p.depth();
  const bool applicable =
      detail::inside_ball(detail::max_hidden_spectral_norm(p), depth);
  const Vector x = data.x.col(index);
  const Vector y = data.y.col(index);
  const GradientSet grads = example_gradient(p, x, y);
  const double example_loss = 0.5 * (end_to_end(p) * x - y).squaredNorm();
  const double e = std::numbers::e;
  const double rhs = 2.0 * e * stats.a_spec * stats.a_spec * stats.b_spec *
                     stats.b_spec * x.squaredNorm() * example_loss;
  std::vector<BoundReport> reports;
  for (int l = 0; l < depth; ++l) {
    reports.push_back(detail::make_report(
        "example_grad_sq_upper",
        grads.layers[static_cast<std::size_t>(l)].squaredNorm(), rhs, l + 1,
        applicable));
  }
  return reports;
}

// Minibatch gradient bound: ||G_l||_F^2
//   <= (2e n^2 / B^2) lambda_A^2 lambda_B^2 ||X||_2^2 L(W).
inline std::vector<BoundReport> stochastic_gradient_bound_check(
    const ResNetParams& p, const Dataset& data, const std::vector<int>& batch,
    const SpectralStats& stats) {
  const int depth = p.depth();
  const bool applicable =
      detail::inside_ball(detail::max_hidden_spectral_norm(p), depth);
  const GradientSet grads = minibatch_gradient(p, data, batch, data.n());
  const double full_loss = loss(p, data);
  const double e = std::numbers::e;
  const double ratio =
      static_cast<double>(data.n()) / static_cast<double>(batch.size());
  const double rhs = 2.0 * e * ratio * ratio * stats.a_spec * stats.a_spec *
                     stats.b_spec * stats.b_spec * stats.x_spec * stats.x_spec *
                     full_loss;
  std::vector<BoundReport> reports;
  for (int l = 0; l < depth; ++l) {
    reports.push_back(detail::make_report(
        "stochastic_grad_sq_upper",
        grads.layers[static_cast<std::size_t>(l)].squaredNorm(), rhs, l + 1,
        applicable));
  }
  return reports;
}

// Restricted smoothness: for two weight collections inside the Frobenius ball,
//   L(W~) - L(W) <= sum_l <grad_l(W), W~_l - W_l>
//                   + L lam_A lam_B ||X||_2 (sqrt(2e L(W)) + 0.5 e lam_A lam_B ||X||_2)
//                     * sum_l ||W~_l - W_l||_F^2.
inline BoundReport smoothness_check(const ResNetParams& p,
                                const ResNetParams& p_tilde, const Dataset& data,
                                const SpectralStats& stats) {
  require(p.depth() == p_tilde.depth() && p.m() == p_tilde.m(),
          "smoothness_check: parameter shapes differ");
  const int depth = p.depth();
  const bool applicable =
      detail::inside_ball(detail::max_hidden_fro_norm(p), depth) &&
      detail::inside_ball(detail::max_hidden_fro_norm(p_tilde), depth);

  const double loss_w = loss(p, data);
  const double loss_tilde = loss(p_tilde, data);
  const GradientSet grads = full_gradient(p, data);
  double inner = 0.0;
  double sq_dist = 0.0;
  for (int l = 0; l < depth; ++l) {
    const Matrix delta = p_tilde.hidden()[static_cast<std::size_t>(l)] -
                         p.hidden()[static_cast<std::size_t>(l)];
    inner += grads.layers[static_cast<std::size_t>(l)].cwiseProduct(delta).sum();
    sq_dist += delta.squaredNorm();
  }
  const double e = std::numbers::e;
  const double lam_x = stats.a_spec * stats.b_spec * stats.x_spec;
  const double quad =
      depth * lam_x * (std::sqrt(2.0 * e * loss_w) + 0.5 * e * lam_x) * sq_dist;
  BoundReport r = detail::make_report("restricted_smoothness",
                                      loss_tilde - loss_w, inner + quad, -1,
                                      applicable);
  return r;
}

// Residual Pythagorean identity: ||U X - Y||^2 = ||U X - phi X||^2 + ||phi X - Y||^2.
inline BoundReport pythagorean_check(const Matrix& u, const Dataset& data,
                                     const OptimalFit& fit,
                                     double rel_tol = kBoundRelTol) {
  const ResidualDecomposition dec = residual_decomposition(u, data, fit);
  BoundReport r;
  r.quantity = "residual_pythagorean";
  r.lhs = dec.total;
  r.rhs = dec.excess + dec.floor;
  r.slack = r.rhs - r.lhs;
  const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1.0});
  r.satisfied = std::abs(r.lhs - r.rhs) <= rel_tol * scale;
  return r;
}

// Product norm bounds for full-column-rank U (rows >= cols):
//   sigma_min(U) ||V||_F <= ||U V||_F <= sigma_max(U) ||V||_F.
inline std::vector<BoundReport> product_norm_check(const Matrix& u,
                                                   const Matrix& v,
                                                   double abs_slack = 1e-10) {
  require(u.cols() == v.rows(), "product_norm_check: inner dims mismatch");
  require(u.rows() >= u.cols(),
          "product_norm_check: U must have at least as many rows as columns");
  const std::vector<double> sv = singular_values(u);
  const double smax = sv.empty() ? 0.0 : sv.front();
  const double smin = sv.empty() ? 0.0 : sv.back();
  const double uv = (u * v).norm();
  const double vn = v.norm();
  std::vector<BoundReport> reports;
  reports.push_back(detail::make_report("product_norm_lower", smin * vn, uv));
  reports.push_back(
      detail::make_report("product_norm_upper", uv, smax * vn + abs_slack));
  return reports;
}

// Per-iteration contraction factor of the certified linear rate:
//   rho = 1 - eta L mu_A^2 mu_B^2 sigma_r^2 / e.
// A negative value means the step size is outside the certified range.
inline double contraction_rate(const SpectralStats& stats, double eta, int depth) {
  require(eta >= 0.0, "contraction_rate: eta must be non-negative");
  require(depth >= 1, "contraction_rate: depth must be at least 1");
  const double rho = 1.0 - eta * depth * stats.a_min * stats.a_min *
                               stats.b_min * stats.b_min * stats.x_sigma_r *
                               stats.x_sigma_r / std::numbers::e;
  if (rho < 0.0)
    throw std::domain_error("contraction_rate: eta exceeds the certified range");
  return rho;
}

// Order-level width requirements. These are asymptotic expressions with an
// unspecified absolute constant; the multiplier makes that explicit.
enum class WidthKind { GdLinearRate, SgdBestIterate, SgdInterpolation };

inline long long width_requirement(WidthKind kind, int d, int k, int r,
                                   double kappa, int n, int batch,
                                   double epsilon, double delta,
                                   double multiplier = 1.0) {
  require(d >= 1 && k >= 1 && r >= 1, "width_requirement: dims must be positive");
  require(kappa >= 1.0, "width_requirement: kappa must be at least 1");
  require(n >= 1 && batch >= 1 && batch <= n, "width_requirement: need n >= B >= 1");
  require(delta > 0.0 && delta < 1.0, "width_requirement: delta in (0,1)");
  require(multiplier > 0.0, "width_requirement: multiplier must be positive");
  const double krk2 = static_cast<double>(k) * r * kappa * kappa;
  const double ratio2 = (static_cast<double>(n) / batch) * (static_cast<double>(n) / batch);
  double value = 0.0;
  switch (kind) {
    case WidthKind::GdLinearRate:
      value = std::max(krk2 * std::log(static_cast<double>(n) / delta),
                       k + d + std::log(1.0 / delta));
      break;
    case WidthKind::SgdBestIterate: {
      require(epsilon > 0.0, "width_requirement: epsilon must be positive");
      const double log_eps = std::log(1.0 / epsilon);
      value = krk2 * log_eps * log_eps * ratio2 + d;
      break;
    }
    case WidthKind::SgdInterpolation:
      value = krk2 * ratio2 + d;
      break;
  }
  return static_cast<long long>(std::ceil(multiplier * value));
}

// Monte Carlo validation of the random-transform guarantees: over `trials`
// seeds, checks the singular-value envelopes [0.9 a sqrt(m), 1.1 a sqrt(m)]
// (same for B with beta) and the explicit zero-init loss bound
//   L(W0) <= 6.05 a^2 b^2 k m log(2n/delta) ||X||_F^2 + ||Y||_F^2.
// The envelopes are proved only for m >= 100 (sqrt(max(d,k)) + sqrt(2 log(12/delta)))^2;
// below that the check refuses unless enforcement is disabled.
struct TransformStatsReport {
  double width_threshold = 0.0;
  int trials = 0;
  int allowed_failures = 0;
  int singular_failures = 0;
  int loss_failures = 0;
  bool pass = false;
};

inline double transform_stats_width_threshold(int d, int k, double delta) {
  const double root = std::sqrt(static_cast<double>(std::max(d, k))) +
                      std::sqrt(2.0 * std::log(12.0 / delta));
  return 100.0 * root * root;
}

inline TransformStatsReport validate_transform_statistics(int m, double alpha, double beta, double delta,
                                  int trials, const Dataset& data,
                                  bool enforce_threshold = true,
                                  std::uint64_t base_seed = 0) {
  require(trials >= 1, "validate_transform_statistics: need at least one trial");
  require(delta > 0.0 && delta < 1.0, "validate_transform_statistics: delta in (0,1)");
  TransformStatsReport report;
  report.width_threshold = transform_stats_width_threshold(data.d(), data.k(), delta);
  if (enforce_threshold && static_cast<double>(m) < report.width_threshold)
    throw std::invalid_argument(
        "validate_transform_statistics: width below the proof threshold for this delta");
  report.trials = trials;
  report.allowed_failures = std::max(
      1, static_cast<int>(std::ceil(delta * static_cast<double>(trials))));

  const double sqrt_m = std::sqrt(static_cast<double>(m));
  const double loss_rhs_factor = 6.05 * alpha * alpha * beta * beta * data.k() *
                                 m *
                                 std::log(2.0 * static_cast<double>(data.n()) / delta);
  const double x_fro2 = data.x.squaredNorm();
  const double y_fro2 = data.y.squaredNorm();

  for (int t = 0; t < trials; ++t) {
    TransformSpec spec;
    spec.dims = {m, data.d(), data.k()};
    spec.kind = GaussianTransform{alpha, beta, base_seed + static_cast<std::uint64_t>(t)};
    const auto [a, b] = build_transforms(spec);

    const std::vector<double> sv_a = singular_values(a);
    const std::vector<double> sv_b = singular_values(b);
    const bool sv_ok = sv_a.back() >= 0.9 * alpha * sqrt_m &&
                       sv_a.front() <= 1.1 * alpha * sqrt_m &&
                       sv_b.back() >= 0.9 * beta * sqrt_m &&
                       sv_b.front() <= 1.1 * beta * sqrt_m;
    if (!sv_ok) ++report.singular_failures;

    const double initial_loss = 0.5 * ((b * a) * data.x - data.y).squaredNorm();
    if (initial_loss > loss_rhs_factor * x_fro2 + y_fro2) ++report.loss_failures;
  }
  report.pass = report.singular_failures <= report.allowed_failures &&
                report.loss_failures <= report.allowed_failures;
  return report;
}

}  // namespace linres
