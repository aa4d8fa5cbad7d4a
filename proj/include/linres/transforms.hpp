#pragma once

#include "linres/matrix.hpp"
#include "linres/rng.hpp"
#include "linres/spectral.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <utility>
#include <variant>
#include <vector>

namespace linres {

// Fixed input/output map constructors. Three families:
//   gaussian          A_ij ~ N(0, alpha^2), B_ij ~ N(0, beta^2), seeded;
//   plain_identity    A = [I_d; 0], B = sqrt(m/k) [I_k, 0] - the choice whose
//                     training provably stalls on targets with negative spectrum;
//   modified_identity A routes input coordinate j to hidden row S1[j], B reads
//                     alpha times hidden coordinate S2[i], with S1, S2 disjoint
//                     so that BA = 0 exactly. Needs only m >= d + k.
struct TransformDims {
  int m = 0;
  int d = 0;
  int k = 0;
};

struct GaussianTransform {
  double alpha = 1.0;
  double beta = 1.0;
  std::uint64_t seed = 0;
};

struct PlainIdentityTransform {};

struct ModifiedIdentityTransform {
  double alpha = 1.0;
  std::vector<int> s1;  // empty -> {0..d-1}
  std::vector<int> s2;  // empty -> {d..d+k-1}
};

struct TransformSpec {
  TransformDims dims;
  std::variant<GaussianTransform, PlainIdentityTransform, ModifiedIdentityTransform>
      kind = GaussianTransform{};
};

inline std::pair<Matrix, Matrix> build_transforms(const TransformSpec& spec) {
  const auto [m, d, k] = spec.dims;
  require(m >= 1 && d >= 1 && k >= 1, "build_transforms: dims must be positive");
  require(m >= std::max(d, k), "build_transforms: m must be at least max(d, k)");

  if (const auto* g = std::get_if<GaussianTransform>(&spec.kind)) {
    require(g->alpha > 0.0 && g->beta > 0.0,
            "build_transforms: gaussian scales must be positive");
    Rng rng(g->seed);
    Matrix a = rng.gaussian_matrix(m, d, g->alpha);
    Matrix b = rng.gaussian_matrix(k, m, g->beta);
    return {std::move(a), std::move(b)};
  }

  if (std::holds_alternative<PlainIdentityTransform>(spec.kind)) {
    Matrix a = Matrix::Zero(m, d);
    for (int j = 0; j < d; ++j) a(j, j) = 1.0;
    Matrix b = Matrix::Zero(k, m);
    const double scale = std::sqrt(static_cast<double>(m) / static_cast<double>(k));
    for (int i = 0; i < k; ++i) b(i, i) = scale;
    return {std::move(a), std::move(b)};
  }

  const auto& mi = std::get<ModifiedIdentityTransform>(spec.kind);
  require(m >= d + k, "build_transforms: modified identity needs m >= d + k");
  require(mi.alpha > 0.0, "build_transforms: alpha must be positive");
  std::vector<int> s1 = mi.s1;
  std::vector<int> s2 = mi.s2;
  if (s1.empty()) {
    for (int j = 0; j < d; ++j) s1.push_back(j);
  }
  if (s2.empty()) {
    for (int i = 0; i < k; ++i) s2.push_back(d + i);
  }
  require(static_cast<int>(s1.size()) == d, "build_transforms: |S1| must equal d");
  require(static_cast<int>(s2.size()) == k, "build_transforms: |S2| must equal k");
  std::set<int> used;
  for (int i : s1) {
    require(i >= 0 && i < m, "build_transforms: S1 index out of range");
    require(used.insert(i).second, "build_transforms: S1 entries must be distinct");
  }
  for (int i : s2) {
    require(i >= 0 && i < m, "build_transforms: S2 index out of range");
    require(used.insert(i).second,
            "build_transforms: S1 and S2 must be disjoint with distinct entries");
  }
  Matrix a = Matrix::Zero(m, d);
  for (int j = 0; j < d; ++j) a(s1[static_cast<std::size_t>(j)], j) = 1.0;
  Matrix b = Matrix::Zero(k, m);
  for (int i = 0; i < k; ++i) b(i, s2[static_cast<std::size_t>(i)]) = mi.alpha;
  return {std::move(a), std::move(b)};
}

// Outcome of a transform-quality test: the run is certified when
// lhs = sigma_min^2(A) sigma_min^2(B) / (||A||_2 ||B||_2) clears the
// data/loss-dependent threshold rhs.
struct ConditionReport {
  enum class Guarantee { GdLinearRate, SgdBestIterate, SgdInterpolation };

  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double constant_used = 0.0;
  Guarantee guarantee = Guarantee::GdLinearRate;
};

// Explicit constants carried through the convergence arguments. The
// guarantees themselves only assert that absolute constants exist; these are
// the values the arguments actually produce, so every checker takes an
// override.
inline double gd_condition_constant() {
  const double e = std::numbers::e;
  return 2.0 * std::sqrt(8.0 * e * e * e);
}

inline double sgd_condition_constant() {
  const double e = std::numbers::e;
  return std::sqrt(8.0 * e * e * e) * std::sqrt(2.0);
}

inline double sgd_interpolation_condition_constant() {
  const double e = std::numbers::e;
  return 4.0 * std::sqrt(2.0 * e * e * e) * std::sqrt(2.0);
}

// Gradient descent condition:
//   mu_A^2 mu_B^2 / (lambda_A lambda_B)
//     >= C ||X||_2 sqrt(L0 - L*) / sigma_r^2(X).
inline ConditionReport check_gd_condition(
    const SpectralStats& stats, double initial_loss, double optimal_loss,
    std::optional<double> constant = std::nullopt) {
  require(optimal_loss >= 0.0 && initial_loss >= optimal_loss,
          "check_gd_condition: need initial_loss >= optimal_loss >= 0");
  ConditionReport r;
  r.guarantee = ConditionReport::Guarantee::GdLinearRate;
  r.constant_used = constant ? *constant : gd_condition_constant();
  r.lhs = stats.a_min * stats.a_min * stats.b_min * stats.b_min /
          (stats.a_spec * stats.b_spec);
  r.rhs = r.constant_used * stats.x_spec * std::sqrt(initial_loss - optimal_loss) /
          (stats.x_sigma_r * stats.x_sigma_r);
  r.satisfied = r.lhs >= r.rhs;
  return r;
}

// Stochastic condition. Non-interpolating form:
//   lhs >= C (n ||X||_2 log(L0 / eps') / (B sigma_r^2)) sqrt(L0), eps' = eps/3;
// interpolation form drops the log factor.
inline ConditionReport check_sgd_condition(
    const SpectralStats& stats, double initial_loss, int n, int batch,
    double epsilon, bool interpolation,
    std::optional<double> constant = std::nullopt) {
  require(n >= 1 && batch >= 1 && batch <= n,
          "check_sgd_condition: need n >= B >= 1");
  ConditionReport r;
  r.lhs = stats.a_min * stats.a_min * stats.b_min * stats.b_min /
          (stats.a_spec * stats.b_spec);
  const double sigma_r2 = stats.x_sigma_r * stats.x_sigma_r;
  const double ratio = static_cast<double>(n) / static_cast<double>(batch);
  if (interpolation) {
    r.guarantee = ConditionReport::Guarantee::SgdInterpolation;
    r.constant_used = constant ? *constant : sgd_interpolation_condition_constant();
    r.rhs = r.constant_used * ratio * stats.x_spec * std::sqrt(initial_loss) / sigma_r2;
  } else {
    require(epsilon > 0.0, "check_sgd_condition: epsilon must be positive");
    r.guarantee = ConditionReport::Guarantee::SgdBestIterate;
    r.constant_used = constant ? *constant : sgd_condition_constant();
    const double eps_inner = epsilon / 3.0;
    r.rhs = r.constant_used * ratio * stats.x_spec *
            std::log(initial_loss / eps_inner) * std::sqrt(initial_loss) / sigma_r2;
  }
  r.satisfied = r.lhs >= r.rhs;
  return r;
}

}  // namespace linres
