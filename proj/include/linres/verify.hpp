#pragma once

#include "linres/gradients.hpp"
#include "linres/model.hpp"
#include "linres/optimum.hpp"
#include "linres/rng.hpp"
#include "linres/theory.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace linres {

// Seeded random network + dataset with all hidden weights inside the
// 0.5/depth ball (Frobenius or spectral radius, per `spectral_ball`).
// This is the instance family every randomized inequality suite draws from.
struct RandomInstance {
  ResNetParams params;
  Dataset data;
};

struct RandomInstanceOptions {
  int max_m = 8;
  int max_dk = 4;
  int max_depth = 4;
  int max_n = 6;
  bool spectral_ball = false;   // scale ||W||_2 instead of ||W||_F
  double radius_fraction = 0.0; // 0 -> random in (0, 1), else fixed fraction
};

inline RandomInstance make_random_ball_instance(
    std::uint64_t seed, const RandomInstanceOptions& opts = {}) {
  Rng rng(seed);
  const auto draw_dim = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng.next_u64() %
                                 static_cast<std::uint64_t>(hi - lo + 1));
  };
  const int d = draw_dim(1, opts.max_dk);
  const int k = draw_dim(1, opts.max_dk);
  const int m = draw_dim(std::max(d, k), opts.max_m);
  const int depth = draw_dim(1, opts.max_depth);
  const int n = draw_dim(1, opts.max_n);

  const Matrix a = rng.gaussian_matrix(m, d, 1.0);
  const Matrix b = rng.gaussian_matrix(k, m, 1.0);
  const double limit = 0.5 / static_cast<double>(depth);
  std::vector<Matrix> hidden;
  hidden.reserve(static_cast<std::size_t>(depth));
  for (int l = 0; l < depth; ++l) {
    Matrix w = rng.gaussian_matrix(m, m, 1.0);
    const double fraction = opts.radius_fraction > 0.0
                                ? opts.radius_fraction
                                : 0.05 + 0.9 * rng.uniform01();
    const double norm =
        opts.spectral_ball ? singular_values(w).front() : w.norm();
    if (norm > 0.0) w *= fraction * limit / norm;
    hidden.push_back(std::move(w));
  }
  RandomInstance inst{ResNetParams(a, b, std::move(hidden)),
                      make_dataset(rng.gaussian_matrix(d, n, 1.0),
                                   rng.gaussian_matrix(k, n, 1.0))};
  return inst;
}

// Randomized inequality suites behind the `verify` CLI command: gradient vs finite
// differences, the PL-type gradient bounds (full, per-example, minibatch),
// restricted smoothness, the residual Pythagorean identity, and the product
// norm bounds. Returns per-suite failure counts.
struct VerifySuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
};

struct VerifyReport {
  std::vector<VerifySuiteResult> suites;

  bool ok() const {
    for (const VerifySuiteResult& s : suites)
      if (s.failures > 0) return false;
    return true;
  }

  std::string to_text() const {
    std::ostringstream out;
    for (const VerifySuiteResult& s : suites)
      out << (s.failures == 0 ? "PASS" : "FAIL") << "  " << s.name << "  ("
          << s.cases - s.failures << "/" << s.cases << " cases)\n";
    return out.str();
  }
};

inline VerifyReport verify_suites(std::uint64_t base_seed = 0,
                                  int gradient_cases = 20,
                                  int gradient_bound_cases = 100, int smoothness_cases = 100,
                                  int pythagorean_cases = 200,
                                  int product_norm_cases = 100) {
  VerifyReport report;

  {
    VerifySuiteResult suite{"gradient vs central differences (rel 1e-5)", 0, 0};
    for (int c = 0; c < gradient_cases; ++c) {
      const RandomInstance inst = make_random_ball_instance(base_seed + 1000 + c);
      const GradientSet analytic = full_gradient(inst.params, inst.data);
      const GradientSet fd = fd_gradient(inst.params, inst.data, 1e-5);
      double scale = 0.0;
      for (const Matrix& g : fd.layers)
        scale = std::max(scale, g.cwiseAbs().maxCoeff());
      double max_rel = 0.0;
      for (std::size_t l = 0; l < analytic.layers.size(); ++l) {
        const Matrix diff = analytic.layers[l] - fd.layers[l];
        for (Eigen::Index i = 0; i < diff.size(); ++i) {
          const double aa = std::abs(analytic.layers[l](i));
          const double ff = std::abs(fd.layers[l](i));
          const double denom = std::max({aa, ff, 1e-8 * (scale + 1.0)});
          max_rel = std::max(max_rel, std::abs(diff(i)) / denom);
        }
      }
      ++suite.cases;
      if (max_rel > 1e-5) ++suite.failures;
    }
    report.suites.push_back(suite);
  }

  {
    VerifySuiteResult suite{"gradient norm bounds (full/example/minibatch)", 0, 0};
    for (int c = 0; c < gradient_bound_cases; ++c) {
      RandomInstanceOptions opts;
      opts.spectral_ball = true;
      const RandomInstance inst =
          make_random_ball_instance(base_seed + 2000 + c, opts);
      const SpectralStats stats = spectral_stats(
          inst.params.input_map(), inst.params.output_map(), inst.data.x,
          inst.data.rank);
      const OptimalFit fit = fit_optimum(inst.data);
      bool ok = true;
      for (const BoundReport& r :
           gradient_bound_check(inst.params, inst.data, stats, fit.optimal_loss))
        ok = ok && r.applicable && r.satisfied;
      for (const BoundReport& r : example_gradient_bound_check(
               inst.params, inst.data, c % inst.data.n(), stats))
        ok = ok && r.satisfied;
      Rng rng(base_seed + 3000 + c);
      const int batch_size =
          1 + static_cast<int>(rng.next_u64() %
                               static_cast<std::uint64_t>(inst.data.n()));
      const std::vector<int> batch =
          rng.sample_without_replacement(inst.data.n(), batch_size);
      for (const BoundReport& r :
           stochastic_gradient_bound_check(inst.params, inst.data, batch, stats))
        ok = ok && r.satisfied;
      ++suite.cases;
      if (!ok) ++suite.failures;
    }
    report.suites.push_back(suite);
  }

  {
    VerifySuiteResult suite{"restricted smoothness (rel 1e-9)", 0, 0};
    for (int c = 0; c < smoothness_cases; ++c) {
      const RandomInstance inst = make_random_ball_instance(base_seed + 4000 + c);
      RandomInstance other = make_random_ball_instance(base_seed + 4000 + c);
      Rng rng(base_seed + 5000 + c);
      const double limit = 0.5 / static_cast<double>(inst.params.depth());
      for (Matrix& w : other.params.hidden()) {
        Matrix delta = rng.gaussian_matrix(inst.params.m(), inst.params.m(), 1.0);
        const double fraction = 0.05 + 0.9 * rng.uniform01();
        if (delta.norm() > 0.0) delta *= fraction * limit / delta.norm();
        w = delta;
      }
      const SpectralStats stats = spectral_stats(
          inst.params.input_map(), inst.params.output_map(), inst.data.x,
          inst.data.rank);
      const BoundReport r =
          smoothness_check(inst.params, other.params, inst.data, stats);
      ++suite.cases;
      if (!(r.applicable && r.satisfied)) ++suite.failures;
    }
    report.suites.push_back(suite);
  }

  {
    VerifySuiteResult suite{"residual Pythagorean identity (rel 1e-9)", 0, 0};
    for (int c = 0; c < pythagorean_cases; ++c) {
      Rng rng(base_seed + 6000 + c);
      const int d = 1 + static_cast<int>(rng.next_u64() % 6);
      const int k = 1 + static_cast<int>(rng.next_u64() % 6);
      const int n = 1 + static_cast<int>(rng.next_u64() % 10);
      const Dataset data = make_dataset(rng.gaussian_matrix(d, n, 1.0),
                                        rng.gaussian_matrix(k, n, 1.0));
      const OptimalFit fit = fit_optimum(data);
      const Matrix u = rng.gaussian_matrix(k, d, 2.0);
      ++suite.cases;
      if (!pythagorean_check(u, data, fit).satisfied) ++suite.failures;
    }
    report.suites.push_back(suite);
  }

  {
    VerifySuiteResult suite{"product norm bounds", 0, 0};
    for (int c = 0; c < product_norm_cases; ++c) {
      Rng rng(base_seed + 7000 + c);
      const int d = 2 + static_cast<int>(rng.next_u64() % 7);
      const int r = 1 + static_cast<int>(rng.next_u64() %
                                         static_cast<std::uint64_t>(d));
      const int k = 1 + static_cast<int>(rng.next_u64() % 6);
      const Matrix u = rng.gaussian_matrix(d, r, 1.0);
      const Matrix v = rng.gaussian_matrix(r, k, 1.0);
      bool ok = true;
      for (const BoundReport& rep : product_norm_check(u, v))
        ok = ok && rep.satisfied;
      ++suite.cases;
      if (!ok) ++suite.failures;
    }
    report.suites.push_back(suite);
  }

  return report;
}

}  // namespace linres
