// Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
// Tolerances and thresholds are pinned in code; every randomized check runs
// from fixed seeds so the suite is deterministic.

#include "linres/experiment.hpp"
#include "linres/theory.hpp"
#include "linres/trainer.hpp"
#include "linres/transforms.hpp"
#include "linres/verify.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

using namespace linres;

namespace {

void report(int index, const char* name, bool pass, const std::string& detail) {
  std::printf("[CRITERION %2d] %s  %s  (%s)\n", index, pass ? "PASS" : "FAIL",
              name, detail.c_str());
  std::fflush(stdout);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

SpectralStats stats_of(const Matrix& a, const Matrix& b, const Dataset& data) {
  return spectral_stats(a, b, data.x, data.rank);
}

// Modified-identity transforms with the output scale set `margin` above the
// relevant condition threshold (the threshold side is scale-independent).
std::pair<Matrix, Matrix> modified_identity_above_threshold(int m, int d, int k,
                                                            double threshold,
                                                            double margin) {
  TransformSpec spec;
  spec.dims = {m, d, k};
  spec.kind = ModifiedIdentityTransform{margin * std::max(threshold, 1.0), {}, {}};
  return build_transforms(spec);
}

}  // namespace

// 1. Analytic gradient vs central differences on 20 seeded in-ball instances.
TEST(Acceptance, C01_GradientCorrectness) {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RandomInstance inst = make_random_ball_instance(10'000 + seed);
    const GradientSet analytic = full_gradient(inst.params, inst.data);
    const GradientSet fd = fd_gradient(inst.params, inst.data, 1e-5);
    double scale = 0.0;
    for (const Matrix& g : fd.layers)
      scale = std::max(scale, g.cwiseAbs().maxCoeff());
    for (std::size_t l = 0; l < fd.layers.size(); ++l) {
      const Matrix diff = analytic.layers[l] - fd.layers[l];
      for (Eigen::Index i = 0; i < diff.size(); ++i) {
        const double denom = std::max(
            {std::abs(analytic.layers[l](i)), std::abs(fd.layers[l](i)),
             1e-8 * (scale + 1.0)});
        worst = std::max(worst, std::abs(diff(i)) / denom);
      }
    }
  }
  const bool pass = worst <= 1e-5;
  report(1, "gradient matches finite differences", pass,
         "max rel err " + format_double(worst) + " <= 1e-5");
  EXPECT_TRUE(pass);
}

// 2. PL-type gradient bounds (full, per-example, minibatch) on 100 seeded
//    instances with max_l ||W_l||_2 <= 0.5/L.
TEST(Acceptance, C02_GradientBoundSuite) {
  int checked = 0, violated = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomInstanceOptions opts;
    opts.spectral_ball = true;
    const RandomInstance inst = make_random_ball_instance(20'000 + seed, opts);
    const SpectralStats stats =
        stats_of(inst.params.input_map(), inst.params.output_map(), inst.data);
    const OptimalFit fit = fit_optimum(inst.data);
    for (const BoundReport& r :
         gradient_bound_check(inst.params, inst.data, stats, fit.optimal_loss)) {
      ++checked;
      if (!(r.applicable && r.satisfied)) ++violated;
    }
    for (int i = 0; i < inst.data.n(); ++i)
      for (const BoundReport& r :
           example_gradient_bound_check(inst.params, inst.data, i, stats)) {
        ++checked;
        if (!r.satisfied) ++violated;
      }
    Rng rng(21'000 + seed);
    const int b = 1 + static_cast<int>(rng.next_u64() %
                                       static_cast<std::uint64_t>(inst.data.n()));
    for (const BoundReport& r : stochastic_gradient_bound_check(
             inst.params, inst.data,
             rng.sample_without_replacement(inst.data.n(), b), stats)) {
      ++checked;
      if (!r.satisfied) ++violated;
    }
  }
  const bool pass = violated == 0;
  report(2, "gradient norm bounds (2/e lower, 2e upper, rel 1e-9)", pass,
         std::to_string(checked) + " inequalities, " + std::to_string(violated) +
             " violated");
  EXPECT_TRUE(pass);
}

// 3. Restricted smoothness on 100 seeded pairs inside the Frobenius ball.
TEST(Acceptance, C03_SmoothnessSuite) {
  int violated = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const RandomInstance inst = make_random_ball_instance(30'000 + seed);
    RandomInstance other = make_random_ball_instance(30'000 + seed);
    Rng rng(31'000 + seed);
    const double limit = 0.5 / inst.params.depth();
    for (Matrix& w : other.params.hidden()) {
      Matrix fresh = rng.gaussian_matrix(inst.params.m(), inst.params.m(), 1.0);
      const double fraction = 0.05 + 0.9 * rng.uniform01();
      if (fresh.norm() > 0) fresh *= fraction * limit / fresh.norm();
      w = fresh;
    }
    const SpectralStats stats =
        stats_of(inst.params.input_map(), inst.params.output_map(), inst.data);
    const BoundReport r =
        smoothness_check(inst.params, other.params, inst.data, stats);
    if (!(r.applicable && r.satisfied)) ++violated;
  }
  const bool pass = violated == 0;
  report(3, "restricted smoothness (rel 1e-9)", pass,
         "100 pairs, " + std::to_string(violated) + " violated");
  EXPECT_TRUE(pass);
}

// 4. Residual Pythagorean identity (200 pairs) and product norm bounds (100).
TEST(Acceptance, C04_PythagoreanAndProductNorm) {
  int pyth_violations = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(40'000 + seed);
    const int d = 1 + static_cast<int>(rng.next_u64() % 6);
    const int k = 1 + static_cast<int>(rng.next_u64() % 6);
    const int n = 1 + static_cast<int>(rng.next_u64() % 10);
    const Dataset data = make_dataset(rng.gaussian_matrix(d, n, 1.0),
                                      rng.gaussian_matrix(k, n, 1.0));
    const OptimalFit fit = fit_optimum(data);
    const Matrix u = rng.gaussian_matrix(k, d, 2.0);
    if (!pythagorean_check(u, data, fit).satisfied) ++pyth_violations;
  }
  int norm_violations = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(41'000 + seed);
    const int d = 2 + static_cast<int>(rng.next_u64() % 7);
    const int r = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(d));
    const int k = 1 + static_cast<int>(rng.next_u64() % 6);
    for (const BoundReport& rep : product_norm_check(
             rng.gaussian_matrix(d, r, 1.0), rng.gaussian_matrix(r, k, 1.0)))
      if (!rep.satisfied) ++norm_violations;
  }
  const bool pass = pyth_violations == 0 && norm_violations == 0;
  report(4, "Pythagorean identity + product norm bounds", pass,
         std::to_string(pyth_violations) + " / " + std::to_string(norm_violations) +
             " violations");
  EXPECT_TRUE(pass);
}

// 5. Linear-rate GD end to end on the synthetic comparison task with Gaussian
//    transforms (alpha = beta = 1, m = 200, L = 10) and the certified step.
TEST(Acceptance, C05_GdEndToEnd) {
  const auto t0 = std::chrono::steady_clock::now();
  const SyntheticData synth =
      gen_synthetic(10, 10, 1000, 0.1, 42, MapKind::NegIdentity);
  TransformSpec spec;
  spec.dims = {200, 10, 10};
  spec.kind = GaussianTransform{1.0, 1.0, 43};
  const auto [a, b] = build_transforms(spec);
  const OptimalFit fit = fit_optimum(synth.data);
  const SpectralStats stats = stats_of(a, b, synth.data);
  const ResNetParams p0 = zero_init(a, b, 10);
  const double initial_loss = loss(p0, synth.data);
  const double gap0 = initial_loss - fit.optimal_loss;

  TrainConfig cfg;
  cfg.algorithm = TrainConfig::Algorithm::Gd;
  cfg.eta = step_size_gd(stats, initial_loss, 10);
  cfg.horizon = horizon(stats, cfg.eta, 10, gap0, 1e-3 * gap0);
  cfg.record_every = 1;
  const double rho = contraction_rate(stats, cfg.eta, 10);
  const Trace trace = run_gd(p0, synth.data, cfg, fit.optimal_loss);

  double max_w = 0.0;
  bool monotone = true, envelope_ok = true;
  long long reach_iter = -1;
  double previous_loss = trace.records.front().loss;
  double envelope = gap0;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& r = trace.records[i];
    max_w = std::max(max_w, r.max_w_fro);
    if (i > 0) {
      if (r.loss > previous_loss + 1e-12) monotone = false;
      envelope *= rho;
      if (r.gap > envelope * (1.0 + 1e-8)) envelope_ok = false;
    }
    if (reach_iter < 0 && r.gap <= 1e-3 * gap0) reach_iter = r.iter;
    previous_loss = r.loss;
  }
  const double elapsed = seconds_since(t0);

  const bool confinement = max_w <= 0.5 / 10.0;
  const bool reached = reach_iter >= 0 && reach_iter <= cfg.horizon;
  const bool runtime_ok = elapsed < 60.0;
  const bool pass = confinement && monotone && envelope_ok && reached && runtime_ok;
  report(5, "linear-rate GD end to end", pass,
         "confinement max||W||_F=" + format_double(max_w) +
             (confinement ? " <= 0.05" : " > 0.05 VIOLATED") +
             ", monotone=" + (monotone ? "yes" : "NO") +
             ", rate envelope=" + (envelope_ok ? "yes" : "NO") + ", reach@" +
             std::to_string(reach_iter) + "/T=" + std::to_string(cfg.horizon) +
             ", " + format_double(elapsed) + "s");
  EXPECT_TRUE(monotone);
  EXPECT_TRUE(envelope_ok);
  EXPECT_TRUE(reached);
  EXPECT_TRUE(runtime_ok);
  // Empirically the trajectory tops out near 0.08 at this width: the pinned
  // m = 200 sits outside the certified condition (lhs ~ 63 vs rhs ~ 3600) and
  // the weight norms scale like ||BA||_F / (L m) ~ sqrt(d k / m) / L, which
  // stays below 0.5/L only once m is several times larger.
  EXPECT_TRUE(confinement) << "trajectory confinement fails at the pinned width";
}

// 6. Transform comparison on the same task over 500 iterations.
TEST(Acceptance, C06_TransformComparison) {
  const SyntheticData synth =
      gen_synthetic(10, 10, 1000, 0.1, 42, MapKind::NegIdentity);
  const OptimalFit fit = fit_optimum(synth.data);
  const int m = 200, depth = 10;

  struct Outcome {
    double reduction = 0.0;
    double final_gap = 0.0;
    double late_reduction = 0.0;  // over the last 400 iterations
  };
  const auto run500 = [&](const TransformSpec& spec) {
    const auto [a, b] = build_transforms(spec);
    const SpectralStats stats = stats_of(a, b, synth.data);
    const ResNetParams p0 = zero_init(a, b, depth);
    const double initial_loss = loss(p0, synth.data);
    const double gap0 = initial_loss - fit.optimal_loss;
    TrainConfig cfg;
    cfg.algorithm = TrainConfig::Algorithm::Gd;
    cfg.eta = step_size_gd(stats, initial_loss, depth);
    cfg.horizon = 500;
    cfg.record_every = 100;
    const Trace trace = run_gd(p0, synth.data, cfg, fit.optimal_loss);
    Outcome out;
    out.final_gap = trace.final_loss - fit.optimal_loss;
    out.reduction = (gap0 - out.final_gap) / gap0;
    const double gap_100 = trace.records[1].gap;
    out.late_reduction =
        gap_100 > 0.0 ? (gap_100 - out.final_gap) / gap_100 : 0.0;
    return out;
  };

  TransformSpec ident;
  ident.dims = {m, 10, 10};
  ident.kind = PlainIdentityTransform{};
  const Outcome identity = run500(ident);

  TransformSpec probe;
  probe.dims = {m, 10, 10};
  probe.kind = ModifiedIdentityTransform{1.0, {}, {}};
  const auto [pa, pb] = build_transforms(probe);
  const double mi_threshold =
      check_gd_condition(stats_of(pa, pb, synth.data),
                         0.5 * synth.data.y.squaredNorm(), fit.optimal_loss)
          .rhs;
  TransformSpec mi;
  mi.dims = {m, 10, 10};
  mi.kind = ModifiedIdentityTransform{2.0 * mi_threshold, {}, {}};
  const Outcome modified = run500(mi);

  TransformSpec gauss;
  gauss.dims = {m, 10, 10};
  gauss.kind = GaussianTransform{1.0, 1.0, 43};
  const Outcome gaussian = run500(gauss);

  const bool identity_stalls = identity.reduction < 0.01;
  const bool modified_converges = modified.reduction > 0.999;
  const bool gaussian_converges = gaussian.reduction > 0.999;
  const bool pass = identity_stalls && modified_converges && gaussian_converges;
  report(6, "transform comparison over 500 iterations", pass,
         "identity reduced " + format_double(100.0 * identity.reduction) +
             "% (required < 1%; plateau gap " + format_double(identity.final_gap) +
             ", last-400-iter reduction " +
             format_double(100.0 * identity.late_reduction) + "%), modified " +
             format_double(100.0 * modified.reduction) + "%, gaussian " +
             format_double(100.0 * gaussian.reduction) + "%");
  EXPECT_TRUE(modified_converges);
  EXPECT_TRUE(gaussian_converges);
  // The plain-identity run does stall far above the optimum (its end-to-end
  // map cannot cross the negative-spectrum barrier), but only after shedding
  // the huge sqrt(m/k)-scaled initial loss, so the measured reduction is ~95%
  // rather than the stated < 1%.
  EXPECT_TRUE(identity_stalls) << "identity run reduces the gap by "
                               << 100.0 * identity.reduction << "%";
}

// 7. Minibatch unbiasedness by exhaustive enumeration and B = n bit-identity.
TEST(Acceptance, C07_SgdUnbiasedness) {
  Rng rng(70'001);
  const int n = 5;
  const Matrix a = rng.gaussian_matrix(6, 3, 1.0);
  const Matrix b = rng.gaussian_matrix(2, 6, 1.0);
  ResNetParams p = zero_init(a, b, 3);
  p.hidden()[1] = rng.gaussian_matrix(6, 6, 0.02);
  const Dataset data = make_dataset(rng.gaussian_matrix(3, n, 1.0),
                                    rng.gaussian_matrix(2, n, 1.0));
  const GradientSet full = full_gradient(p, data);
  std::vector<Matrix> mean(3, Matrix::Zero(6, 6));
  int subsets = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const GradientSet g = minibatch_gradient(p, data, {i, j}, n);
      for (std::size_t l = 0; l < mean.size(); ++l) mean[l] += g.layers[l];
      ++subsets;
    }
  double enumeration_err = 0.0;
  for (std::size_t l = 0; l < mean.size(); ++l) {
    mean[l] /= subsets;
    enumeration_err = std::max(
        enumeration_err, (mean[l] - full.layers[l]).cwiseAbs().maxCoeff());
  }

  const OptimalFit fit = fit_optimum(data);
  TrainConfig gd_cfg;
  gd_cfg.algorithm = TrainConfig::Algorithm::Gd;
  gd_cfg.eta = 1e-4;
  gd_cfg.horizon = 30;
  const Trace gd_trace = run_gd(p, data, gd_cfg, fit.optimal_loss);
  TrainConfig sgd_cfg = gd_cfg;
  sgd_cfg.algorithm = TrainConfig::Algorithm::Sgd;
  sgd_cfg.batch = n;
  sgd_cfg.seed = 999;
  const Trace sgd_trace = run_sgd(p, data, sgd_cfg, fit.optimal_loss);
  const bool bit_identical = trace_to_csv(gd_trace) == trace_to_csv(sgd_trace);

  const bool pass = enumeration_err <= 1e-12 && bit_identical;
  report(7, "SGD unbiasedness + full-batch bit identity", pass,
         "enumeration max err " + format_double(enumeration_err) +
             ", B=n trace bit-identical=" + (bit_identical ? "yes" : "NO"));
  EXPECT_LE(enumeration_err, 1e-12);
  EXPECT_TRUE(bit_identical);
}

// 8. Interpolation-regime SGD: last-iterate envelope
//    L(W_t) <= 2 L(W_0) rho^t in at least 9 of 10 seeds, at the literal
//    certified step size and at a stressed multiple where the envelope
//    actually decays.
TEST(Acceptance, C08_InterpolationSgd) {
  const int d = 4, k = 4, n = 32, batch = 8, depth = 4, m = 8;
  const SyntheticData synth = gen_synthetic(d, k, n, 0.0, 71, MapKind::NegIdentity);
  const OptimalFit fit = fit_optimum(synth.data);
  ASSERT_LT(fit.optimal_loss, 1e-20);  // interpolation by construction

  TransformSpec probe;
  probe.dims = {m, d, k};
  probe.kind = ModifiedIdentityTransform{1.0, {}, {}};
  const auto [pa, pb] = build_transforms(probe);
  const double threshold =
      check_sgd_condition(stats_of(pa, pb, synth.data),
                          0.5 * synth.data.y.squaredNorm(), n, batch, 0.1, true)
          .rhs;
  const auto [a, b] = modified_identity_above_threshold(m, d, k, threshold, 1.1);
  const SpectralStats stats = stats_of(a, b, synth.data);
  ASSERT_TRUE(check_sgd_condition(stats, 0.5 * synth.data.y.squaredNorm(), n,
                                  batch, 0.1, true)
                  .satisfied);
  const ResNetParams p0 = zero_init(a, b, depth);
  const double initial_loss = loss(p0, synth.data);
  const long long horizon_t = 3000;
  const double delta = 0.1;

  const double eta_literal = step_size_sgd(stats, depth, initial_loss, 0.0, n,
                                           batch, 0.1, delta, horizon_t, true);
  const double mu2 = stats.a_min * stats.a_min * stats.b_min * stats.b_min;
  const double rate = eta_literal * depth * mu2 * stats.x_sigma_r *
                      stats.x_sigma_r / std::numbers::e;
  // At the proof constants the envelope barely moves over the horizon; the
  // stressed run scales the constant so the total certified decay is e^-3.
  const double stress_scale = 3.0 / (rate * static_cast<double>(horizon_t));

  std::string detail;
  bool pass = true;
  for (const double scale : {1.0, stress_scale}) {
    const double eta = step_size_sgd(stats, depth, initial_loss, 0.0, n, batch,
                                     0.1, delta, horizon_t, true, scale);
    const double rho = 1.0 - eta * depth * mu2 * stats.x_sigma_r *
                                 stats.x_sigma_r / std::numbers::e;
    int ok_seeds = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      TrainConfig cfg;
      cfg.algorithm = TrainConfig::Algorithm::Sgd;
      cfg.eta = eta;
      cfg.horizon = horizon_t;
      cfg.batch = batch;
      cfg.seed = 900 + seed;
      cfg.record_every = 1;
      const Trace trace = run_sgd(p0, synth.data, cfg, 0.0);
      bool ok = true;
      for (const TraceRecord& r : trace.records)
        if (r.loss >
            2.0 * initial_loss * std::pow(rho, static_cast<double>(r.iter)))
          ok = false;
      if (ok) ++ok_seeds;
    }
    pass = pass && ok_seeds >= 9;
    detail += (scale == 1.0 ? std::string("literal ") : std::string("stressed ")) +
              std::to_string(ok_seeds) + "/10  ";
  }
  report(8, "interpolation SGD last-iterate envelope", pass,
         detail + "(stress scale x" + format_double(stress_scale) + ")");
  EXPECT_TRUE(pass);
}

// 9. Noisy SGD best-iterate guarantee with seed majority. The literal proof
//    constants put the horizon near 2e8 iterations (printed below), which is
//    not runnable at desk scale; the run keeps the certified formula shape and
//    uses the module's documented constant override so the horizon lands near
//    2e4, preserving the probability margin being tested.
TEST(Acceptance, C09_NoisySgdBestIterate) {
  const int d = 4, k = 4, n = 64, batch = 8, depth = 4, m = 8;
  const SyntheticData synth = gen_synthetic(d, k, n, 0.1, 72, MapKind::NegIdentity);
  const OptimalFit fit = fit_optimum(synth.data);
  const double initial_loss_mi = 0.5 * synth.data.y.squaredNorm();
  const double gap0_mi = initial_loss_mi - fit.optimal_loss;
  const double epsilon = 0.05 * gap0_mi;
  const double delta = 0.1;

  TransformSpec probe;
  probe.dims = {m, d, k};
  probe.kind = ModifiedIdentityTransform{1.0, {}, {}};
  const auto [pa, pb] = build_transforms(probe);
  const double threshold =
      check_sgd_condition(stats_of(pa, pb, synth.data), initial_loss_mi, n,
                          batch, epsilon, false)
          .rhs;
  const auto [a, b] = modified_identity_above_threshold(m, d, k, threshold, 1.1);
  const SpectralStats stats = stats_of(a, b, synth.data);
  ASSERT_TRUE(
      check_sgd_condition(stats, initial_loss_mi, n, batch, epsilon, false)
          .satisfied);
  const ResNetParams p0 = zero_init(a, b, depth);
  const double initial_loss = loss(p0, synth.data);
  const double gap0 = initial_loss - fit.optimal_loss;

  long long literal_horizon = 100000;
  double eta = 0.0;
  for (int round = 0; round < 3; ++round) {
    eta = step_size_sgd(stats, depth, initial_loss, fit.optimal_loss, n, batch,
                        epsilon, delta, literal_horizon, false);
    literal_horizon =
        std::max<long long>(horizon(stats, eta, depth, gap0, epsilon), 1);
  }
  const double override_scale = static_cast<double>(literal_horizon) / 20000.0;
  long long run_horizon = 20000;
  for (int round = 0; round < 3; ++round) {
    eta = step_size_sgd(stats, depth, initial_loss, fit.optimal_loss, n, batch,
                        epsilon, delta, run_horizon, false, override_scale);
    run_horizon =
        std::max<long long>(horizon(stats, eta, depth, gap0, epsilon), 1);
  }

  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TrainConfig cfg;
    cfg.algorithm = TrainConfig::Algorithm::Sgd;
    cfg.eta = eta;
    cfg.horizon = run_horizon;
    cfg.batch = batch;
    cfg.seed = 7000 + seed;
    cfg.record_every = 1000;
    const Trace trace = run_sgd(p0, synth.data, cfg, fit.optimal_loss);
    if (trace.best_gap <= epsilon) ++hits;
  }
  const bool pass = hits >= 10;
  report(9, "noisy SGD best-iterate (seed majority)", pass,
         std::to_string(hits) + "/20 seeds reached eps (literal horizon " +
             std::to_string(literal_horizon) +
             " infeasible at desk scale; constant override x" +
             format_double(override_scale) + ", T=" + std::to_string(run_horizon) +
             ")");
  EXPECT_TRUE(pass);
}

// 10. Random-transform statistics at m = 4096: singular-value envelopes and
//     the explicit initial-loss bound, each failing in at most 1 of 50 seeds.
//     The proof's width threshold at delta = 0.01, d = k = 10 is ~4800, above
//     the pinned 4096, so threshold enforcement is disabled for this run.
TEST(Acceptance, C10_RandomTransformStatistics) {
  const SyntheticData synth = gen_synthetic(10, 10, 32, 0.1, 5, MapKind::NegIdentity);
  const TransformStatsReport rep = validate_transform_statistics(4096, 1.0, 1.0, 0.01, 50, synth.data,
                                         /*enforce_threshold=*/false, 1000);
  const bool pass = rep.singular_failures <= 1 && rep.loss_failures <= 1;
  report(10, "random transform spectra + initial loss bound", pass,
         "sv failures " + std::to_string(rep.singular_failures) +
             "/50, loss failures " + std::to_string(rep.loss_failures) +
             "/50 (proof width threshold " + format_double(rep.width_threshold) +
             " > 4096, enforcement disabled)");
  EXPECT_TRUE(pass);
}

// 11. Depth contrast at m = 200: residual iteration counts to 1e-2 gap are
//     depth-stable; the plain product baseline degrades strictly with depth
//     (or fails outright at L = 100 within ten times the residual budget).
TEST(Acceptance, C11_DepthContrast) {
  const int d = 10, k = 10, n = 256, m = 200;
  const SyntheticData synth = gen_synthetic(d, k, n, 0.1, 81, MapKind::NegIdentity);
  const OptimalFit fit = fit_optimum(synth.data);
  TransformSpec spec;
  spec.dims = {m, d, k};
  spec.kind = GaussianTransform{1.0, 1.0, 82};
  const auto [a, b] = build_transforms(spec);
  const SpectralStats stats = stats_of(a, b, synth.data);

  const long long unreached = std::numeric_limits<long long>::max();
  std::vector<long long> resnet_iters, baseline_iters;
  for (const int depth : {5, 20, 100}) {
    const ResNetParams p0 = zero_init(a, b, depth);
    const double initial_loss = loss(p0, synth.data);
    const double gap0 = initial_loss - fit.optimal_loss;
    TrainConfig cfg;
    cfg.algorithm = TrainConfig::Algorithm::Gd;
    cfg.eta = step_size_gd(stats, initial_loss, depth);
    cfg.early_stop_gap = 1e-2 * gap0;
    cfg.horizon = 20000;
    cfg.record_every = 100;
    const Trace trace = run_gd(p0, synth.data, cfg, fit.optimal_loss);
    ASSERT_EQ(trace.status, RunStatus::EarlyStop);
    resnet_iters.push_back(trace.final_iter);

    Rng init_probe(83);
    Matrix acc = a;
    for (int l = 0; l < depth; ++l)
      acc = init_probe.gaussian_matrix(m, m, 1.0 / std::sqrt(static_cast<double>(m))) *
            acc;
    const double baseline_loss0 =
        0.5 * ((b * acc) * synth.data.x - synth.data.y).squaredNorm();
    const double baseline_gap0 = baseline_loss0 - fit.optimal_loss;
    TrainConfig bcfg;
    bcfg.algorithm = TrainConfig::Algorithm::GdStandardBaseline;
    bcfg.eta = step_size_gd(stats, baseline_loss0, depth);
    bcfg.seed = 83;
    bcfg.early_stop_gap = 1e-2 * baseline_gap0;
    bcfg.horizon = 10 * trace.final_iter;
    bcfg.record_every = 100;
    const Trace btrace = run_standard_baseline(a, b, synth.data, bcfg, depth,
                                               fit.optimal_loss, 1.0);
    baseline_iters.push_back(
        btrace.status == RunStatus::EarlyStop ? btrace.final_iter : unreached);
  }

  const long long rmin = *std::min_element(resnet_iters.begin(), resnet_iters.end());
  const long long rmax = *std::max_element(resnet_iters.begin(), resnet_iters.end());
  const bool resnet_stable =
      static_cast<double>(rmax) < 2.0 * static_cast<double>(rmin);
  const bool strictly_increasing = baseline_iters[0] < baseline_iters[1] &&
                                   baseline_iters[1] < baseline_iters[2] &&
                                   baseline_iters[2] != unreached;
  const bool failed_at_100 = baseline_iters[2] == unreached;
  const bool pass = resnet_stable && (strictly_increasing || failed_at_100);

  const auto show = [unreached](long long v) {
    return v == unreached ? std::string("unreached") : std::to_string(v);
  };
  report(11, "depth contrast (residual vs plain product)", pass,
         "resnet iters {" + std::to_string(resnet_iters[0]) + "," +
             std::to_string(resnet_iters[1]) + "," +
             std::to_string(resnet_iters[2]) + "}, baseline {" +
             show(baseline_iters[0]) + "," + show(baseline_iters[1]) + "," +
             show(baseline_iters[2]) + "}");
  EXPECT_TRUE(resnet_stable);
  EXPECT_TRUE(strictly_increasing || failed_at_100);
}

// 12. Byte-level determinism of emitted artifacts for GD and SGD configs.
TEST(Acceptance, C12_Determinism) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "linres_acceptance_c12";
  fs::create_directories(dir);

  ExperimentConfig gd;
  gd.d = 4;
  gd.k = 4;
  gd.n = 48;
  gd.noise = 0.1;
  gd.data_seed = 121;
  gd.transform = TransformKind::Gaussian;
  gd.m = 24;
  gd.transform_seed = 122;
  gd.depth = 4;
  gd.algorithm = TrainConfig::Algorithm::Gd;
  gd.horizon_mode = "fixed";
  gd.horizon_value = 80;
  gd.record_every = 4;
  gd.checks_enabled = true;
  gd.checks_every = 20;

  ExperimentConfig sgd = gd;
  sgd.algorithm = TrainConfig::Algorithm::Sgd;
  sgd.batch = 12;
  sgd.train_seed = 123;
  sgd.eta_mode = "fixed";
  sgd.eta_value = 1e-5;
  sgd.checks_enabled = false;

  bool pass = true;
  std::string detail;
  int tag = 0;
  for (const ExperimentConfig& cfg : {gd, sgd}) {
    ++tag;
    const RunArtifact a1 = run_experiment(cfg);
    const RunArtifact a2 = run_experiment(cfg);
    const std::string p1 = (dir / ("a" + std::to_string(tag))).string();
    const std::string p2 = (dir / ("b" + std::to_string(tag))).string();
    const auto files1 = write_artifact(a1, p1, OutputFormat::Csv);
    const auto files2 = write_artifact(a2, p2, OutputFormat::Csv);
    bool same = files1.size() == files2.size();
    for (std::size_t i = 0; same && i < files1.size(); ++i)
      same = read_file(files1[i]) == read_file(files2[i]);
    pass = pass && same;
    detail += (tag == 1 ? std::string("gd=") : std::string("sgd=")) +
              (same ? "identical " : "DIFFER ");
  }
  fs::remove_all(dir);
  report(12, "byte-identical artifact reproduction", pass, detail);
  EXPECT_TRUE(pass);
}
