// Command-line front end: synthetic data generation, training runs with
// theory diagnostics, condition checks, randomized verification suites, and
// axis sweeps. Exit codes: 0 success, 2 condition/bound-check failure,
// 3 divergence.

#include "linres/experiment.hpp"
#include "linres/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConditionFailure = 2;
constexpr int kExitDivergence = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_prefix = "run";
  std::string format = "csv";
  std::uint64_t seed_data = 0;
  std::uint64_t seed_transform = 0;
  std::uint64_t seed_train = 0;
  bool has_seed_data = false;
  bool has_seed_transform = false;
  bool has_seed_train = false;
};

void add_common_flags(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config_path, "experiment config file");
  if (config_required) opt->required();
  cmd->add_option("--out", args.out_prefix, "output path prefix");
  cmd->add_option("--format", args.format, "artifact format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed-data", args.seed_data, "override data seed")
      ->each([&args](const std::string&) { args.has_seed_data = true; });
  cmd->add_option("--seed-transform", args.seed_transform, "override transform seed")
      ->each([&args](const std::string&) { args.has_seed_transform = true; });
  cmd->add_option("--seed-train", args.seed_train, "override training seed")
      ->each([&args](const std::string&) { args.has_seed_train = true; });
}

linres::ExperimentConfig load_config(const CommonArgs& args) {
  linres::ExperimentConfig cfg = linres::ExperimentConfig::from_kv(
      linres::KeyValueConfig::parse_file(args.config_path));
  if (args.has_seed_data) cfg.data_seed = args.seed_data;
  if (args.has_seed_transform) cfg.transform_seed = args.seed_transform;
  if (args.has_seed_train) cfg.train_seed = args.seed_train;
  return cfg;
}

std::string matrix_to_csv(const linres::Matrix& m) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << linres::format_double(m(i, j));
    }
    out << '\n';
  }
  return out.str();
}

int cmd_gen_data(const CommonArgs& args) {
  const linres::ExperimentConfig cfg = load_config(args);
  const linres::SyntheticData synth = linres::gen_synthetic(
      cfg.d, cfg.k, cfg.n, cfg.noise, cfg.data_seed, cfg.map);
  const linres::OptimalFit fit = linres::fit_optimum(synth.data);
  linres::write_text_file(args.out_prefix + "_X.csv", matrix_to_csv(synth.data.x));
  linres::write_text_file(args.out_prefix + "_Y.csv", matrix_to_csv(synth.data.y));
  linres::KeyValueConfig meta;
  meta.set("d", std::to_string(cfg.d));
  meta.set("k", std::to_string(cfg.k));
  meta.set("n", std::to_string(cfg.n));
  meta.set("noise", linres::format_double(cfg.noise));
  meta.set("map", linres::to_string(cfg.map));
  meta.set("seed", std::to_string(cfg.data_seed));
  meta.set("rank", std::to_string(synth.data.rank));
  meta.set("optimal_loss", linres::format_double(fit.optimal_loss));
  linres::write_text_file(args.out_prefix + "_meta.txt", meta.to_text());
  std::cout << "wrote " << args.out_prefix << "_X.csv, _Y.csv, _meta.txt\n";
  return kExitOk;
}

int cmd_train(const CommonArgs& args) {
  const linres::ExperimentConfig cfg = load_config(args);
  const linres::RunArtifact artifact = linres::run_experiment(cfg);
  const auto paths = linres::write_artifact(
      artifact, args.out_prefix, linres::output_format_from_string(args.format));
  for (const std::string& p : paths) std::cout << "wrote " << p << '\n';
  std::cout << linres::summary_to_text(artifact.summary);
  if (artifact.summary.status == linres::RunStatus::Diverged) return kExitDivergence;
  for (const linres::BoundReport& r : artifact.bounds) {
    if (r.applicable && !r.satisfied) {
      std::cout << "bound violated: " << r.quantity << " at iter " << r.iterate
                << " layer " << r.layer << '\n';
      return kExitConditionFailure;
    }
  }
  return kExitOk;
}

int cmd_check(const CommonArgs& args) {
  const linres::ExperimentConfig cfg = load_config(args);
  const linres::SyntheticData synth = linres::gen_synthetic(
      cfg.d, cfg.k, cfg.n, cfg.noise, cfg.data_seed, cfg.map);
  const auto [a, b] = linres::build_transforms(cfg.transform_spec());
  const linres::OptimalFit fit = linres::fit_optimum(synth.data);
  const linres::SpectralStats stats =
      linres::spectral_stats(a, b, synth.data.x, synth.data.rank);
  const double initial_loss =
      linres::loss(linres::zero_init(a, b, cfg.depth), synth.data);
  const double initial_gap = initial_loss - fit.optimal_loss;
  const double epsilon =
      cfg.epsilon_abs ? *cfg.epsilon_abs : cfg.epsilon_rel * initial_gap;

  linres::ConditionReport report;
  if (cfg.algorithm == linres::TrainConfig::Algorithm::Sgd) {
    report = linres::check_sgd_condition(stats, initial_loss, cfg.n, cfg.batch,
                                         epsilon, cfg.interpolation);
  } else {
    report = linres::check_gd_condition(stats, initial_loss, fit.optimal_loss);
  }
  std::cout << "condition_lhs = " << linres::format_double(report.lhs) << '\n'
            << "condition_rhs = " << linres::format_double(report.rhs) << '\n'
            << "constant_used = " << linres::format_double(report.constant_used) << '\n'
            << "satisfied = " << (report.satisfied ? "true" : "false") << '\n'
            << "initial_loss = " << linres::format_double(initial_loss) << '\n'
            << "optimal_loss = " << linres::format_double(fit.optimal_loss) << '\n';
  return report.satisfied ? kExitOk : kExitConditionFailure;
}

int cmd_verify(std::uint64_t seed) {
  const linres::VerifyReport report = linres::verify_suites(seed);
  std::cout << report.to_text();
  return report.ok() ? kExitOk : kExitConditionFailure;
}

int cmd_sweep(const CommonArgs& args, const std::string& axis,
              const std::vector<long long>& values) {
  const linres::ExperimentConfig cfg = load_config(args);
  const linres::SweepResult result =
      linres::sweep(cfg, linres::sweep_axis_from_string(axis), values);
  const linres::OutputFormat format = linres::output_format_from_string(args.format);
  bool any_error = false;
  bool any_divergence = false;
  for (const linres::SweepEntry& entry : result.entries) {
    if (!entry.ok) {
      any_error = true;
      continue;
    }
    const std::string prefix =
        args.out_prefix + "_" + axis + std::to_string(entry.value);
    linres::write_artifact(entry.artifact, prefix, format);
    if (entry.artifact.summary.status == linres::RunStatus::Diverged)
      any_divergence = true;
  }
  const std::string table = linres::sweep_table(result);
  linres::write_text_file(args.out_prefix + ".sweep.txt", table);
  std::cout << table;
  if (any_divergence) return kExitDivergence;
  return any_error ? kExitConditionFailure : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deep linear residual network training and bound verification"};
  app.require_subcommand(1);

  CommonArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen-data", "generate a synthetic dataset");
  add_common_flags(gen, gen_args, /*config_required=*/true);

  CommonArgs train_args;
  CLI::App* train = app.add_subcommand("train", "run one training experiment");
  add_common_flags(train, train_args, /*config_required=*/true);

  CommonArgs check_args;
  CLI::App* check = app.add_subcommand(
      "check", "evaluate the transform condition for a config without training");
  add_common_flags(check, check_args, /*config_required=*/true);

  std::uint64_t verify_seed = 0;
  CLI::App* verify =
      app.add_subcommand("verify", "run the randomized inequality suites");
  verify->add_option("--seed", verify_seed, "base seed for the suites");

  CommonArgs sweep_args;
  std::string sweep_axis;
  std::string sweep_values;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run one experiment per axis value");
  add_common_flags(sweep_cmd, sweep_args, /*config_required=*/true);
  sweep_cmd->add_option("--axis", sweep_axis, "depth | width | batch | seed")
      ->required()
      ->check(CLI::IsMember({"depth", "width", "batch", "seed"}));
  sweep_cmd->add_option("--values", sweep_values, "comma-separated axis values")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_data(gen_args);
    if (train->parsed()) return cmd_train(train_args);
    if (check->parsed()) return cmd_check(check_args);
    if (verify->parsed()) return cmd_verify(verify_seed);
    if (sweep_cmd->parsed()) {
      std::vector<long long> values;
      std::stringstream ss(sweep_values);
      std::string token;
      while (std::getline(ss, token, ',')) values.push_back(std::stoll(token));
      if (values.empty()) throw std::invalid_argument("--values is empty");
      return cmd_sweep(sweep_args, sweep_axis, values);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
