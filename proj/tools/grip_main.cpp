// Command line front end: demo generation, training, evaluation and the
// analysis experiments, all driven by a JSON config file.

#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grip/config.hpp"
#include "grip/error.hpp"
#include "grip/experiments.hpp"
#include "grip/experts.hpp"
#include "grip/rng.hpp"
#include "grip/variants.hpp"

namespace {

using grip::ExperimentConfig;

struct CommonFlags {
  std::string config_path;
  std::string out;
  std::string variant;
  std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required = true) {
  auto* opt = cmd->add_option("--config", flags.config_path, "experiment config (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--out", flags.out, "output path override");
  cmd->add_option("--variant", flags.variant, "algorithm variant override");
  cmd->add_option("--seed", flags.seed, "seed override");
}

ExperimentConfig load_config(const CommonFlags& flags) {
  ExperimentConfig cfg = ExperimentConfig::load(flags.config_path);
  if (!flags.variant.empty()) cfg.variant = flags.variant;
  if (flags.seed >= 0) cfg.seed = static_cast<std::uint64_t>(flags.seed);
  if (!flags.out.empty()) cfg.out_dir = flags.out;
  cfg.validate();
  return cfg;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"goal-progress reward learning from constrained demonstrations"};
  app.require_subcommand(1);

  CommonFlags gen_flags, train_flags, eval_flags, ooc_flags, sweep_flags, ablate_flags;

  auto* gen = app.add_subcommand("gen-demos", "generate a demonstration dataset");
  add_common(gen, gen_flags);

  auto* train = app.add_subcommand("train", "train one variant");
  add_common(train, train_flags);

  auto* eval = app.add_subcommand("eval", "evaluate a trained run");
  std::string eval_run;
  int eval_episodes = 0;
  eval->add_option("--run", eval_run, "run directory (with policy.ckpt)")->required();
  eval->add_option("--episodes", eval_episodes, "episode count override");
  eval->add_option("--seed", eval_flags.seed, "evaluation seed");

  auto* ooc = app.add_subcommand("analyze-ooc", "tabulate success and OOC ratios");
  std::string ooc_runs;
  ooc->add_option("--runs", ooc_runs, "comma-separated run directories")->required();
  ooc->add_option("--out", ooc_flags.out, "output CSV path")->required();

  auto* sweep = app.add_subcommand("sweep-severity", "train across constraint bounds");
  std::string sweep_bounds = "0.7,0.1,0.05";
  std::string sweep_variants = "grip,proximity";
  add_common(sweep, sweep_flags);
  sweep->add_option("--bounds", sweep_bounds, "comma-separated expert bounds");
  sweep->add_option("--variants", sweep_variants, "comma-separated variants");

  auto* ablate = app.add_subcommand("ablate-masking",
                                    "compare the mask schedule against no masking");
  add_common(ablate, ablate_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      ExperimentConfig cfg = ExperimentConfig::load(gen_flags.config_path);
      if (gen_flags.seed >= 0) cfg.seed = static_cast<std::uint64_t>(gen_flags.seed);
      std::string out = gen_flags.out.empty() ? cfg.demos_path : gen_flags.out;
      grip::DemoDataset dataset = grip::generate_dataset(cfg.dataset_request());
      grip::save_dataset(out, dataset);
      std::cout << "wrote " << dataset.trajectories.size() << " trajectories to "
                << out << "\n";
    } else if (train->parsed()) {
      ExperimentConfig cfg = load_config(train_flags);
      grip::TrainResult result = grip::run_variant(cfg);
      std::cout << "run complete: " << result.run_dir.string() << " ("
                << result.iterations << " iterations)\n";
    } else if (eval->parsed()) {
      std::uint64_t seed = eval_flags.seed >= 0
                               ? static_cast<std::uint64_t>(eval_flags.seed)
                               : 0;
      grip::EvalReport report = grip::evaluate_run(eval_run, eval_episodes, seed);
      std::cout << "episodes " << report.episodes.size() << ", mean length "
                << report.mean_length << ", success rate " << report.success_rate
                << ", ooc ratio " << report.mean_ooc_ratio << "\n";
    } else if (ooc->parsed()) {
      std::vector<std::filesystem::path> dirs;
      for (const std::string& d : split_list(ooc_runs)) dirs.emplace_back(d);
      auto rows = grip::ooc_analysis(dirs);
      grip::write_ooc_csv(ooc_flags.out, rows);
      std::cout << "wrote " << rows.size() << " rows to " << ooc_flags.out << "\n";
    } else if (sweep->parsed()) {
      ExperimentConfig cfg = load_config(sweep_flags);
      std::vector<double> bounds;
      for (const std::string& b : split_list(sweep_bounds)) bounds.push_back(std::stod(b));
      std::filesystem::path out =
          sweep_flags.out.empty() ? std::filesystem::path(cfg.out_dir) / "severity"
                                  : std::filesystem::path(sweep_flags.out);
      auto cells = grip::severity_sweep(cfg, bounds, split_list(sweep_variants), out);
      int failed = 0;
      for (const auto& cell : cells) failed += cell.ok ? 0 : 1;
      std::cout << "sweep complete: " << cells.size() << " cells, " << failed
                << " failed, results in " << (out / "severity.csv").string() << "\n";
    } else if (ablate->parsed()) {
      ExperimentConfig cfg = load_config(ablate_flags);
      std::filesystem::path out =
          ablate_flags.out.empty() ? std::filesystem::path(cfg.out_dir) / "ablation"
                                   : std::filesystem::path(ablate_flags.out);
      grip::AblationOutcome outcome = grip::masking_ablation(cfg, out);
      std::cout << "masked success " << outcome.masked_eval.success_rate
                << ", unmasked success " << outcome.unmasked_eval.success_rate
                << ", outputs in " << out.string() << "\n";
    }
  } catch (const std::exception& e) {
    nlohmann::json record{{"error", true},
                          {"type", typeid(e).name()},
                          {"message", e.what()}};
    std::cerr << record.dump() << "\n";
    return 1;
  }
  return 0;
}
