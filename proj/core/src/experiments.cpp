#include "grip/experiments.hpp"

#include <sstream>

#include "grip/csv.hpp"
#include "grip/error.hpp"
#include "grip/experts.hpp"
#include "grip/variants.hpp"

namespace grip {

EvalReport evaluate_run(const std::filesystem::path& run_dir, int episodes,
                        std::uint64_t seed) {
  ExperimentConfig cfg = ExperimentConfig::load(run_dir / "config.snapshot.json");
  Policy policy = Policy::load(run_dir / "policy.ckpt");
  EvalReport report = evaluate(policy, cfg.env, cfg.expert.constraint,
                               episodes > 0 ? episodes : cfg.eval_episodes, seed);
  write_eval_csv(run_dir / "eval.csv", report);
  return report;
}

std::vector<OocRow> ooc_analysis(const std::vector<std::filesystem::path>& run_dirs) {
  std::vector<OocRow> rows;
  for (const auto& dir : run_dirs) {
    if (!std::filesystem::exists(dir / "config.snapshot.json") ||
        !std::filesystem::exists(dir / "eval.csv")) {
      throw GenerationError("ooc_analysis: " + dir.string() +
                            " is not an evaluated run (need config.snapshot.json "
                            "and eval.csv)");
    }
    ExperimentConfig cfg = ExperimentConfig::load(dir / "config.snapshot.json");
    EvalReport report = read_eval_csv(dir / "eval.csv");
    rows.push_back({cfg.variant, report.success_rate, report.mean_ooc_ratio});
  }
  return rows;
}

void write_ooc_csv(const std::filesystem::path& path, const std::vector<OocRow>& rows) {
  CsvWriter csv(path, {"variant", "success_rate", "ooc_ratio"});
  for (const OocRow& row : rows) {
    csv.field(row.variant).field(row.success_rate).field(row.ooc_ratio);
    csv.end_row();
  }
}

std::vector<SweepCell> severity_sweep(const ExperimentConfig& base,
                                      const std::vector<double>& bounds,
                                      const std::vector<std::string>& variants,
                                      const std::filesystem::path& out_dir) {
  if (bounds.size() < 2) {
    throw ConfigError("severity_sweep: need at least two bounds");
  }
  if (base.env.id != "maze") {
    throw ConfigError("severity_sweep: bounds sweep is defined for the maze");
  }
  std::filesystem::create_directories(out_dir);
  std::vector<SweepCell> cells;
  for (double bound : bounds) {
    std::ostringstream tag;
    tag << "bound_" << bound;
    std::filesystem::path bound_dir = out_dir / tag.str();
    std::filesystem::create_directories(bound_dir);

    ExperimentConfig bound_cfg = base;
    bound_cfg.expert.constraint = ExpertConstraint::bounded(bound);
    bound_cfg.demos_path = (bound_dir / "demos.jsonl").string();
    save_dataset(bound_cfg.demos_path, generate_dataset(bound_cfg.dataset_request()));

    for (const std::string& variant : variants) {
      SweepCell cell;
      cell.bound = bound;
      cell.variant = variant;
      try {
        ExperimentConfig cfg = bound_cfg;
        cfg.variant = variant;
        cfg.out_dir = (bound_dir / variant).string();
        run_variant(cfg);
        EvalReport report = evaluate_run(cfg.out_dir, cfg.eval_episodes,
                                         derive_seed(cfg.seed, "sweep-eval"));
        cell.mean_episode_length = report.mean_length;
        cell.success_rate = report.success_rate;
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  CsvWriter csv(out_dir / "severity.csv",
                {"bound", "variant", "mean_episode_length", "success_rate", "status"});
  for (const SweepCell& cell : cells) {
    csv.field(cell.bound).field(cell.variant);
    if (cell.ok) {
      csv.field(cell.mean_episode_length).field(cell.success_rate).field(
          std::string("ok"));
    } else {
      csv.field(std::string("")).field(std::string("")).field(std::string("failed"));
    }
    csv.end_row();
  }
  return cells;
}

AblationOutcome masking_ablation(const ExperimentConfig& base,
                                 const std::filesystem::path& out_dir) {
  if (base.variant != "grip") {
    throw ConfigError("masking_ablation: base variant must be grip");
  }
  std::filesystem::create_directories(out_dir);
  AblationOutcome outcome;

  ExperimentConfig masked = base;
  masked.out_dir = (out_dir / "masked").string();
  outcome.masked = run_variant(masked);
  outcome.masked_eval = evaluate_run(masked.out_dir, masked.eval_episodes,
                                     derive_seed(masked.seed, "ablation-eval"));

  ExperimentConfig unmasked = base;
  unmasked.out_dir = (out_dir / "unmasked").string();
  unmasked.confidence.mask_override = 0.0;  // always trust interpolated targets
  outcome.unmasked = run_variant(unmasked);
  outcome.unmasked_eval = evaluate_run(unmasked.out_dir, unmasked.eval_episodes,
                                       derive_seed(unmasked.seed, "ablation-eval"));
  return outcome;
}

}  // namespace grip
