#include "grip/variants.hpp"

#include <limits>

#include "grip/bc.hpp"
#include "grip/csv.hpp"
#include "grip/error.hpp"

namespace grip {

namespace {

TrainResult run_bc(const ExperimentConfig& cfg) {
  std::filesystem::path run_dir(cfg.out_dir);
  std::filesystem::create_directories(run_dir);
  cfg.save(run_dir / "config.snapshot.json");

  DemoDataset demos = load_dataset(cfg.demos_path);
  BcResult fit = bc_train(demos, cfg.action_spec(), cfg.policy_options(), cfg.bc,
                          observation_scale(cfg.env), cfg.seed);

  constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
  CsvWriter metrics(run_dir / "metrics.csv", metrics_header());
  for (std::size_t epoch = 0; epoch < fit.epoch_losses.size(); ++epoch) {
    metrics.field(static_cast<int>(epoch))
        .field(0L)
        .field(kNan)
        .field(kNan)
        .field(fit.epoch_losses[epoch])
        .field(kNan)
        .field(kNan)
        .field(kNan)
        .field(kNan)
        .field(kNan)
        .field(kNan)
        .field(0)
        .field(0);
    metrics.end_row();
  }
  fit.policy.save(run_dir / "policy.ckpt");
  TrainResult result;
  result.run_dir = run_dir;
  result.iterations = static_cast<int>(fit.epoch_losses.size());
  return result;
}

}  // namespace

TrainResult run_variant(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.variant == "bc") return run_bc(cfg);
  return train(cfg);
}

}  // namespace grip
