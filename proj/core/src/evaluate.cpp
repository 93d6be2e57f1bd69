#include "grip/evaluate.hpp"

#include <string>

#include "grip/csv.hpp"
#include "grip/error.hpp"

namespace grip {

EvalReport evaluate(const DeterministicPolicy& policy, const EnvConfig& env_cfg,
                    const ExpertConstraint& expert_constraint, int episodes,
                    std::uint64_t seed) {
  require(episodes >= 1, "evaluate: episodes must be >= 1");
  auto env = make_env(env_cfg, derive_seed(seed, "eval-env"));
  EvalReport report;
  report.episodes.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    std::vector<double> obs = env->reset();
    int ooc = 0;
    bool done = false;
    bool success = false;
    while (!done) {
      std::vector<double> action = policy(obs);
      if (!env->expert_action(action, expert_constraint)) ooc += 1;
      EnvStep out = env->step(action);
      obs = std::move(out.observation);
      done = out.done;
      success = out.success;
    }
    EpisodeRecord rec;
    rec.length = env->steps();
    rec.success = success;
    rec.ooc_ratio = static_cast<double>(ooc) / rec.length;
    report.episodes.push_back(rec);
  }
  for (const EpisodeRecord& rec : report.episodes) {
    report.mean_length += rec.length;
    report.success_rate += rec.success ? 1.0 : 0.0;
    report.mean_ooc_ratio += rec.ooc_ratio;
  }
  double n = static_cast<double>(report.episodes.size());
  report.mean_length /= n;
  report.success_rate /= n;
  report.mean_ooc_ratio /= n;
  return report;
}

EvalReport evaluate(const Policy& policy, const EnvConfig& env_cfg,
                    const ExpertConstraint& expert_constraint, int episodes,
                    std::uint64_t seed) {
  return evaluate(
      [&policy](std::span<const double> obs) {
        return policy.act_deterministic(obs);
      },
      env_cfg, expert_constraint, episodes, seed);
}

void write_eval_csv(const std::filesystem::path& path, const EvalReport& report) {
  CsvWriter csv(path, {"episode", "length", "success", "ooc_ratio"});
  for (std::size_t e = 0; e < report.episodes.size(); ++e) {
    const EpisodeRecord& rec = report.episodes[e];
    csv.field(static_cast<int>(e))
        .field(rec.length)
        .field(rec.success ? 1 : 0)
        .field(rec.ooc_ratio);
    csv.end_row();
  }
}

EvalReport read_eval_csv(const std::filesystem::path& path) {
  CsvTable table = read_csv(path);
  int c_len = table.column("length");
  int c_success = table.column("success");
  int c_ooc = table.column("ooc_ratio");
  if (c_len < 0 || c_success < 0 || c_ooc < 0) {
    throw ParseError("eval csv: missing columns in " + path.string());
  }
  EvalReport report;
  for (const auto& row : table.rows) {
    EpisodeRecord rec;
    rec.length = std::stoi(row[static_cast<std::size_t>(c_len)]);
    rec.success = row[static_cast<std::size_t>(c_success)] == "1";
    rec.ooc_ratio = std::stod(row[static_cast<std::size_t>(c_ooc)]);
    report.episodes.push_back(rec);
    report.mean_length += rec.length;
    report.success_rate += rec.success ? 1.0 : 0.0;
    report.mean_ooc_ratio += rec.ooc_ratio;
  }
  if (report.episodes.empty()) throw ParseError("eval csv: no episodes in " + path.string());
  double n = static_cast<double>(report.episodes.size());
  report.mean_length /= n;
  report.success_rate /= n;
  report.mean_ooc_ratio /= n;
  return report;
}

}  // namespace grip
