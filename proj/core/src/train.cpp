#include "grip/train.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "grip/csv.hpp"
#include "grip/error.hpp"
#include "grip/grip_loss.hpp"
#include "grip/rollout.hpp"

namespace grip {

VariantFlags variant_flags(const std::string& variant) {
  if (variant == "grip") return {true, true};
  if (variant == "proximity_drop") return {false, true};
  if (variant == "proximity") return {false, false};
  throw ConfigError("variant_flags: no training flags for variant '" + variant + "'");
}

const std::vector<std::string>& metrics_header() {
  static const std::vector<std::string> header{
      "iteration",
      "env_steps",
      "mean_episode_length",
      "success_rate",
      "proximity_loss_e",
      "proximity_loss_conf",
      "proximity_loss_unconf",
      "confident_fraction",
      "masked_fraction",
      "p_itr",
      "threshold",
      "anchor_count",
      "intermediate_count",
  };
  return header;
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct ExpertPool {
  std::vector<std::vector<double>> states;
  std::vector<double> targets;
};

ExpertPool build_expert_pool(const DemoDataset& demos, double decay) {
  ExpertPool pool;
  for (const Trajectory& traj : demos.trajectories) {
    std::vector<double> targets = expert_targets(traj, decay);
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      pool.states.push_back(traj.states[i]);
      pool.targets.push_back(targets[i]);
    }
  }
  return pool;
}

// Per-iteration proximity training state assembled from the annotations.
struct AnnotatedPools {
  std::vector<ConfidentTerm> confident;   // anchors and intermediates
  std::vector<StateView> unconfident;
  int anchors = 0;
  int intermediates = 0;
  std::size_t total = 0;
};

AnnotatedPools annotate_buffer(const RolloutBuffer& buffer,
                               const ProximityEnsemble& ens, double threshold,
                               const ConfidenceConfig& cc, double rho_max,
                               Rng* mcd_rng) {
  AnnotatedPools pools;
  for (const RolloutEpisode& episode : buffer.episodes) {
    std::vector<StateAnnotation> notes =
        annotate_rollout(episode.states, ens, threshold, cc, rho_max, mcd_rng);
    for (std::size_t i = 0; i < notes.size(); ++i) {
      const StateAnnotation& note = notes[i];
      pools.total += 1;
      switch (note.role) {
        case StateRole::kAnchor:
          pools.anchors += 1;
          pools.confident.push_back({episode.states[i], note.target, false});
          break;
        case StateRole::kIntermediate:
          pools.intermediates += 1;
          pools.confident.push_back({episode.states[i], note.target, true});
          break;
        case StateRole::kUnconfident:
          pools.unconfident.push_back(episode.states[i]);
          break;
      }
    }
  }
  return pools;
}

template <typename T>
void sample_batch(const std::vector<T>& pool, int batch, Rng& rng,
                  std::vector<T>& out) {
  out.clear();
  if (pool.empty()) return;
  int n = std::min<int>(batch, static_cast<int>(pool.size()));
  for (int i = 0; i < n; ++i) {
    out.push_back(pool[static_cast<std::size_t>(
        uniform_int(rng, static_cast<int>(pool.size())))]);
  }
}

struct ProximityIterStats {
  double loss_e = 0.0, loss_conf = 0.0, loss_unconf = 0.0;
  int mask_draws = 0, masked = 0;
};

}  // namespace

TrainResult train(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.variant == "bc") {
    throw ConfigError("train: variant bc is supervised; use run_variant");
  }
  VariantFlags flags = variant_flags(cfg.variant);
  if (cfg.confidence.enabled >= 0) flags.confidence = cfg.confidence.enabled != 0;
  if (cfg.proximity.train_dropout >= 0) {
    flags.train_dropout = cfg.proximity.train_dropout != 0;
  }
  ConfidenceConfig cc = cfg.confidence_config(flags.confidence);
  cc.validate(cfg.proximity.members);

  std::filesystem::path run_dir(cfg.out_dir);
  std::filesystem::create_directories(run_dir);
  cfg.save(run_dir / "config.snapshot.json");

  DemoDataset demos = load_dataset(cfg.demos_path);
  if (demos.trajectories.empty()) {
    throw ConfigError("train: demo dataset is empty: " + cfg.demos_path);
  }

  auto probe = make_env(cfg.env, 0);
  int obs_dim = probe->obs_dim();
  int env_max_steps = probe->max_steps();
  double rho_max = 2.0 * env_max_steps;
  for (const Trajectory& traj : demos.trajectories) {
    if (static_cast<int>(traj.states.front().size()) != obs_dim) {
      throw ConfigError("train: demo observation dim does not match the env");
    }
  }

  ProximityEnsemble ens(obs_dim, cfg.proximity_options(),
                        observation_scale(cfg.env), derive_seed(cfg.seed, "ensemble"));
  {
    PretrainOptions opt;
    opt.epochs = cfg.proximity.pretrain_epochs;
    opt.batch_size = cfg.proximity.batch_size;
    opt.learning_rate = cfg.proximity.learning_rate;
    opt.dropout = flags.train_dropout;
    pretrain(ens, demos, opt, derive_seed(cfg.seed, "pretrain"));
  }

  ExpertPool expert_pool = build_expert_pool(demos, ens.decay());
  std::vector<StateView> expert_views(expert_pool.states.begin(),
                                      expert_pool.states.end());

  Policy policy(obs_dim, cfg.action_spec(), cfg.policy_options(),
                observation_scale(cfg.env), derive_seed(cfg.seed, "policy"));
  std::vector<RolloutWorker> workers =
      make_workers(cfg.env, cfg.ppo.num_envs, derive_seed(cfg.seed, "envs"));

  CsvWriter metrics(run_dir / "metrics.csv", metrics_header());

  TrainResult result;
  result.run_dir = run_dir;
  long env_steps = 0;
  auto member_grads = make_ensemble_grads(ens);
  std::vector<StateView> expert_batch;
  std::vector<ConfidentTerm> conf_batch;
  std::vector<StateView> unconf_batch;
  std::vector<double> expert_target_batch;
  std::vector<double> advantages, returns;

  for (int iter = 0; iter < cfg.ppo.iterations; ++iter) {
    auto stage = [&](const std::string& name, auto&& body) {
      try {
        body();
      } catch (const std::exception& e) {
        throw TrainingError("iteration " + std::to_string(iter) + ", stage " +
                            name + ": " + e.what());
      }
    };

    RolloutBuffer buffer;
    stage("collect", [&] {
      buffer = collect_rollouts(policy, ens, workers, cfg.ppo.rollout_size,
                                cfg.seed, iter);
      env_steps += static_cast<long>(buffer.transitions);
    });

    double threshold = kNan;
    AnnotatedPools pools;
    Rng mcd_rng = derive_rng(cfg.seed, "mcd", static_cast<std::uint64_t>(iter));
    stage("confidence", [&] {
      if (cc.enabled) {
        threshold = expert_threshold(ens, expert_views, cc, &mcd_rng);
        pools = annotate_buffer(buffer, ens, threshold, cc, rho_max, &mcd_rng);
      } else {
        for (const RolloutEpisode& episode : buffer.episodes) {
          for (const auto& state : episode.states) {
            pools.unconfident.push_back(state);
            pools.total += 1;
          }
        }
      }
    });

    double p_mask = cc.mask_override >= 0.0
                        ? cc.mask_override
                        : mask_probability(iter, cc.anneal_horizon);
    ProximityIterStats prox;
    stage("proximity", [&] {
      Rng train_rng = derive_rng(cfg.seed, "prox-train", static_cast<std::uint64_t>(iter));
      Rng mask_rng = derive_rng(cfg.seed, "mask", static_cast<std::uint64_t>(iter));
      std::vector<Rng> dropout_rngs;
      for (int k = 0; k < ens.members(); ++k) {
        dropout_rngs.push_back(derive_rng(cfg.seed, "prox-drop",
                                          static_cast<std::uint64_t>(iter),
                                          static_cast<std::uint64_t>(k)));
      }
      std::vector<Rng>* drops = flags.train_dropout ? &dropout_rngs : nullptr;
      int batch = std::max(1, cfg.proximity.batch_size);
      int steps = std::max(
          1, static_cast<int>(std::lround(cfg.proximity.epochs_per_iter *
                                          static_cast<double>(pools.total) / batch)));
      for (int step = 0; step < steps; ++step) {
        // sample indices jointly so states and targets stay aligned
        expert_batch.clear();
        expert_target_batch.clear();
        for (int i = 0; i < std::min<int>(batch, static_cast<int>(expert_pool.states.size())); ++i) {
          int idx = uniform_int(train_rng, static_cast<int>(expert_pool.states.size()));
          expert_batch.push_back(expert_pool.states[static_cast<std::size_t>(idx)]);
          expert_target_batch.push_back(expert_pool.targets[static_cast<std::size_t>(idx)]);
        }
        sample_batch(pools.confident, batch, train_rng, conf_batch);
        sample_batch(pools.unconfident, batch, train_rng, unconf_batch);
        for (auto& g : member_grads) std::fill(g.begin(), g.end(), 0.0);
        GripLossStats stats =
            grip_loss(ens, expert_batch, expert_target_batch, conf_batch,
                      unconf_batch, p_mask, mask_rng, drops, &member_grads);
        ens.apply_grads(member_grads, cfg.proximity.learning_rate);
        prox.loss_e += stats.loss_expert / steps;
        prox.loss_conf += stats.loss_confident / steps;
        prox.loss_unconf += stats.loss_unconfident / steps;
        prox.mask_draws += stats.mask_draws;
        prox.masked += stats.masked;
      }
    });

    stage("relabel", [&] { relabel_rewards(buffer, ens); });

    stage("policy", [&] {
      compute_advantages(buffer, cfg.ppo.gamma, cfg.ppo.gae_lambda, advantages,
                         returns);
      ppo_update(policy, buffer, advantages, returns, cfg.ppo, cfg.seed, iter);
    });

    // Episode statistics over episodes that finished this iteration.
    int ended = 0, succeeded = 0;
    long length_sum = 0;
    for (const RolloutEpisode& episode : buffer.episodes) {
      if (!episode.ended) continue;
      ended += 1;
      succeeded += episode.success ? 1 : 0;
      length_sum += episode.episode_length;
    }
    double mean_length = ended ? static_cast<double>(length_sum) / ended : kNan;
    double success_rate = ended ? static_cast<double>(succeeded) / ended : kNan;
    result.final_mean_episode_length = mean_length;
    result.final_success_rate = success_rate;

    metrics.field(iter)
        .field(env_steps)
        .field(mean_length)
        .field(success_rate)
        .field(prox.loss_e)
        .field(prox.loss_conf)
        .field(prox.loss_unconf)
        .field(pools.total ? static_cast<double>(pools.anchors) / pools.total : 0.0)
        .field(prox.mask_draws ? static_cast<double>(prox.masked) / prox.mask_draws
                               : kNan)
        .field(p_mask)
        .field(threshold)
        .field(pools.anchors)
        .field(pools.intermediates);
    metrics.end_row();

    if (cfg.checkpoint_interval > 0 && (iter + 1) % cfg.checkpoint_interval == 0 &&
        iter + 1 < cfg.ppo.iterations) {
      std::filesystem::path dir = run_dir / ("checkpoint_" + std::to_string(iter + 1));
      std::filesystem::create_directories(dir);
      policy.save(dir / "policy.ckpt");
      ens.save(dir / "ensemble");
    }
    result.iterations = iter + 1;
  }

  policy.save(run_dir / "policy.ckpt");
  ens.save(run_dir / "ensemble");
  return result;
}

}  // namespace grip
