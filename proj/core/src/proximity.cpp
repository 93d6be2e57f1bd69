#include "grip/proximity.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include <json.hpp>

#include "grip/checkpoint.hpp"
#include "grip/error.hpp"

namespace grip {

using nlohmann::json;

ProximityEnsemble::ProximityEnsemble(int obs_dim, const Options& options,
                                     std::vector<double> obs_scale,
                                     std::uint64_t seed)
    : decay_(options.decay), obs_scale_(std::move(obs_scale)), seed_(seed) {
  if (options.members < 1) {
    throw ConfigError("ProximityEnsemble: needs at least one member");
  }
  if (options.decay <= 0.0 || options.decay >= 1.0) {
    throw ConfigError("ProximityEnsemble: decay must lie in (0, 1)");
  }
  if (!obs_scale_.empty() && static_cast<int>(obs_scale_.size()) != obs_dim) {
    throw ConfigError("ProximityEnsemble: obs_scale length mismatch");
  }
  spec_.input_dim = obs_dim;
  spec_.hidden_dims = options.hidden;
  spec_.output_dim = 1;
  spec_.activation = options.activation;
  spec_.dropout_rate = options.dropout_rate;
  spec_.output_squash = nn::OutputSquash::kSigmoid;
  spec_.validate();
  for (int k = 0; k < options.members; ++k) {
    Rng rng = derive_rng(seed, "proximity-init", static_cast<std::uint64_t>(k));
    params_.push_back(nn::init_params(spec_, rng));
  }
  opt_.resize(params_.size());
}

namespace {

void scale_into(StateView s, const std::vector<double>& scale,
                std::vector<double>& out) {
  out.assign(s.begin(), s.end());
  if (!scale.empty()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= scale[i];
  }
}

}  // namespace

double ProximityEnsemble::member_forward(int k, StateView s, bool stochastic,
                                         Rng* rng, nn::ForwardTrace* trace) const {
  require(k >= 0 && k < members(), "ProximityEnsemble: member index out of range");
  static thread_local std::vector<double> scaled;
  static thread_local nn::ForwardTrace scratch;
  scale_into(s, obs_scale_, scaled);
  nn::ForwardTrace& t = trace ? *trace : scratch;
  nn::forward_reuse(spec_, params_[k], scaled, stochastic, rng, t);
  return t.output[0];
}

double ProximityEnsemble::mean_predict(StateView s) const {
  static thread_local std::vector<double> scaled;
  static thread_local nn::ForwardTrace scratch;
  scale_into(s, obs_scale_, scaled);
  double sum = 0.0;
  for (const auto& p : params_) {
    nn::forward_reuse(spec_, p, scaled, /*stochastic=*/false, nullptr, scratch);
    sum += scratch.output[0];
  }
  return sum / static_cast<double>(params_.size());
}

void ProximityEnsemble::member_outputs(StateView s, std::span<double> out) const {
  require(out.size() == params_.size(), "member_outputs: bad output size");
  static thread_local std::vector<double> scaled;
  static thread_local nn::ForwardTrace scratch;
  scale_into(s, obs_scale_, scaled);
  for (std::size_t k = 0; k < params_.size(); ++k) {
    nn::forward_reuse(spec_, params_[k], scaled, false, nullptr, scratch);
    out[k] = scratch.output[0];
  }
}

void ProximityEnsemble::accumulate_member_grad(int k, const nn::ForwardTrace& trace,
                                               double upstream,
                                               std::span<double> grad) const {
  const double up[1] = {upstream};
  nn::backward(spec_, params_[k], trace, up, grad);
}

void ProximityEnsemble::apply_grads(
    const std::vector<std::vector<double>>& member_grads, double learning_rate) {
  require(member_grads.size() == params_.size(),
          "apply_grads: one gradient buffer per member expected");
  for (std::size_t k = 0; k < params_.size(); ++k) {
    nn::adam_step(params_[k], member_grads[k], opt_[k], learning_rate);
  }
}

void ProximityEnsemble::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  json manifest{
      {"format", "grip-ensemble"},
      {"version", 1},
      {"members", members()},
      {"decay", decay_},
      {"seed", seed_},
      {"obs_scale", obs_scale_},
  };
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out) throw ParseError("ensemble save: cannot open manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
  for (int k = 0; k < members(); ++k) {
    nn::save_checkpoint(dir / ("member_" + std::to_string(k) + ".ckpt"),
                        {spec_, params_[k], seed_});
  }
}

ProximityEnsemble ProximityEnsemble::load(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw ParseError("ensemble load: cannot open manifest in " + dir.string());
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw ParseError("ensemble load: bad manifest: " + std::string(e.what()));
  }
  if (manifest.value("format", "") != "grip-ensemble") {
    throw ParseError("ensemble load: not an ensemble directory: " + dir.string());
  }
  ProximityEnsemble ens;
  ens.decay_ = manifest.at("decay").get<double>();
  ens.seed_ = manifest.at("seed").get<std::uint64_t>();
  ens.obs_scale_ = manifest.at("obs_scale").get<std::vector<double>>();
  int members = manifest.at("members").get<int>();
  for (int k = 0; k < members; ++k) {
    nn::Checkpoint ckpt =
        nn::load_checkpoint(dir / ("member_" + std::to_string(k) + ".ckpt"));
    if (k == 0) {
      ens.spec_ = ckpt.spec;
    } else if (!(ckpt.spec == ens.spec_)) {
      throw ParseError("ensemble load: members disagree on architecture");
    }
    ens.params_.push_back(std::move(ckpt.params));
  }
  if (ens.params_.empty()) throw ParseError("ensemble load: zero members");
  ens.opt_.resize(ens.params_.size());
  return ens;
}

std::vector<std::vector<double>> make_ensemble_grads(const ProximityEnsemble& ens) {
  return std::vector<std::vector<double>>(
      static_cast<std::size_t>(ens.members()),
      std::vector<double>(ens.member_param_count(), 0.0));
}

std::vector<double> expert_targets(const Trajectory& traj, double decay) {
  if (decay <= 0.0 || decay >= 1.0) {
    throw ConfigError("expert_targets: decay must lie in (0, 1)");
  }
  require(traj.success, "expert_targets: trajectory must be successful");
  int horizon = traj.length();
  std::vector<double> targets(traj.states.size());
  for (int t = 0; t <= horizon; ++t) {
    targets[static_cast<std::size_t>(t)] =
        std::pow(decay, static_cast<double>(horizon - t));
  }
  return targets;
}

namespace {

// Shared core of the squared-error losses: target 0 means zero_loss.
double squared_loss(const ProximityEnsemble& ens, std::span<const StateView> states,
                    const double* targets, std::vector<Rng>* dropout_rngs,
                    std::vector<std::vector<double>>* member_grads) {
  require(!states.empty(), "proximity loss: empty batch");
  int m = ens.members();
  double denom = static_cast<double>(m) * static_cast<double>(states.size());
  double loss = 0.0;
  nn::ForwardTrace trace;
  for (int k = 0; k < m; ++k) {
    Rng* rng = dropout_rngs ? &(*dropout_rngs)[static_cast<std::size_t>(k)] : nullptr;
    for (std::size_t i = 0; i < states.size(); ++i) {
      double pred = ens.member_forward(k, states[i], dropout_rngs != nullptr, rng,
                                       member_grads ? &trace : nullptr);
      double err = pred - (targets ? targets[i] : 0.0);
      loss += err * err / denom;
      if (member_grads) {
        ens.accumulate_member_grad(k, trace, 2.0 * err / denom,
                                   (*member_grads)[static_cast<std::size_t>(k)]);
      }
    }
  }
  return loss;
}

}  // namespace

double expert_loss(const ProximityEnsemble& ens, std::span<const StateView> states,
                   std::span<const double> targets, std::vector<Rng>* dropout_rngs,
                   std::vector<std::vector<double>>* member_grads) {
  require(states.size() == targets.size(), "expert_loss: states/targets mismatch");
  return squared_loss(ens, states, targets.data(), dropout_rngs, member_grads);
}

double zero_loss(const ProximityEnsemble& ens, std::span<const StateView> states,
                 std::vector<Rng>* dropout_rngs,
                 std::vector<std::vector<double>>* member_grads) {
  return squared_loss(ens, states, nullptr, dropout_rngs, member_grads);
}

void pretrain(ProximityEnsemble& ens, const DemoDataset& demos,
              const PretrainOptions& options, std::uint64_t seed) {
  if (demos.trajectories.empty()) throw ConfigError("pretrain: empty dataset");
  std::vector<StateView> states;
  std::vector<double> targets;
  for (const Trajectory& traj : demos.trajectories) {
    std::vector<double> t = expert_targets(traj, ens.decay());
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      states.push_back(traj.states[i]);
      targets.push_back(t[i]);
    }
  }

  int batch = std::max(1, options.batch_size);
  std::size_t param_count = ens.member_param_count();
  // Members train independently; each gets its own shuffle and dropout
  // stream so ensemble diversity does not depend on evaluation order.
  for (int k = 0; k < ens.members(); ++k) {
    Rng shuffle_rng = derive_rng(seed, "pretrain-shuffle", static_cast<std::uint64_t>(k));
    Rng dropout_rng = derive_rng(seed, "pretrain-dropout", static_cast<std::uint64_t>(k));
    std::vector<std::size_t> order(states.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> grad(param_count, 0.0);
    nn::AdamState opt;
    nn::ForwardTrace trace;
    bool drop = options.dropout && ens.member_spec().dropout_rate > 0.0;
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
      shuffle(order, shuffle_rng);
      for (std::size_t begin = 0; begin < order.size(); begin += batch) {
        std::size_t end = std::min(order.size(), begin + batch);
        double denom = static_cast<double>(end - begin);
        std::fill(grad.begin(), grad.end(), 0.0);
        double loss = 0.0;
        for (std::size_t idx = begin; idx < end; ++idx) {
          std::size_t i = order[idx];
          double pred = ens.member_forward(k, states[i], drop,
                                           drop ? &dropout_rng : nullptr, &trace);
          double err = pred - targets[i];
          loss += err * err / denom;
          ens.accumulate_member_grad(k, trace, 2.0 * err / denom, grad);
        }
        if (!std::isfinite(loss)) {
          throw TrainingError("pretrain: non-finite loss for member " +
                              std::to_string(k));
        }
        nn::adam_step(ens.mutable_member_params(k), grad, opt, options.learning_rate);
      }
    }
  }
}

double proximity_reward(const ProximityEnsemble& ens, StateView s, StateView s_next) {
  return ens.mean_predict(s_next) - ens.mean_predict(s);
}

}  // namespace grip
