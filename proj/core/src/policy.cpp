#include "grip/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "grip/checkpoint.hpp"
#include "grip/error.hpp"

namespace grip {

using nlohmann::json;

namespace {

constexpr double kLogStdMin = -5.0;
constexpr double kLogStdMax = 2.0;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// log(1 - tanh(x)^2), stable for large |x|.
double log_one_minus_tanh_sq(double x) {
  return 2.0 * (std::log(2.0) - x - softplus(-2.0 * x));
}

void scale_obs(std::span<const double> obs, const std::vector<double>& scale,
               std::vector<double>& out) {
  out.assign(obs.begin(), obs.end());
  if (!scale.empty()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= scale[i];
  }
}

}  // namespace

Policy::Policy(int obs_dim, ActionSpec action_spec, const Options& options,
               std::vector<double> obs_scale, std::uint64_t seed)
    : action_spec_(action_spec), obs_scale_(std::move(obs_scale)) {
  if (action_spec_.dim <= 0) throw ConfigError("Policy: action dim must be positive");
  if (!obs_scale_.empty() && static_cast<int>(obs_scale_.size()) != obs_dim) {
    throw ConfigError("Policy: obs_scale length mismatch");
  }
  actor_spec_ = {obs_dim, options.hidden, action_spec_.dim, options.activation,
                 0.0, nn::OutputSquash::kNone};
  critic_spec_ = {obs_dim, options.hidden, 1, options.activation, 0.0,
                  nn::OutputSquash::kNone};
  actor_spec_.validate();
  critic_spec_.validate();
  {
    Rng rng = derive_rng(seed, "actor-init");
    actor_params_ = nn::init_params(actor_spec_, rng);
  }
  {
    Rng rng = derive_rng(seed, "critic-init");
    critic_params_ = nn::init_params(critic_spec_, rng);
  }
  if (!action_spec_.discrete) {
    log_std_.assign(static_cast<std::size_t>(action_spec_.dim),
                    std::clamp(options.log_std_init, kLogStdMin, kLogStdMax));
  }
}

std::vector<double> Policy::actor_forward(std::span<const double> obs,
                                          nn::ForwardTrace* trace) const {
  static thread_local std::vector<double> scaled;
  scale_obs(obs, obs_scale_, scaled);
  return nn::forward(actor_spec_, actor_params_, scaled, false, nullptr, trace);
}

void Policy::actor_backward(const nn::ForwardTrace& trace,
                            std::span<const double> upstream,
                            std::span<double> grad) const {
  nn::backward(actor_spec_, actor_params_, trace, upstream, grad);
}

double Policy::critic_forward(std::span<const double> obs,
                              nn::ForwardTrace* trace) const {
  static thread_local std::vector<double> scaled;
  static thread_local nn::ForwardTrace scratch;
  scale_obs(obs, obs_scale_, scaled);
  nn::ForwardTrace& t = trace ? *trace : scratch;
  nn::forward_reuse(critic_spec_, critic_params_, scaled, false, nullptr, t);
  return t.output[0];
}

void Policy::critic_backward(const nn::ForwardTrace& trace, double upstream,
                             std::span<double> grad) const {
  const double up[1] = {upstream};
  nn::backward(critic_spec_, critic_params_, trace, up, grad);
}

double Policy::value(std::span<const double> obs) const {
  return critic_forward(obs);
}

PolicySample Policy::sample(std::span<const double> obs, Rng& rng) const {
  std::vector<double> out = actor_forward(obs);
  PolicySample sample;
  if (action_spec_.discrete) {
    // Log-softmax, then inverse-CDF draw.
    double mx = *std::max_element(out.begin(), out.end());
    double sum = 0.0;
    for (double v : out) sum += std::exp(v - mx);
    double lse = mx + std::log(sum);
    double u = uniform01(rng);
    int action = action_spec_.dim - 1;
    double acc = 0.0;
    for (int i = 0; i < action_spec_.dim; ++i) {
      acc += std::exp(out[static_cast<std::size_t>(i)] - lse);
      if (u < acc) {
        action = i;
        break;
      }
    }
    sample.env_action = {static_cast<double>(action)};
    sample.log_prob = out[static_cast<std::size_t>(action)] - lse;
  } else {
    sample.raw_action.resize(static_cast<std::size_t>(action_spec_.dim));
    sample.env_action.resize(static_cast<std::size_t>(action_spec_.dim));
    sample.log_prob = 0.0;
    for (int i = 0; i < action_spec_.dim; ++i) {
      double sigma = std::exp(log_std_[static_cast<std::size_t>(i)]);
      double z = gaussian(rng);
      double raw = out[static_cast<std::size_t>(i)] + sigma * z;
      sample.raw_action[static_cast<std::size_t>(i)] = raw;
      sample.env_action[static_cast<std::size_t>(i)] = std::tanh(raw);
      sample.log_prob += -0.5 * z * z - log_std_[static_cast<std::size_t>(i)] -
                         0.5 * kLog2Pi - log_one_minus_tanh_sq(raw);
    }
  }
  return sample;
}

std::vector<double> Policy::act_deterministic(std::span<const double> obs) const {
  std::vector<double> out = actor_forward(obs);
  if (action_spec_.discrete) {
    int best = static_cast<int>(std::max_element(out.begin(), out.end()) - out.begin());
    return {static_cast<double>(best)};
  }
  for (double& v : out) v = std::tanh(v);
  return out;
}

DistEval Policy::evaluate_action(std::span<const double> actor_out,
                                 std::span<const double> action) const {
  DistEval eval;
  int dim = action_spec_.dim;
  eval.dlogp_dout.assign(static_cast<std::size_t>(dim), 0.0);
  eval.dentropy_dout.assign(static_cast<std::size_t>(dim), 0.0);
  if (action_spec_.discrete) {
    require(action.size() == 1, "evaluate_action: discrete action is one index");
    int a = static_cast<int>(action[0]);
    require(a >= 0 && a < dim, "evaluate_action: action index out of range");
    double mx = *std::max_element(actor_out.begin(), actor_out.end());
    double sum = 0.0;
    for (double v : actor_out) sum += std::exp(v - mx);
    double lse = mx + std::log(sum);
    double entropy = 0.0;
    std::vector<double> probs(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      double logp_i = actor_out[static_cast<std::size_t>(i)] - lse;
      probs[static_cast<std::size_t>(i)] = std::exp(logp_i);
      entropy -= probs[static_cast<std::size_t>(i)] * logp_i;
    }
    eval.log_prob = actor_out[static_cast<std::size_t>(a)] - lse;
    eval.entropy = entropy;
    for (int i = 0; i < dim; ++i) {
      double p = probs[static_cast<std::size_t>(i)];
      double logp_i = actor_out[static_cast<std::size_t>(i)] - lse;
      eval.dlogp_dout[static_cast<std::size_t>(i)] = (i == a ? 1.0 : 0.0) - p;
      eval.dentropy_dout[static_cast<std::size_t>(i)] = -p * (logp_i + entropy);
    }
  } else {
    require(static_cast<int>(action.size()) == dim,
            "evaluate_action: raw action has wrong dimension");
    eval.dlogp_dlogstd.assign(static_cast<std::size_t>(dim), 0.0);
    eval.dentropy_dlogstd.assign(static_cast<std::size_t>(dim), 1.0);
    eval.log_prob = 0.0;
    eval.entropy = 0.0;
    for (int i = 0; i < dim; ++i) {
      double lam = log_std_[static_cast<std::size_t>(i)];
      double sigma = std::exp(lam);
      double z = (action[i] - actor_out[static_cast<std::size_t>(i)]) / sigma;
      eval.log_prob += -0.5 * z * z - lam - 0.5 * kLog2Pi -
                       log_one_minus_tanh_sq(action[i]);
      eval.entropy += lam + 0.5 * (kLog2Pi + 1.0);
      eval.dlogp_dout[static_cast<std::size_t>(i)] = z / sigma;
      eval.dlogp_dlogstd[static_cast<std::size_t>(i)] = z * z - 1.0;
    }
  }
  return eval;
}

Policy::Grads Policy::make_grads() const {
  return {std::vector<double>(actor_params_.size(), 0.0),
          std::vector<double>(critic_params_.size(), 0.0),
          std::vector<double>(log_std_.size(), 0.0)};
}

void Policy::apply_grads(const Grads& grads, double learning_rate) {
  nn::adam_step(actor_params_, grads.actor, actor_opt_, learning_rate);
  nn::adam_step(critic_params_, grads.critic, critic_opt_, learning_rate);
  if (!log_std_.empty()) {
    nn::adam_step(log_std_, grads.log_std, log_std_opt_, learning_rate);
    for (double& v : log_std_) v = std::clamp(v, kLogStdMin, kLogStdMax);
  }
}

namespace {

json spec_to_json(const nn::MlpSpec& spec) {
  return json{
      {"input_dim", spec.input_dim},
      {"hidden_dims", spec.hidden_dims},
      {"output_dim", spec.output_dim},
      {"activation", spec.activation == nn::Activation::kRelu ? "relu" : "tanh"},
      {"dropout_rate", spec.dropout_rate},
      {"output_squash", "none"},
  };
}

nn::MlpSpec spec_from_json(const json& j) {
  nn::MlpSpec spec;
  spec.input_dim = j.at("input_dim").get<int>();
  spec.hidden_dims = j.at("hidden_dims").get<std::vector<int>>();
  spec.output_dim = j.at("output_dim").get<int>();
  spec.activation = j.at("activation").get<std::string>() == "relu"
                        ? nn::Activation::kRelu
                        : nn::Activation::kTanh;
  spec.dropout_rate = j.at("dropout_rate").get<double>();
  spec.validate();
  return spec;
}

}  // namespace

void Policy::save(const std::filesystem::path& path) const {
  json header{
      {"format", "grip-policy"},
      {"version", 1},
      {"discrete", action_spec_.discrete},
      {"action_dim", action_spec_.dim},
      {"obs_scale", obs_scale_},
      {"actor_spec", spec_to_json(actor_spec_)},
      {"critic_spec", spec_to_json(critic_spec_)},
      {"counts", {{"actor", actor_params_.size()},
                  {"critic", critic_params_.size()},
                  {"log_std", log_std_.size()}}},
  };
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("Policy::save: cannot open " + path.string());
  out << header.dump() << '\n';
  auto write_block = [&](const std::vector<double>& block) {
    out.write(reinterpret_cast<const char*>(block.data()),
              static_cast<std::streamsize>(block.size() * sizeof(double)));
  };
  write_block(actor_params_);
  write_block(critic_params_);
  write_block(log_std_);
  if (!out) throw ParseError("Policy::save: write failed for " + path.string());
}

Policy Policy::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("Policy::load: cannot open " + path.string());
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw ParseError("Policy::load: missing header in " + path.string());
  }
  json header;
  try {
    header = json::parse(header_line);
  } catch (const json::exception& e) {
    throw ParseError("Policy::load: bad header: " + std::string(e.what()));
  }
  if (header.value("format", "") != "grip-policy") {
    throw ParseError("Policy::load: not a policy checkpoint: " + path.string());
  }
  Policy policy;
  policy.action_spec_ = {header.at("discrete").get<bool>(),
                         header.at("action_dim").get<int>()};
  policy.obs_scale_ = header.at("obs_scale").get<std::vector<double>>();
  policy.actor_spec_ = spec_from_json(header.at("actor_spec"));
  policy.critic_spec_ = spec_from_json(header.at("critic_spec"));
  auto read_block = [&](std::size_t count) {
    std::vector<double> block(count);
    in.read(reinterpret_cast<char*>(block.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double))) {
      throw ParseError("Policy::load: truncated payload in " + path.string());
    }
    return block;
  };
  policy.actor_params_ = read_block(header.at("counts").at("actor").get<std::size_t>());
  policy.critic_params_ = read_block(header.at("counts").at("critic").get<std::size_t>());
  policy.log_std_ = read_block(header.at("counts").at("log_std").get<std::size_t>());
  return policy;
}

}  // namespace grip
