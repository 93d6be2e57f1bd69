#include "grip/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "grip/error.hpp"

namespace grip {

using nlohmann::json;

namespace {

nn::Activation parse_activation(const std::string& name, const std::string& where) {
  if (name == "relu") return nn::Activation::kRelu;
  if (name == "tanh") return nn::Activation::kTanh;
  throw ConfigError(where + ": unknown activation '" + name + "'");
}

[[noreturn]] void unknown_key(const std::string& section, const std::string& key) {
  throw ConfigError("config: unknown key " +
                    (section.empty() ? key : section + "." + key));
}

void parse_maze_params(const json& j, PointMaze::Params& p) {
  for (const auto& [key, value] : j.items()) {
    if (key == "dt") p.dt = value.get<double>();
    else if (key == "v_max") p.v_max = value.get<double>();
    else if (key == "goal_radius") p.goal_radius = value.get<double>();
    else if (key == "max_steps") p.max_steps = value.get<int>();
    else unknown_key("env.maze", key);
  }
}

void parse_env(const json& j, ExperimentConfig& cfg) {
  for (const auto& [key, value] : j.items()) {
    if (key == "id") cfg.env.id = value.get<std::string>();
    else if (key == "grid_size") cfg.env.grid_size = value.get<int>();
    else if (key == "layout") cfg.env.layout_text = value.get<std::string>();
    else if (key == "maze") parse_maze_params(value, cfg.env.maze);
    else unknown_key("env", key);
  }
}

ExpertConstraint parse_constraint(const json& value) {
  if (value.is_string()) {
    if (value.get<std::string>() == "cardinal") return ExpertConstraint::cardinal();
    throw ConfigError("config: expert.constraint must be \"cardinal\" or a bound");
  }
  return ExpertConstraint::bounded(value.get<double>());
}

void parse_expert(const json& j, ExpertSection& e) {
  for (const auto& [key, value] : j.items()) {
    if (key == "constraint") e.constraint = parse_constraint(value);
    else if (key == "count") e.count = value.get<int>();
    else if (key == "k_p") e.controller.k_p = value.get<double>();
    else if (key == "k_d") e.controller.k_d = value.get<double>();
    else if (key == "waypoint_radius") e.controller.waypoint_radius = value.get<double>();
    else if (key == "retry_budget") e.controller.retry_budget = value.get<int>();
    else unknown_key("expert", key);
  }
}

void parse_proximity(const json& j, ProximitySection& p) {
  for (const auto& [key, value] : j.items()) {
    if (key == "members") p.members = value.get<int>();
    else if (key == "decay") p.decay = value.get<double>();
    else if (key == "hidden") p.hidden = value.get<std::vector<int>>();
    else if (key == "dropout_rate") p.dropout_rate = value.get<double>();
    else if (key == "activation") p.activation = value.get<std::string>();
    else if (key == "learning_rate") p.learning_rate = value.get<double>();
    else if (key == "pretrain_epochs") p.pretrain_epochs = value.get<int>();
    else if (key == "batch_size") p.batch_size = value.get<int>();
    else if (key == "epochs_per_iter") p.epochs_per_iter = value.get<double>();
    else if (key == "train_dropout") p.train_dropout = value.get<int>();
    else unknown_key("proximity", key);
  }
}

void parse_confidence(const json& j, ConfidenceSection& c) {
  for (const auto& [key, value] : j.items()) {
    if (key == "enabled") c.enabled = value.get<int>();
    else if (key == "mode") c.mode = value.get<std::string>();
    else if (key == "mcd_passes") c.mcd_passes = value.get<int>();
    else if (key == "threshold_percentile") c.threshold_percentile = value.get<double>();
    else if (key == "anneal_horizon") c.anneal_horizon = value.get<int>();
    else if (key == "mask_override") c.mask_override = value.get<double>();
    else unknown_key("confidence", key);
  }
}

void parse_ppo(const json& j, PpoConfig& p) {
  for (const auto& [key, value] : j.items()) {
    if (key == "iterations") p.iterations = value.get<int>();
    else if (key == "rollout_size") p.rollout_size = value.get<int>();
    else if (key == "num_envs") p.num_envs = value.get<int>();
    else if (key == "learning_rate") p.learning_rate = value.get<double>();
    else if (key == "entropy_coef") p.entropy_coef = value.get<double>();
    else if (key == "epochs") p.epochs = value.get<int>();
    else if (key == "minibatches") p.minibatches = value.get<int>();
    else if (key == "clip") p.clip = value.get<double>();
    else if (key == "gamma") p.gamma = value.get<double>();
    else if (key == "gae_lambda") p.gae_lambda = value.get<double>();
    else if (key == "value_coef") p.value_coef = value.get<double>();
    else if (key == "grad_clip") p.grad_clip = value.get<double>();
    else if (key == "hidden") p.hidden = value.get<std::vector<int>>();
    else if (key == "activation") p.activation = value.get<std::string>();
    else if (key == "log_std_init") p.log_std_init = value.get<double>();
    else unknown_key("ppo", key);
  }
}

void parse_bc(const json& j, BcSection& b) {
  for (const auto& [key, value] : j.items()) {
    if (key == "epochs") b.epochs = value.get<int>();
    else if (key == "batch_size") b.batch_size = value.get<int>();
    else if (key == "learning_rate") b.learning_rate = value.get<double>();
    else unknown_key("bc", key);
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults_for(const std::string& env_id) {
  ExperimentConfig cfg;
  cfg.env.id = env_id;
  if (env_id == "grid") {
    cfg.out_dir = "runs/grid";
    cfg.demos_path = "demos_grid.jsonl";
    cfg.expert.constraint = ExpertConstraint::cardinal();
    cfg.expert.count = 1;
    cfg.proximity.activation = "relu";
    cfg.proximity.pretrain_epochs = 400;
    cfg.ppo.activation = "relu";
    cfg.ppo.iterations = 300;
  } else if (env_id == "maze") {
    cfg.out_dir = "runs/maze";
    cfg.demos_path = "demos_maze.jsonl";
    cfg.expert.constraint = ExpertConstraint::bounded(0.1);
    cfg.expert.count = 100;
    cfg.proximity.activation = "tanh";
    cfg.proximity.pretrain_epochs = 5;
    cfg.ppo.activation = "tanh";
    cfg.ppo.iterations = 250;
  } else {
    throw ConfigError("config: unknown env '" + env_id + "'");
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config: top level must be an object");
  std::string env_id = "grid";
  if (j.contains("env") && j["env"].contains("id")) {
    env_id = j["env"]["id"].get<std::string>();
  }
  ExperimentConfig cfg = defaults_for(env_id);
  for (const auto& [key, value] : j.items()) {
    if (key == "schema") {
      if (value.get<int>() != 1) throw ConfigError("config: unsupported schema");
    } else if (key == "variant") cfg.variant = value.get<std::string>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
    else if (key == "demos_path") cfg.demos_path = value.get<std::string>();
    else if (key == "env") parse_env(value, cfg);
    else if (key == "agent_bound") cfg.env.action_scale = value.get<double>();
    else if (key == "agent_cardinal_only") cfg.agent_cardinal_only = value.get<bool>();
    else if (key == "expert") parse_expert(value, cfg.expert);
    else if (key == "proximity") parse_proximity(value, cfg.proximity);
    else if (key == "confidence") parse_confidence(value, cfg.confidence);
    else if (key == "ppo") parse_ppo(value, cfg.ppo);
    else if (key == "bc") parse_bc(value, cfg.bc);
    else if (key == "eval_episodes") cfg.eval_episodes = value.get<int>();
    else if (key == "checkpoint_interval") cfg.checkpoint_interval = value.get<int>();
    else unknown_key("", key);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string ExperimentConfig::to_json_text() const {
  json constraint;
  if (expert.constraint.kind == ExpertConstraint::Kind::kCardinal) {
    constraint = "cardinal";
  } else {
    constraint = expert.constraint.bound;
  }
  json j{
      {"schema", 1},
      {"variant", variant},
      {"seed", seed},
      {"out_dir", out_dir},
      {"demos_path", demos_path},
      {"env",
       {{"id", env.id},
        {"grid_size", env.grid_size},
        {"layout", env.layout_text},
        {"maze",
         {{"dt", env.maze.dt},
          {"v_max", env.maze.v_max},
          {"goal_radius", env.maze.goal_radius},
          {"max_steps", env.maze.max_steps}}}}},
      {"agent_bound", env.action_scale},
      {"agent_cardinal_only", agent_cardinal_only},
      {"expert",
       {{"constraint", constraint},
        {"count", expert.count},
        {"k_p", expert.controller.k_p},
        {"k_d", expert.controller.k_d},
        {"waypoint_radius", expert.controller.waypoint_radius},
        {"retry_budget", expert.controller.retry_budget}}},
      {"proximity",
       {{"members", proximity.members},
        {"decay", proximity.decay},
        {"hidden", proximity.hidden},
        {"dropout_rate", proximity.dropout_rate},
        {"activation", proximity.activation},
        {"learning_rate", proximity.learning_rate},
        {"pretrain_epochs", proximity.pretrain_epochs},
        {"batch_size", proximity.batch_size},
        {"epochs_per_iter", proximity.epochs_per_iter},
        {"train_dropout", proximity.train_dropout}}},
      {"confidence",
       {{"enabled", confidence.enabled},
        {"mode", confidence.mode},
        {"mcd_passes", confidence.mcd_passes},
        {"threshold_percentile", confidence.threshold_percentile},
        {"anneal_horizon", confidence.anneal_horizon},
        {"mask_override", confidence.mask_override}}},
      {"ppo",
       {{"iterations", ppo.iterations},
        {"rollout_size", ppo.rollout_size},
        {"num_envs", ppo.num_envs},
        {"learning_rate", ppo.learning_rate},
        {"entropy_coef", ppo.entropy_coef},
        {"epochs", ppo.epochs},
        {"minibatches", ppo.minibatches},
        {"clip", ppo.clip},
        {"gamma", ppo.gamma},
        {"gae_lambda", ppo.gae_lambda},
        {"value_coef", ppo.value_coef},
        {"grad_clip", ppo.grad_clip},
        {"hidden", ppo.hidden},
        {"activation", ppo.activation},
        {"log_std_init", ppo.log_std_init}}},
      {"bc",
       {{"epochs", bc.epochs},
        {"batch_size", bc.batch_size},
        {"learning_rate", bc.learning_rate}}},
      {"eval_episodes", eval_episodes},
      {"checkpoint_interval", checkpoint_interval},
  };
  return j.dump(2) + "\n";
}

void ExperimentConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ParseError("config: cannot write " + path.string());
  out << to_json_text();
}

void ExperimentConfig::validate() const {
  if (variant != "grip" && variant != "proximity" && variant != "proximity_drop" &&
      variant != "bc") {
    throw ConfigError("config: unknown variant '" + variant + "'");
  }
  if (env.id != "grid" && env.id != "maze") {
    throw ConfigError("config: env.id must be grid or maze");
  }
  if (env.id == "grid" && expert.constraint.kind != ExpertConstraint::Kind::kCardinal) {
    throw ConfigError("config: grid expert constraint must be cardinal");
  }
  if (env.id == "maze" && expert.constraint.kind != ExpertConstraint::Kind::kBound) {
    throw ConfigError("config: maze expert constraint must be a bound");
  }
  if (env.action_scale <= 0.0 || env.action_scale > 1.0) {
    throw ConfigError("config: agent_bound must lie in (0, 1]");
  }
  if (env.id == "maze" && expert.constraint.bound > env.action_scale) {
    throw ConfigError("config: expert bound must not exceed the agent bound");
  }
  if (expert.count < 1) throw ConfigError("config: expert.count must be >= 1");
  if (proximity.members < 1) throw ConfigError("config: proximity.members must be >= 1");
  if (proximity.decay <= 0.0 || proximity.decay >= 1.0) {
    throw ConfigError("config: proximity.decay must lie in (0, 1)");
  }
  if (eval_episodes < 1) throw ConfigError("config: eval_episodes must be >= 1");
  parse_activation(proximity.activation, "proximity");
  ppo.validate();
  confidence_config(variant == "grip").validate(proximity.members);
}

ConfidenceConfig ExperimentConfig::confidence_config(bool enabled) const {
  ConfidenceConfig cc;
  cc.enabled = enabled;
  if (confidence.mode == "ensemble") {
    cc.mode = ConfidenceMode::kEnsemble;
  } else if (confidence.mode == "mc_dropout") {
    cc.mode = ConfidenceMode::kMcDropout;
  } else {
    throw ConfigError("config: confidence.mode must be ensemble or mc_dropout");
  }
  cc.mcd_passes = confidence.mcd_passes;
  cc.threshold_percentile = confidence.threshold_percentile;
  cc.anneal_horizon =
      confidence.anneal_horizon < 0 ? ppo.iterations : confidence.anneal_horizon;
  cc.mask_override = confidence.mask_override;
  return cc;
}

ProximityEnsemble::Options ExperimentConfig::proximity_options() const {
  ProximityEnsemble::Options opt;
  opt.members = proximity.members;
  opt.decay = proximity.decay;
  opt.hidden = proximity.hidden;
  opt.dropout_rate = proximity.dropout_rate;
  opt.activation = parse_activation(proximity.activation, "proximity");
  return opt;
}

Policy::Options ExperimentConfig::policy_options() const {
  Policy::Options opt;
  opt.hidden = ppo.hidden;
  opt.activation = parse_activation(ppo.activation, "ppo");
  opt.log_std_init = ppo.log_std_init;
  return opt;
}

ActionSpec ExperimentConfig::action_spec() const {
  if (env.id == "grid") {
    return {true, agent_cardinal_only ? kCardinalActionCount : kGridActionCount};
  }
  return {false, 2};
}

DatasetRequest ExperimentConfig::dataset_request() const {
  DatasetRequest req;
  req.env_id = env.id;
  req.constraint = expert.constraint;
  req.count = expert.count;
  req.seed = derive_seed(seed, "demos");
  req.grid_size = env.grid_size;
  if (!env.layout_text.empty()) {
    if (env.id == "grid") {
      req.grid_layout = Layout::parse(env.layout_text);
      req.has_grid_layout = true;
    } else {
      req.maze_layout = Layout::parse(env.layout_text);
      req.has_maze_layout = true;
    }
  }
  req.maze_params = env.maze;
  req.expert_params = expert.controller;
  return req;
}

}  // namespace grip
