#include "grip/env.hpp"

#include <cmath>

#include "grip/error.hpp"
#include "grip/experts.hpp"

namespace grip {

namespace {

class GridEnv final : public Env {
 public:
  explicit GridEnv(const EnvConfig& cfg)
      : world_(cfg.layout_text.empty()
                   ? GridWorld(cfg.grid_size)
                   : GridWorld(Layout::parse(cfg.layout_text))) {}

  std::vector<double> reset() override { return world_.reset(); }

  EnvStep step(const std::vector<double>& action) override {
    require(action.size() == 1, "GridEnv: action is one index");
    int a = static_cast<int>(action[0]);
    require(a >= 0 && a < kGridActionCount, "GridEnv: action index out of range");
    GridStepResult out = world_.step(static_cast<GridAction>(a));
    return {std::move(out.observation), out.done, out.success};
  }

  int obs_dim() const override { return world_.observation_dim(); }
  ActionSpec action_spec() const override { return {true, kGridActionCount}; }
  int max_steps() const override { return world_.max_steps(); }
  int steps() const override { return world_.steps(); }

  bool expert_action(const std::vector<double>& action,
                     const ExpertConstraint& constraint) const override {
    return is_expert_action(static_cast<GridAction>(static_cast<int>(action[0])),
                            constraint);
  }

 private:
  GridWorld world_;
};

class MazeEnv final : public Env {
 public:
  MazeEnv(const EnvConfig& cfg, std::uint64_t seed)
      : maze_(cfg.layout_text.empty() ? Layout::parse(PointMaze::default_map())
                                      : Layout::parse(cfg.layout_text),
              seed, cfg.maze),
        scale_(cfg.action_scale) {
    if (scale_ <= 0.0 || scale_ > 1.0) {
      throw ConfigError("MazeEnv: action_scale must lie in (0, 1]");
    }
  }

  std::vector<double> reset() override { return maze_.reset(); }

  EnvStep step(const std::vector<double>& action) override {
    require(action.size() == 2, "MazeEnv: action is a 2-vector");
    MazeStepResult out = maze_.step({action[0] * scale_, action[1] * scale_});
    return {std::move(out.observation), out.done, out.success};
  }

  int obs_dim() const override { return maze_.observation_dim(); }
  ActionSpec action_spec() const override { return {false, 2}; }
  int max_steps() const override { return maze_.max_steps(); }
  int steps() const override { return maze_.steps(); }

  bool expert_action(const std::vector<double>& action,
                     const ExpertConstraint& constraint) const override {
    return is_expert_action(
        std::array<double, 2>{action[0] * scale_, action[1] * scale_}, constraint);
  }

 private:
  PointMaze maze_;
  double scale_;
};

}  // namespace

std::unique_ptr<Env> make_env(const EnvConfig& cfg, std::uint64_t seed) {
  if (cfg.id == "grid") return std::make_unique<GridEnv>(cfg);
  if (cfg.id == "maze") return std::make_unique<MazeEnv>(cfg, seed);
  throw ConfigError("make_env: unknown env '" + cfg.id + "'");
}

std::vector<double> observation_scale(const EnvConfig& cfg) {
  if (cfg.id == "grid") return {};  // one-hot inputs are already unit scale
  if (cfg.id == "maze") {
    Layout layout = cfg.layout_text.empty()
                        ? Layout::parse(PointMaze::default_map())
                        : Layout::parse(cfg.layout_text);
    double pos = 1.0 / std::max(layout.rows, layout.cols);
    double vel = 1.0 / cfg.maze.v_max;
    return {pos, pos, vel, vel, pos, pos};
  }
  throw ConfigError("observation_scale: unknown env '" + cfg.id + "'");
}

}  // namespace grip
