#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "grip/grid_world.hpp"
#include "grip/point_maze.hpp"
#include "grip/policy.hpp"
#include "grip/trajectory.hpp"

namespace grip {

struct EnvStep {
  std::vector<double> observation;
  bool done = false;
  bool success = false;
};

/// Uniform environment surface for rollout and evaluation code. Actions are
/// passed as vectors: a single index for discrete environments, the raw
/// action vector otherwise.
class Env {
 public:
  virtual ~Env() = default;
  virtual std::vector<double> reset() = 0;
  virtual EnvStep step(const std::vector<double>& action) = 0;
  virtual int obs_dim() const = 0;
  virtual ActionSpec action_spec() const = 0;
  virtual int max_steps() const = 0;
  /// Steps taken in the current episode so far.
  virtual int steps() const = 0;
  /// True iff the constrained demonstrator could have taken this action.
  virtual bool expert_action(const std::vector<double>& action,
                             const ExpertConstraint& constraint) const = 0;
};

struct EnvConfig {
  std::string id = "grid";  // "grid" or "maze"
  int grid_size = 8;
  /// Optional ASCII map override; empty selects the built-in layout.
  std::string layout_text;
  PointMaze::Params maze;
  /// Maze only: the learner's actions (in [-1, 1]) are scaled by this bound
  /// before stepping, restricting the agent when < 1.
  double action_scale = 1.0;

  bool operator==(const EnvConfig&) const = default;
};

std::unique_ptr<Env> make_env(const EnvConfig& cfg, std::uint64_t seed);

/// Fixed element-wise input scaling the learners apply to observations:
/// identity for the grid's one-hot encoding, positions and velocities
/// brought to unit range for the maze.
std::vector<double> observation_scale(const EnvConfig& cfg);

}  // namespace grip
