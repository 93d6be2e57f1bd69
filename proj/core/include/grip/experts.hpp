#pragma once

#include <cstdint>
#include <vector>

#include "grip/grid_world.hpp"
#include "grip/point_maze.hpp"
#include "grip/trajectory.hpp"

namespace grip {

enum class GridActionSet { kCardinal, kAll8 };

/// True iff the action was available to the constrained demonstrator.
bool is_expert_action(GridAction a, const ExpertConstraint& constraint);
bool is_expert_action(const std::array<double, 2>& a,
                      const ExpertConstraint& constraint);

/// Shortest start-to-goal action sequence by breadth-first search, ties
/// broken by the GridAction enumeration order. Throws GenerationError when
/// the goal is unreachable under the given action set.
std::vector<GridAction> bfs_plan(const Layout& layout, GridActionSet action_set);

/// Gains for the waypoint-following demonstration controller.
struct MazeExpertParams {
  double k_p = 1.0;
  double k_d = 2.0;
  double waypoint_radius = 0.7;
  int retry_budget = 20;
};

/// Rolls one demonstration in a freshly reset maze: breadth-first waypoints
/// over free cells, a proportional-derivative acceleration toward the
/// current waypoint, clipped per-dimension to [-b, b] before stepping.
/// Returns the trajectory (success flag reflects the episode outcome).
Trajectory maze_expert_rollout(PointMaze& maze, const ExpertConstraint& constraint,
                               const MazeExpertParams& params);

struct DatasetRequest {
  std::string env_id;  // "grid" or "maze"
  ExpertConstraint constraint;
  int count = 1;
  std::uint64_t seed = 0;
  // grid
  int grid_size = 8;
  Layout grid_layout;       // used when has_grid_layout
  bool has_grid_layout = false;
  // maze
  Layout maze_layout;
  bool has_maze_layout = false;
  PointMaze::Params maze_params;
  MazeExpertParams expert_params;
};

/// `count` successful demonstrations, deterministic in `seed`. Trajectory k
/// uses the derived seed (seed, k), so output does not depend on how
/// generation is scheduled. Failed maze rollouts are resampled up to the
/// retry budget; exhausting it raises GenerationError naming the seed.
DemoDataset generate_dataset(const DatasetRequest& request);

}  // namespace grip
