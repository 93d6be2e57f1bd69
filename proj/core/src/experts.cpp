#include "grip/experts.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "grip/error.hpp"
#include "grip/rng.hpp"

namespace grip {

bool is_expert_action(GridAction a, const ExpertConstraint& constraint) {
  if (constraint.kind == ExpertConstraint::Kind::kCardinal) {
    return is_cardinal(a);
  }
  return true;  // a bound constraint never restricts discrete moves
}

bool is_expert_action(const std::array<double, 2>& a,
                      const ExpertConstraint& constraint) {
  if (constraint.kind == ExpertConstraint::Kind::kCardinal) {
    throw ContractViolation("is_expert_action: cardinal constraint on a continuous action");
  }
  return std::abs(a[0]) <= constraint.bound && std::abs(a[1]) <= constraint.bound;
}

std::vector<GridAction> bfs_plan(const Layout& layout, GridActionSet action_set) {
  int actions = action_set == GridActionSet::kCardinal ? kCardinalActionCount
                                                       : kGridActionCount;
  if (layout.starts.size() != 1) {
    throw GenerationError("bfs_plan: layout must define exactly one start cell");
  }
  Cell start = layout.starts.front();
  auto index = [&](Cell c) {
    return static_cast<std::size_t>(c.row) * layout.cols + c.col;
  };

  std::vector<int> parent_action(layout.wall_mask.size(), -1);
  std::vector<std::uint8_t> seen(layout.wall_mask.size(), 0);
  std::queue<Cell> frontier;
  frontier.push(start);
  seen[index(start)] = 1;
  bool found = start == layout.goal;
  while (!frontier.empty() && !found) {
    Cell cur = frontier.front();
    frontier.pop();
    for (int k = 0; k < actions; ++k) {
      auto [dr, dc] = grid_action_delta(static_cast<GridAction>(k));
      Cell next{cur.row + dr, cur.col + dc};
      if (layout.wall(next.row, next.col) || seen[index(next)]) continue;
      seen[index(next)] = 1;
      parent_action[index(next)] = k;
      if (next == layout.goal) {
        found = true;
        break;
      }
      frontier.push(next);
    }
  }
  if (!found) {
    throw GenerationError("bfs_plan: goal unreachable under the requested action set");
  }

  std::vector<GridAction> plan;
  Cell cur = layout.goal;
  while (!(cur == start)) {
    int k = parent_action[index(cur)];
    plan.push_back(static_cast<GridAction>(k));
    auto [dr, dc] = grid_action_delta(static_cast<GridAction>(k));
    cur = {cur.row - dr, cur.col - dc};
  }
  std::reverse(plan.begin(), plan.end());
  return plan;
}

namespace {

// Cell-center waypoints from the agent's current cell to the goal cell,
// 4-direction breadth-first search, same tie-break order as bfs_plan.
std::vector<std::array<double, 2>> waypoints_to_goal(const PointMaze& maze) {
  const Layout& layout = maze.layout();
  Layout plan_layout = layout;
  plan_layout.starts = {maze.cell()};
  std::vector<GridAction> plan = bfs_plan(plan_layout, GridActionSet::kCardinal);
  std::vector<std::array<double, 2>> points;
  Cell cur = maze.cell();
  for (GridAction a : plan) {
    auto [dr, dc] = grid_action_delta(a);
    cur = {cur.row + dr, cur.col + dc};
    points.push_back({cur.col + 0.5, cur.row + 0.5});
  }
  auto goal = maze.goal_position();
  points.push_back({goal[0], goal[1]});
  return points;
}

}  // namespace

Trajectory maze_expert_rollout(PointMaze& maze, const ExpertConstraint& constraint,
                               const MazeExpertParams& params) {
  if (constraint.kind != ExpertConstraint::Kind::kBound) {
    throw ConfigError("maze_expert_rollout: maze constraint must be a bound");
  }
  double b = constraint.bound;
  auto waypoints = waypoints_to_goal(maze);
  std::size_t target = 0;

  Trajectory traj;
  traj.env_id = "maze";
  traj.constraint = constraint;
  traj.states.push_back(maze.observation());
  while (!maze.done()) {
    auto pos = maze.position();
    auto vel = maze.velocity();
    // Advance the waypoint pointer past any already-reached points.
    while (target + 1 < waypoints.size() &&
           std::hypot(waypoints[target][0] - pos[0], waypoints[target][1] - pos[1]) <
               params.waypoint_radius) {
      ++target;
    }
    std::array<double, 2> a{};
    for (int i = 0; i < 2; ++i) {
      double desired = params.k_p * (waypoints[target][i] - pos[i]) - params.k_d * vel[i];
      a[i] = std::clamp(desired, -b, b);
    }
    MazeStepResult out = maze.step(a);
    traj.actions.push_back({a[0], a[1]});
    traj.states.push_back(std::move(out.observation));
  }
  traj.success = maze.success();
  return traj;
}

namespace {

Trajectory grid_demo(const Layout& layout, const ExpertConstraint& constraint) {
  GridActionSet set = constraint.kind == ExpertConstraint::Kind::kCardinal
                          ? GridActionSet::kCardinal
                          : GridActionSet::kAll8;
  std::vector<GridAction> plan = bfs_plan(layout, set);
  GridWorld env(layout);
  Trajectory traj;
  traj.env_id = "grid";
  traj.constraint = constraint;
  traj.states.push_back(env.reset());
  for (GridAction a : plan) {
    GridStepResult out = env.step(a);
    traj.actions.push_back({static_cast<double>(static_cast<int>(a))});
    traj.states.push_back(std::move(out.observation));
  }
  if (!env.success()) {
    throw GenerationError("grid demo: plan did not reach the goal");
  }
  traj.success = true;
  return traj;
}

}  // namespace

DemoDataset generate_dataset(const DatasetRequest& request) {
  if (request.count < 1) throw ConfigError("generate_dataset: count must be >= 1");
  DemoDataset dataset;
  dataset.env_id = request.env_id;
  dataset.constraint = request.constraint;
  dataset.seed = request.seed;

  if (request.env_id == "grid") {
    Layout layout = request.has_grid_layout ? request.grid_layout
                                            : Layout::open_grid(request.grid_size);
    for (int k = 0; k < request.count; ++k) {
      Trajectory traj = grid_demo(layout, request.constraint);
      traj.seed = derive_seed(request.seed, "demo", static_cast<std::uint64_t>(k));
      dataset.trajectories.push_back(std::move(traj));
    }
    return dataset;
  }
  if (request.env_id == "maze") {
    Layout layout = request.has_maze_layout
                        ? request.maze_layout
                        : Layout::parse(PointMaze::default_map());
    for (int k = 0; k < request.count; ++k) {
      std::uint64_t traj_seed = derive_seed(request.seed, "demo",
                                            static_cast<std::uint64_t>(k));
      bool kept = false;
      for (int attempt = 0; attempt < request.expert_params.retry_budget; ++attempt) {
        PointMaze maze(layout, derive_seed(traj_seed, "attempt",
                                           static_cast<std::uint64_t>(attempt)),
                       request.maze_params);
        Trajectory traj =
            maze_expert_rollout(maze, request.constraint, request.expert_params);
        if (traj.success) {
          traj.seed = traj_seed;
          dataset.trajectories.push_back(std::move(traj));
          kept = true;
          break;
        }
      }
      if (!kept) {
        throw GenerationError(
            "generate_dataset: maze controller failed " +
            std::to_string(request.expert_params.retry_budget) +
            " attempts for trajectory " + std::to_string(k) + " (seed " +
            std::to_string(request.seed) + ")");
      }
    }
    return dataset;
  }
  throw ConfigError("generate_dataset: unknown env '" + request.env_id + "'");
}

}  // namespace grip
