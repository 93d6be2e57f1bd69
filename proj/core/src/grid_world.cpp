#include "grip/grid_world.hpp"

#include "grip/error.hpp"

namespace grip {

std::array<int, 2> grid_action_delta(GridAction a) {
  switch (a) {
    case GridAction::kNorth: return {-1, 0};
    case GridAction::kSouth: return {1, 0};
    case GridAction::kEast: return {0, 1};
    case GridAction::kWest: return {0, -1};
    case GridAction::kNorthEast: return {-1, 1};
    case GridAction::kNorthWest: return {-1, -1};
    case GridAction::kSouthEast: return {1, 1};
    case GridAction::kSouthWest: return {1, -1};
  }
  throw ContractViolation("grid_action_delta: invalid action");
}

bool is_cardinal(GridAction a) {
  return static_cast<int>(a) < kCardinalActionCount;
}

GridWorld::GridWorld(int size) : GridWorld(Layout::open_grid(size)) {}

GridWorld::GridWorld(Layout layout, int max_steps) : layout_(std::move(layout)) {
  validate_grid_layout(layout_);
  if (layout_.starts.size() != 1) {
    throw ConfigError("GridWorld: layout must define exactly one start cell");
  }
  start_ = layout_.starts.front();
  if (start_ == layout_.goal) {
    throw ConfigError("GridWorld: start and goal coincide");
  }
  max_steps_ = max_steps > 0 ? max_steps : 4 * (layout_.rows - 1);
  reset();
}

std::vector<double> GridWorld::reset() {
  agent_ = start_;
  steps_ = 0;
  done_ = false;
  success_ = false;
  started_ = true;
  return observation();
}

GridStepResult GridWorld::step(GridAction a) {
  require(started_ && !done_, "GridWorld::step: episode is not live");
  auto [dr, dc] = grid_action_delta(a);
  int r = agent_.row + dr;
  int c = agent_.col + dc;
  if (!layout_.wall(r, c)) {
    agent_ = {r, c};
  }
  steps_ += 1;
  success_ = agent_ == layout_.goal;
  done_ = success_ || steps_ >= max_steps_;
  return {observation(), done_, success_};
}

std::vector<double> GridWorld::observation() const {
  std::vector<double> obs(static_cast<std::size_t>(observation_dim()), 0.0);
  for (int r = 0; r < layout_.rows; ++r) {
    for (int c = 0; c < layout_.cols; ++c) {
      std::size_t base = 4 * (static_cast<std::size_t>(r) * layout_.cols + c);
      int category;
      if (agent_.row == r && agent_.col == c) {
        category = 2;
      } else if (layout_.goal.row == r && layout_.goal.col == c) {
        category = 3;
      } else if (layout_.wall(r, c)) {
        category = 0;
      } else {
        category = 1;
      }
      obs[base + category] = 1.0;
    }
  }
  return obs;
}

}  // namespace grip
