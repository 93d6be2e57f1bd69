#pragma once

#include <array>
#include <vector>

#include "grip/layout.hpp"

namespace grip {

/// Eight movement directions. The first four (the cardinal set) form the
/// constrained demonstrator's action space; planners break ties in this
/// enumeration order.
enum class GridAction : int {
  kNorth = 0,
  kSouth = 1,
  kEast = 2,
  kWest = 3,
  kNorthEast = 4,
  kNorthWest = 5,
  kSouthEast = 6,
  kSouthWest = 7,
};

inline constexpr int kGridActionCount = 8;
inline constexpr int kCardinalActionCount = 4;

/// (row delta, col delta) for each GridAction, in enumeration order.
std::array<int, 2> grid_action_delta(GridAction a);

bool is_cardinal(GridAction a);

struct GridStepResult {
  std::vector<double> observation;
  bool done = false;
  bool success = false;
};

/// Fixed-layout grid navigation. The observation is a flattened one-hot
/// encoding with four categories per cell, row-major:
/// [wall, empty, agent, goal]. The agent category takes the cell when the
/// agent stands on the goal (that observation is unique to the goal state,
/// and the goal cell is fixed across episodes). Episodes cap at
/// 4 * (size - 1) steps by default.
class GridWorld {
 public:
  explicit GridWorld(int size = 8);
  explicit GridWorld(Layout layout, int max_steps = -1);

  std::vector<double> reset();
  /// Moves one cell in direction a; walls and map edges make the move a
  /// no-op. Throws ContractViolation when called after done.
  GridStepResult step(GridAction a);

  std::vector<double> observation() const;
  int observation_dim() const { return 4 * layout_.rows * layout_.cols; }
  bool done() const { return done_; }
  bool success() const { return success_; }
  int steps() const { return steps_; }
  int max_steps() const { return max_steps_; }
  int size() const { return layout_.rows; }
  Cell agent() const { return agent_; }
  Cell goal() const { return layout_.goal; }
  const Layout& layout() const { return layout_; }

 private:
  Layout layout_;
  Cell start_;
  Cell agent_;
  int max_steps_ = 0;
  int steps_ = 0;
  bool done_ = false;
  bool success_ = false;
  bool started_ = false;
};

}  // namespace grip
