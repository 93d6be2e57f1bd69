#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "grip/layout.hpp"
#include "grip/rng.hpp"

namespace grip {

struct MazeStepResult {
  std::vector<double> observation;
  bool done = false;
  bool success = false;
};

/// Double-integrator point mass in an occupancy-grid maze. Cells are unit
/// squares; cell (r, c) spans x in [c, c+1), y in [r, r+1). Actions are
/// accelerations in [-1, 1]^2, integrated as v += a*dt with the speed
/// capped, then the move x += v*dt is resolved axis by axis (x first):
/// an axis whose destination cell is a wall does not move and has its
/// velocity component zeroed. The observation is
/// (x, y, vx, vy, goal_x, goal_y).
class PointMaze {
 public:
  struct Params {
    double dt = 0.1;
    double v_max = 5.0;
    double goal_radius = 0.5;
    int max_steps = 400;
  };

  PointMaze(Layout layout, std::uint64_t seed);
  PointMaze(Layout layout, std::uint64_t seed, Params params);

  /// Start cell drawn uniformly from the layout's 'S' cells, position
  /// uniform in the central half of that cell, velocity zero.
  std::vector<double> reset();
  /// Throws ContractViolation if any |a_i| > 1 or the episode is over; the
  /// environment never clips agent actions silently.
  MazeStepResult step(const std::array<double, 2>& accel);

  std::vector<double> observation() const;
  int observation_dim() const { return 6; }
  bool done() const { return done_; }
  bool success() const { return success_; }
  int steps() const { return steps_; }
  int max_steps() const { return params_.max_steps; }
  std::array<double, 2> position() const { return {x_, y_}; }
  std::array<double, 2> velocity() const { return {vx_, vy_}; }
  std::array<double, 2> goal_position() const { return {goal_x_, goal_y_}; }
  const Layout& layout() const { return layout_; }
  const Params& params() const { return params_; }
  Cell cell() const;

  /// Built-in 8x8 map: an L of two wide corridors, so the shortest path
  /// bends once and rewards sustained speed on the straights.
  static std::string_view default_map();

 private:
  bool blocked(double x, double y) const;

  Layout layout_;
  Params params_;
  Rng rng_;
  double x_ = 0, y_ = 0, vx_ = 0, vy_ = 0;
  double goal_x_ = 0, goal_y_ = 0;
  int steps_ = 0;
  bool done_ = false;
  bool success_ = false;
  bool started_ = false;
};

}  // namespace grip
