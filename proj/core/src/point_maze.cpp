#include "grip/point_maze.hpp"

#include <cmath>

#include "grip/error.hpp"

namespace grip {

std::string_view PointMaze::default_map() {
  return "########\n"
         "#SS....#\n"
         "#SS....#\n"
         "####...#\n"
         "####...#\n"
         "####...#\n"
         "####..G#\n"
         "########\n";
}

PointMaze::PointMaze(Layout layout, std::uint64_t seed)
    : PointMaze(std::move(layout), seed, Params()) {}

PointMaze::PointMaze(Layout layout, std::uint64_t seed, Params params)
    : layout_(std::move(layout)), params_(params), rng_(seed) {
  validate_maze_layout(layout_);
  if (params_.dt <= 0 || params_.v_max <= 0 || params_.goal_radius <= 0 ||
      params_.max_steps <= 0) {
    throw ConfigError("PointMaze: dt, v_max, goal_radius and max_steps must be positive");
  }
  goal_x_ = layout_.goal.col + 0.5;
  goal_y_ = layout_.goal.row + 0.5;
  reset();
}

std::vector<double> PointMaze::reset() {
  const Cell& cell = layout_.starts[static_cast<std::size_t>(
      uniform_int(rng_, static_cast<int>(layout_.starts.size())))];
  x_ = cell.col + uniform(rng_, 0.25, 0.75);
  y_ = cell.row + uniform(rng_, 0.25, 0.75);
  vx_ = 0;
  vy_ = 0;
  steps_ = 0;
  done_ = false;
  success_ = false;
  started_ = true;
  return observation();
}

bool PointMaze::blocked(double x, double y) const {
  return layout_.wall(static_cast<int>(std::floor(y)),
                      static_cast<int>(std::floor(x)));
}

MazeStepResult PointMaze::step(const std::array<double, 2>& accel) {
  require(started_ && !done_, "PointMaze::step: episode is not live");
  require(std::abs(accel[0]) <= 1.0 && std::abs(accel[1]) <= 1.0,
          "PointMaze::step: acceleration outside [-1, 1]");

  vx_ += accel[0] * params_.dt;
  vy_ += accel[1] * params_.dt;
  double speed = std::hypot(vx_, vy_);
  if (speed > params_.v_max) {
    double scale = params_.v_max / speed;
    vx_ *= scale;
    vy_ *= scale;
  }

  double nx = x_ + vx_ * params_.dt;
  if (blocked(nx, y_)) {
    vx_ = 0;
  } else {
    x_ = nx;
  }
  double ny = y_ + vy_ * params_.dt;
  if (blocked(x_, ny)) {
    vy_ = 0;
  } else {
    y_ = ny;
  }

  steps_ += 1;
  success_ = std::hypot(x_ - goal_x_, y_ - goal_y_) < params_.goal_radius;
  done_ = success_ || steps_ >= params_.max_steps;
  return {observation(), done_, success_};
}

std::vector<double> PointMaze::observation() const {
  return {x_, y_, vx_, vy_, goal_x_, goal_y_};
}

Cell PointMaze::cell() const {
  return {static_cast<int>(std::floor(y_)), static_cast<int>(std::floor(x_))};
}

}  // namespace grip
