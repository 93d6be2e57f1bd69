#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace grip {

struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
};

/// ASCII occupancy map: '#' wall, '.' free, 'S' start-region cell, 'G' goal.
/// One row per line, all rows the same width. 'S' and 'G' cells are free.
struct Layout {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> wall_mask;  // row-major, 1 = wall
  std::vector<Cell> starts;
  Cell goal;

  bool in_bounds(int r, int c) const {
    return r >= 0 && r < rows && c >= 0 && c < cols;
  }
  /// Out-of-bounds counts as wall.
  bool wall(int r, int c) const {
    return !in_bounds(r, c) || wall_mask[static_cast<std::size_t>(r) * cols + c] != 0;
  }

  static Layout parse(std::string_view text);
  static Layout load(const std::filesystem::path& path);

  /// Open n x n map, no walls, start top-left, goal bottom-right.
  static Layout open_grid(int n);
};

/// Every free cell must reach the goal by 8-direction moves.
/// Throws ParseError naming the first stranded cell otherwise.
void validate_grid_layout(const Layout& layout);

/// Border must be solid wall and every free cell must reach the goal by
/// 4-direction moves (the point mass cannot pass diagonal gaps).
void validate_maze_layout(const Layout& layout);

}  // namespace grip
