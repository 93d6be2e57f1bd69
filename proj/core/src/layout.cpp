#include "grip/layout.hpp"

#include <fstream>
#include <queue>
#include <sstream>

#include "grip/error.hpp"

namespace grip {

Layout Layout::parse(std::string_view text) {
  Layout layout;
  std::vector<std::string> lines;
  {
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) lines.push_back(line);
    }
  }
  if (lines.empty()) throw ParseError("layout: empty map");
  layout.rows = static_cast<int>(lines.size());
  layout.cols = static_cast<int>(lines[0].size());
  layout.wall_mask.assign(static_cast<std::size_t>(layout.rows) * layout.cols, 0);

  bool have_goal = false;
  for (int r = 0; r < layout.rows; ++r) {
    if (static_cast<int>(lines[r].size()) != layout.cols) {
      throw ParseError("layout: line " + std::to_string(r + 1) +
                       " has width " + std::to_string(lines[r].size()) +
                       ", expected " + std::to_string(layout.cols));
    }
    for (int c = 0; c < layout.cols; ++c) {
      char ch = lines[r][c];
      switch (ch) {
        case '#':
          layout.wall_mask[static_cast<std::size_t>(r) * layout.cols + c] = 1;
          break;
        case '.':
          break;
        case 'S':
          layout.starts.push_back({r, c});
          break;
        case 'G':
          if (have_goal) throw ParseError("layout: more than one goal cell");
          layout.goal = {r, c};
          have_goal = true;
          break;
        default:
          throw ParseError("layout: line " + std::to_string(r + 1) +
                           ": unexpected character '" + std::string(1, ch) + "'");
      }
    }
  }
  if (!have_goal) throw ParseError("layout: no goal cell");
  if (layout.starts.empty()) throw ParseError("layout: no start cell");
  return layout;
}

Layout Layout::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("layout: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Layout Layout::open_grid(int n) {
  if (n < 2) throw ConfigError("open_grid: size must be at least 2");
  Layout layout;
  layout.rows = n;
  layout.cols = n;
  layout.wall_mask.assign(static_cast<std::size_t>(n) * n, 0);
  layout.starts = {{0, 0}};
  layout.goal = {n - 1, n - 1};
  return layout;
}

namespace {

// Reverse BFS from the goal; returns reachable mask over free cells.
std::vector<std::uint8_t> reachable_from_goal(const Layout& layout, bool diagonals) {
  std::vector<std::uint8_t> seen(layout.wall_mask.size(), 0);
  std::queue<Cell> q;
  q.push(layout.goal);
  seen[static_cast<std::size_t>(layout.goal.row) * layout.cols + layout.goal.col] = 1;
  const int dr4[] = {-1, 1, 0, 0};
  const int dc4[] = {0, 0, 1, -1};
  const int dr8[] = {-1, 1, 0, 0, -1, -1, 1, 1};
  const int dc8[] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int* dr = diagonals ? dr8 : dr4;
  const int* dc = diagonals ? dc8 : dc4;
  int n = diagonals ? 8 : 4;
  while (!q.empty()) {
    Cell cur = q.front();
    q.pop();
    for (int k = 0; k < n; ++k) {
      int r = cur.row + dr[k];
      int c = cur.col + dc[k];
      if (layout.wall(r, c)) continue;
      std::size_t idx = static_cast<std::size_t>(r) * layout.cols + c;
      if (!seen[idx]) {
        seen[idx] = 1;
        q.push({r, c});
      }
    }
  }
  return seen;
}

void check_all_free_reach_goal(const Layout& layout, bool diagonals) {
  auto seen = reachable_from_goal(layout, diagonals);
  for (int r = 0; r < layout.rows; ++r) {
    for (int c = 0; c < layout.cols; ++c) {
      std::size_t idx = static_cast<std::size_t>(r) * layout.cols + c;
      if (!layout.wall_mask[idx] && !seen[idx]) {
        throw ParseError("layout: free cell (" + std::to_string(r) + "," +
                         std::to_string(c) + ") cannot reach the goal");
      }
    }
  }
}

}  // namespace

void validate_grid_layout(const Layout& layout) {
  if (layout.wall(layout.goal.row, layout.goal.col)) {
    throw ParseError("layout: goal sits on a wall");
  }
  check_all_free_reach_goal(layout, /*diagonals=*/true);
}

void validate_maze_layout(const Layout& layout) {
  for (int r = 0; r < layout.rows; ++r) {
    for (int c = 0; c < layout.cols; ++c) {
      bool border = r == 0 || c == 0 || r == layout.rows - 1 || c == layout.cols - 1;
      if (border && !layout.wall(r, c)) {
        throw ParseError("layout: maze border must be solid wall");
      }
    }
  }
  check_all_free_reach_goal(layout, /*diagonals=*/false);
}

}  // namespace grip
