#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace grip {

/// How the demonstrator's action space is restricted relative to the
/// agent's. Grid: the four cardinal moves. Maze: per-dimension clip bound b
/// with the full space being [-1, 1] per dimension.
struct ExpertConstraint {
  enum class Kind { kCardinal, kBound };
  Kind kind = Kind::kCardinal;
  double bound = 1.0;

  static ExpertConstraint cardinal() { return {Kind::kCardinal, 1.0}; }
  static ExpertConstraint bounded(double b);
  bool operator==(const ExpertConstraint&) const = default;
};

/// One episode: observations s_0..s_T, optionally the actions between them
/// (grid actions are stored as single-element vectors holding the action
/// index). Demonstrations always carry success = true.
struct Trajectory {
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> actions;  // empty = state-only
  bool success = false;
  std::string env_id;
  ExpertConstraint constraint;
  std::uint64_t seed = 0;

  bool has_actions() const { return !actions.empty(); }
  int length() const { return static_cast<int>(states.size()) - 1; }
};

struct DemoDataset {
  std::string env_id;
  ExpertConstraint constraint;
  std::uint64_t seed = 0;
  std::vector<Trajectory> trajectories;
};

/// JSON-lines file: line 1 is a header record
/// {"schema":1,"env":...,"constraint":...,"seed":...,"count":N}, then one
/// trajectory record per line. Doubles round-trip exactly.
void save_dataset(const std::filesystem::path& path, const DemoDataset& dataset);
DemoDataset load_dataset(const std::filesystem::path& path);

}  // namespace grip
