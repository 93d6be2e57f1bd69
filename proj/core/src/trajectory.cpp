#include "grip/trajectory.hpp"

#include <fstream>

#include <json.hpp>

#include "grip/error.hpp"

namespace grip {

using nlohmann::json;

ExpertConstraint ExpertConstraint::bounded(double b) {
  if (b <= 0.0 || b > 1.0) {
    throw ConfigError("ExpertConstraint: bound must lie in (0, 1]");
  }
  return {Kind::kBound, b};
}

namespace {

json constraint_to_json(const ExpertConstraint& c) {
  if (c.kind == ExpertConstraint::Kind::kCardinal) {
    return json{{"type", "cardinal"}};
  }
  return json{{"type", "bound"}, {"b", c.bound}};
}

ExpertConstraint constraint_from_json(const json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "cardinal") return ExpertConstraint::cardinal();
  if (type == "bound") return ExpertConstraint::bounded(j.at("b").get<double>());
  throw ParseError("dataset: unknown constraint type '" + type + "'");
}

}  // namespace

void save_dataset(const std::filesystem::path& path, const DemoDataset& dataset) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ParseError("save_dataset: cannot open " + path.string());
  json header{
      {"schema", 1},
      {"env", dataset.env_id},
      {"constraint", constraint_to_json(dataset.constraint)},
      {"seed", dataset.seed},
      {"count", dataset.trajectories.size()},
  };
  out << header.dump() << '\n';
  for (const Trajectory& traj : dataset.trajectories) {
    json rec{
        {"states", traj.states},
        {"success", traj.success},
        {"length", traj.length()},
        {"seed", traj.seed},
    };
    if (traj.has_actions()) rec["actions"] = traj.actions;
    out << rec.dump() << '\n';
  }
  if (!out) throw ParseError("save_dataset: write failed for " + path.string());
}

DemoDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_dataset: cannot open " + path.string());
  std::string line;
  int line_no = 0;
  auto parse_line = [&](const std::string& text) {
    try {
      return json::parse(text);
    } catch (const json::exception& e) {
      throw ParseError("load_dataset: " + path.string() + ":" +
                       std::to_string(line_no) + ": " + e.what());
    }
  };

  if (!std::getline(in, line)) {
    throw ParseError("load_dataset: " + path.string() + ": missing header line");
  }
  line_no = 1;
  json header = parse_line(line);
  DemoDataset dataset;
  try {
    if (header.at("schema").get<int>() != 1) {
      throw ParseError("load_dataset: unsupported schema version");
    }
    dataset.env_id = header.at("env").get<std::string>();
    dataset.constraint = constraint_from_json(header.at("constraint"));
    dataset.seed = header.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError("load_dataset: " + path.string() + ":1: bad header: " + e.what());
  }
  std::size_t count = header.at("count").get<std::size_t>();

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec = parse_line(line);
    Trajectory traj;
    try {
      traj.states = rec.at("states").get<std::vector<std::vector<double>>>();
      traj.success = rec.at("success").get<bool>();
      traj.seed = rec.value("seed", 0ULL);
      if (rec.contains("actions")) {
        traj.actions = rec.at("actions").get<std::vector<std::vector<double>>>();
      }
      int recorded = rec.at("length").get<int>();
      if (recorded != traj.length()) {
        throw ParseError("load_dataset: " + path.string() + ":" +
                         std::to_string(line_no) + ": length field disagrees with states");
      }
      if (traj.has_actions() &&
          traj.actions.size() + 1 != traj.states.size()) {
        throw ParseError("load_dataset: " + path.string() + ":" +
                         std::to_string(line_no) + ": |states| != |actions| + 1");
      }
    } catch (const json::exception& e) {
      throw ParseError("load_dataset: " + path.string() + ":" +
                       std::to_string(line_no) + ": " + e.what());
    }
    traj.env_id = dataset.env_id;
    traj.constraint = dataset.constraint;
    dataset.trajectories.push_back(std::move(traj));
  }
  if (dataset.trajectories.size() != count) {
    throw ParseError("load_dataset: " + path.string() + ": header promises " +
                     std::to_string(count) + " trajectories, found " +
                     std::to_string(dataset.trajectories.size()));
  }
  return dataset;
}

}  // namespace grip
