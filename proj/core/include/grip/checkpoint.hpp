#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "grip/mlp.hpp"

namespace grip::nn {

/// Network checkpoint file layout (version 1):
///   line 1: a single JSON header terminated by '\n' with fields
///           {"format":"grip-mlp","version":1,"seed":...,"spec":{...},
///            "layers":[{"in":..,"out":..},...],"count":N}
///   then exactly N little-endian IEEE-754 doubles, layer by layer,
///   weights row-major followed by biases.
/// The binary payload makes save/load round-trip bit-exact.
struct Checkpoint {
  MlpSpec spec;
  std::vector<double> params;
  std::uint64_t seed = 0;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace grip::nn
