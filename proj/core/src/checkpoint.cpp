#include "grip/checkpoint.hpp"

#include <bit>
#include <fstream>

#include <json.hpp>

#include "grip/error.hpp"

namespace grip::nn {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is defined as little-endian");

namespace {

using nlohmann::json;

json spec_to_json(const MlpSpec& spec) {
  return json{
      {"input_dim", spec.input_dim},
      {"hidden_dims", spec.hidden_dims},
      {"output_dim", spec.output_dim},
      {"activation", spec.activation == Activation::kRelu ? "relu" : "tanh"},
      {"dropout_rate", spec.dropout_rate},
      {"output_squash",
       spec.output_squash == OutputSquash::kSigmoid ? "sigmoid" : "none"},
  };
}

MlpSpec spec_from_json(const json& j) {
  MlpSpec spec;
  spec.input_dim = j.at("input_dim").get<int>();
  spec.hidden_dims = j.at("hidden_dims").get<std::vector<int>>();
  spec.output_dim = j.at("output_dim").get<int>();
  std::string act = j.at("activation").get<std::string>();
  if (act == "relu") {
    spec.activation = Activation::kRelu;
  } else if (act == "tanh") {
    spec.activation = Activation::kTanh;
  } else {
    throw ParseError("checkpoint: unknown activation '" + act + "'");
  }
  spec.dropout_rate = j.at("dropout_rate").get<double>();
  std::string squash = j.at("output_squash").get<std::string>();
  if (squash == "sigmoid") {
    spec.output_squash = OutputSquash::kSigmoid;
  } else if (squash == "none") {
    spec.output_squash = OutputSquash::kNone;
  } else {
    throw ParseError("checkpoint: unknown output squash '" + squash + "'");
  }
  spec.validate();
  return spec;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  if (ckpt.params.size() != ckpt.spec.param_count()) {
    throw ContractViolation("save_checkpoint: parameter count mismatch");
  }
  json layers = json::array();
  for (int l = 0; l < ckpt.spec.layer_count(); ++l) {
    layers.push_back({{"in", ckpt.spec.layer_in(l)}, {"out", ckpt.spec.layer_out(l)}});
  }
  json header{
      {"format", "grip-mlp"},
      {"version", 1},
      {"seed", ckpt.seed},
      {"spec", spec_to_json(ckpt.spec)},
      {"layers", layers},
      {"count", ckpt.params.size()},
  };
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("save_checkpoint: cannot open " + path.string());
  out << header.dump() << '\n';
  out.write(reinterpret_cast<const char*>(ckpt.params.data()),
            static_cast<std::streamsize>(ckpt.params.size() * sizeof(double)));
  if (!out) throw ParseError("save_checkpoint: write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("load_checkpoint: cannot open " + path.string());
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw ParseError("load_checkpoint: missing header line in " + path.string());
  }
  json header;
  try {
    header = json::parse(header_line);
  } catch (const json::exception& e) {
    throw ParseError("load_checkpoint: bad header in " + path.string() + ": " +
                     e.what());
  }
  if (header.value("format", "") != "grip-mlp") {
    throw ParseError("load_checkpoint: not a grip-mlp file: " + path.string());
  }
  Checkpoint ckpt;
  ckpt.spec = spec_from_json(header.at("spec"));
  ckpt.seed = header.value("seed", 0ULL);
  std::size_t count = header.at("count").get<std::size_t>();
  if (count != ckpt.spec.param_count()) {
    throw ParseError("load_checkpoint: count does not match spec in " +
                     path.string());
  }
  ckpt.params.resize(count);
  in.read(reinterpret_cast<char*>(ckpt.params.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double))) {
    throw ParseError("load_checkpoint: truncated payload in " + path.string());
  }
  return ckpt;
}

}  // namespace grip::nn
