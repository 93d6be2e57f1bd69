#pragma once

#include <stdexcept>
#include <string>

namespace grip {

/// Caller broke a documented precondition (dimension mismatch, step after
/// done, action out of range, ...).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Invalid or inconsistent configuration value.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file; message carries the offending line when known.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Planner or demonstration controller could not produce a result.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Training produced a non-finite quantity or otherwise cannot continue.
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractViolation(msg);
}

}  // namespace grip
