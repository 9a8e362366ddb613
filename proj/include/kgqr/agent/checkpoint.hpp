#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "kgqr/agent/dqn.hpp"

namespace kgqr::agent {

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view text);

struct CheckpointHeader {
  std::uint64_t config_hash = 0;
  std::string config_text;
};

// Binary layout (little-endian host order):
//   "KGQRCKPT" u32 version u64 hash u64 len config-text
//   u64 count { u64 len name u64 rows u64 cols f64[rows*cols] }*
void save_checkpoint(const std::filesystem::path& path, KgqrAgent& agent,
                     const std::string& config_text);
CheckpointHeader read_checkpoint_header(const std::filesystem::path& path);
// Overwrites every parameter of `agent`; names and shapes must match.
CheckpointHeader load_checkpoint(const std::filesystem::path& path, KgqrAgent& agent);

}  // namespace kgqr::agent
