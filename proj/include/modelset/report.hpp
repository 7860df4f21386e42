#pragma once

#include <cstdint>
#include <string>

namespace modelset {

inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a 64-bit. Stable across platforms, used for scheme/window hashes
/// embedded in every report.
uint64_t fnv1a64(const std::string& data);
std::string stable_hash_hex(const std::string& data);

}  // namespace modelset
