#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace bnbpe {

// 64-bit FNV-1a. Used for fingerprints that must be stable across platforms
// and runs, which std::hash does not guarantee.
class Fnv1a64 {
 public:
  Fnv1a64& update(std::string_view bytes);
  Fnv1a64& update_u64(std::uint64_t value);
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Zero-padded 16-digit lowercase hex.
std::string to_hex(std::uint64_t value);

// Inverse of to_hex; returns false on malformed input.
bool parse_hex(std::string_view text, std::uint64_t& value);

}  // namespace bnbpe
