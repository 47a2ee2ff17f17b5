#include "bnbpe/hash.hpp"

#include <charconv>
#include <cstdio>

namespace bnbpe {

Fnv1a64& Fnv1a64::update(std::string_view bytes) {
  for (unsigned char c : bytes) {
    state_ ^= c;
    state_ *= 0x100000001b3ULL;
  }
  return *this;
}

Fnv1a64& Fnv1a64::update_u64(std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    state_ ^= static_cast<unsigned char>(value >> (8 * i));
    state_ *= 0x100000001b3ULL;
  }
  return *this;
}

std::uint64_t fnv1a64(std::string_view bytes) { return Fnv1a64{}.update(bytes).digest(); }

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

bool parse_hex(std::string_view text, std::uint64_t& value) {
  if (text.empty() || text.size() > 16) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace bnbpe
