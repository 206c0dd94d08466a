#include "thirdassay/random_stream.hpp"

namespace thirdassay {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : RandomStream(FromKey{}, splitmix64(seed)) {}

RandomStream::RandomStream(FromKey, std::uint64_t key) : key_(key), engine_(splitmix64(key)) {}

RandomStream RandomStream::split(std::uint64_t index) const {
  return RandomStream(FromKey{}, splitmix64(key_ ^ splitmix64(index + 1)));
}

double RandomStream::uniform() {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
}

}  // namespace thirdassay
