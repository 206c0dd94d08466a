#pragma once

#include <cstdint>
#include <random>

namespace thirdassay {

/// Seedable, splittable source of uniform variates.
///
/// Algorithm identity (fixed, so sequences reproduce across platforms):
///   - engine: std::mt19937_64, whose output sequence is fully specified by the standard;
///   - the engine is seeded with splitmix64(key), where key = splitmix64(seed) for a root stream;
///   - split(i) derives a child key = splitmix64(key ^ splitmix64(i + 1));
///   - uniform() maps the top 53 bits b of a draw to (b + 0.5) * 2^-53, strictly inside (0, 1).
///
/// No std:: distribution objects are used, since their algorithms are implementation-defined.
/// A stream is owned by a single task; parallel work uses one split() child per unit of work.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream split(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }
  double uniform();

  std::uint64_t key() const noexcept { return key_; }

 private:
  struct FromKey {};
  RandomStream(FromKey, std::uint64_t key);

  std::uint64_t key_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace thirdassay
