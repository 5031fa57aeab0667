#pragma once

#include <array>
#include <cstdint>

namespace drm {

// Philox4x32-10: a keyed bijection on 128-bit
// counters. Every random quantity in a simulation is addressed by a counter,
// so draws do not depend on execution order or thread count.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Counter operator()(Counter counter) const noexcept;

 private:
  Key key_;
};

// Independent streams used by the generator. Values are part of the output
// contract: changing them changes every simulated sample.
enum class Stream : std::uint32_t {
  Latent = 0,
  Noise = 1,
  Response = 2,
  Display = 3,
};

struct DrawKey {
  std::uint64_t replicate = 0;
  std::uint64_t unit = 0;
  std::uint32_t slot = 0;
  Stream stream = Stream::Latent;
};

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : philox_(seed) {}

  // Uniform on (0, 1], 53-bit resolution.
  double uniform(const DrawKey& key) const noexcept;
  // Standard normal by Box-Muller on one 128-bit block.
  double normal(const DrawKey& key) const noexcept;

 private:
  Philox4x32::Counter block(const DrawKey& key) const noexcept;

  Philox4x32 philox_;
};

}  // namespace drm
