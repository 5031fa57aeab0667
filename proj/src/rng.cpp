#include "drmean/rng.hpp"

#include <cmath>
#include <numbers>

namespace drm {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline double to_unit_interval(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::operator()(Counter ctr) const noexcept {
  Key key = key_;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

Philox4x32::Counter CounterRng::block(const DrawKey& key) const noexcept {
  // unit and replicate are folded to 32 bits each; the high halves are mixed
  // into the slot word so distinct keys stay distinct for realistic sizes.
  const auto unit_lo = static_cast<std::uint32_t>(key.unit);
  const auto rep_lo = static_cast<std::uint32_t>(key.replicate);
  const auto high = static_cast<std::uint32_t>((key.unit >> 32) ^ ((key.replicate >> 32) << 16));
  const std::uint32_t slot_word = key.slot ^ (high << 8);
  return philox_({unit_lo, slot_word, rep_lo, static_cast<std::uint32_t>(key.stream)});
}

double CounterRng::uniform(const DrawKey& key) const noexcept {
  const auto out = block(key);
  return to_unit_interval(out[0], out[1]);
}

double CounterRng::normal(const DrawKey& key) const noexcept {
  const auto out = block(key);
  const double u1 = to_unit_interval(out[0], out[1]);
  const double u2 = to_unit_interval(out[2], out[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace drm
