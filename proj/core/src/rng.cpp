#include "cavbec/rng.hpp"

#include <cmath>
#include <numbers>

namespace cavbec {

namespace {
constexpr uint32_t kM0 = 0xD2511F53u;
constexpr uint32_t kM1 = 0xCD9E8D57u;
constexpr uint32_t kW0 = 0x9E3779B9u;
constexpr uint32_t kW1 = 0xBB67AE85u;

inline void round_once(std::array<uint32_t, 4>& c, const std::array<uint32_t, 2>& k) {
  const uint64_t p0 = static_cast<uint64_t>(kM0) * c[0];
  const uint64_t p1 = static_cast<uint64_t>(kM1) * c[2];
  const uint32_t lo0 = static_cast<uint32_t>(p0), hi0 = static_cast<uint32_t>(p0 >> 32);
  const uint32_t lo1 = static_cast<uint32_t>(p1), hi1 = static_cast<uint32_t>(p1 >> 32);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}
}  // namespace

std::array<uint32_t, 4> Philox4x32::block(const std::array<uint32_t, 4>& counter,
                                          const std::array<uint32_t, 2>& key) {
  std::array<uint32_t, 4> c = counter;
  std::array<uint32_t, 2> k = key;
  for (int r = 0; r < 10; ++r) {
    round_once(c, k);
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

uint64_t derive_stream_key(uint64_t base_seed, uint64_t index, uint64_t tag) {
  return mix64(mix64(mix64(base_seed) ^ index) ^ tag);
}

CounterRng::CounterRng(uint64_t stream_key)
    : key_{static_cast<uint32_t>(stream_key), static_cast<uint32_t>(stream_key >> 32)} {}

uint32_t CounterRng::next_u32() {
  if (idx_ >= 4) {
    const std::array<uint32_t, 4> ctr = {static_cast<uint32_t>(block_),
                                         static_cast<uint32_t>(block_ >> 32), 0u, 0u};
    buf_ = Philox4x32::block(ctr, key_);
    ++block_;
    idx_ = 0;
  }
  return buf_[idx_++];
}

uint64_t CounterRng::next_u64() {
  const uint64_t lo = next_u32();
  const uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double CounterRng::uniform01() {
  // (x+1) * 2^-64 lies in (0, 1]; never 0, safe under log()
  return (static_cast<double>(next_u64()) + 1.0) * 0x1.0p-64;
}

double CounterRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

}  // namespace cavbec
