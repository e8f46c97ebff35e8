#pragma once

#include <array>
#include <cstdint>

namespace cavbec {

// Counter-based generator (Philox4x32, 10 rounds). A stream is (key, block
// counter); output depends only on those, so any trajectory's randomness is
// reproducible from its 64-bit stream key alone, independent of scheduling.
struct Philox4x32 {
  static std::array<uint32_t, 4> block(const std::array<uint32_t, 4>& counter,
                                       const std::array<uint32_t, 2>& key);
};

// 64-bit finalizer used to derive independent stream keys from
// (base_seed, index, tag) triples.
uint64_t mix64(uint64_t z);
uint64_t derive_stream_key(uint64_t base_seed, uint64_t index, uint64_t tag);

inline constexpr uint64_t kSamplerStreamTag = 0x5A4D504C45520001ull;
inline constexpr uint64_t kWienerStreamTag = 0x5749454E45520002ull;

// Uniform/normal draws from one Philox stream. Normals via Box-Muller on
// (0,1] uniforms; a spare normal is cached, so draw order is fixed.
class CounterRng {
 public:
  explicit CounterRng(uint64_t stream_key);

  uint64_t next_u64();
  double uniform01();  // in (0, 1]
  double normal();     // standard normal

 private:
  std::array<uint32_t, 2> key_;
  uint64_t block_ = 0;
  std::array<uint32_t, 4> buf_{};
  int idx_ = 4;  // consumed
  bool have_spare_ = false;
  double spare_ = 0.0;

  uint32_t next_u32();
};

}  // namespace cavbec
