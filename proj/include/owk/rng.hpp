#pragma once

// Counter-based random streams (Philox4x32-10).
//
// A stream is identified by (seed, stream_id). The seed is the 64-bit key and
// the stream id occupies the upper half of the 128-bit counter, so distinct
// episodes get independent streams that do not depend on scheduling.

#include <array>
#include <cstdint>

namespace owk {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline PhiloxBlock philox4x32(PhiloxBlock ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += 0x9E3779B9u;
    key[1] += 0xBB67AE85u;
  }
  return ctr;
}

class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint32_t next_u32() {
    if (word_pos_ == 4) {
      words_ = block();
      word_pos_ = 0;
    }
    return words_[word_pos_++];
  }
  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }
  // Uniform on the open interval (0, 1), 53 random bits.
  double uniform() {
    const std::uint64_t k = next_u64() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
  }
  // One random bit.
  bool bit() {
    if (bit_count_ == 0) {
      bits_ = next_u64();
      bit_count_ = 64;
    }
    const bool b = bits_ & 1u;
    bits_ >>= 1;
    --bit_count_;
    return b;
  }
  // Uniform on {0, ..., n-1} for 1 <= n <= 256, by byte rejection.
  unsigned below(unsigned n);
  // Uniform on {0, 1, 2}: bytes in [0, 255) reduced mod 3.
  unsigned three() {
    for (;;) {
      const unsigned b = next_byte();
      if (b != 255) return b % 3;
    }
  }

  // Number of 128-bit blocks drawn so far.
  std::uint64_t blocks_used() const { return counter_; }

 private:
  PhiloxBlock block() {
    const PhiloxBlock ctr = {static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                             static_cast<std::uint32_t>(stream_id_),
                             static_cast<std::uint32_t>(stream_id_ >> 32)};
    ++counter_;
    return philox4x32(ctr, {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
  }
  // Bytes of a block in little-endian order of its words.
  unsigned next_byte() {
    if (byte_pos_ == 16) {
      const PhiloxBlock b = block();
      bytes_[0] = static_cast<std::uint64_t>(b[1]) << 32 | b[0];
      bytes_[1] = static_cast<std::uint64_t>(b[3]) << 32 | b[2];
      byte_pos_ = 0;
    }
    const unsigned v = (bytes_[byte_pos_ >> 3] >> ((byte_pos_ & 7) * 8)) & 0xFFu;
    ++byte_pos_;
    return v;
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_ = 0;
  PhiloxBlock words_{};
  unsigned word_pos_ = 4;
  std::uint64_t bits_ = 0;
  unsigned bit_count_ = 0;
  std::uint64_t bytes_[2] = {};
  unsigned byte_pos_ = 16;
};

// Streams for a family of episodes: episode i gets stream (family << 40) | i.
inline std::uint64_t episode_stream(std::uint64_t family, std::uint64_t episode) {
  return (family << 40) | (episode & ((std::uint64_t{1} << 40) - 1));
}

}  // namespace owk
