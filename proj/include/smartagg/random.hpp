/*
 * Copyright 2026 The smartagg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>

namespace smartagg {

using Block256 = std::array<std::uint64_t, 4>;

/// Threefry-4x64 with 20 rounds (Random123 parameters). A keyed bijection on
/// 256-bit counters; every output is a pure function of (counter, key).
Block256 Threefry4x64(const Block256& counter, const Block256& key);

/// 256-bit seed. words[0] holds the most significant 64 bits of the hex form.
struct Seed256 {
  Block256 words{};

  /// Accepts 1..64 hex digits (optional 0x prefix); shorter input is
  /// left-padded with zeros.
  static Seed256 FromHex(std::string_view hex);
  std::string ToHex() const;

  /// Independent child seed for a named purpose.
  Seed256 Derive(std::uint64_t tag) const;

  friend bool operator==(const Seed256&, const Seed256&) = default;
};

// Domain tags used to split one master seed into per-purpose streams.
namespace seed_tag {
inline constexpr std::uint64_t kKeygen = 0x6b657967656e0001ULL;
inline constexpr std::uint64_t kSelection = 0x73656c6563740002ULL;
inline constexpr std::uint64_t kNoise = 0x6e6f697365000003ULL;
inline constexpr std::uint64_t kProfile = 0x70726f66696c0004ULL;
inline constexpr std::uint64_t kNonce = 0x6e6f6e6365000005ULL;
}  // namespace seed_tag

/// Sequential view over counter-mode Threefry. The first three counter words
/// are a caller-chosen domain; the last one indexes 256-bit blocks.
/// Satisfies std::uniform_random_bit_generator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(const Seed256& seed, std::uint64_t domain0 = 0,
                      std::uint64_t domain1 = 0, std::uint64_t domain2 = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return NextU64(); }

  std::uint64_t NextU64();
  void Fill(std::span<std::uint8_t> out);
  /// Unbiased integer in [0, bound). bound must be nonzero.
  std::uint64_t UniformBelow(std::uint64_t bound);

  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const { return position_; }

 private:
  Block256 key_;
  Block256 counter_;
  Block256 buffer_{};
  std::uint64_t position_ = 0;
};

}  // namespace smartagg
