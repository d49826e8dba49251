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

#include "smartagg/random.hpp"

#include <cctype>

#include "smartagg/error.hpp"

namespace smartagg {
namespace {

constexpr std::uint64_t kParity = 0x1BD11BDAA9FC1A22ULL;
constexpr int kRounds = 20;
constexpr int kRotations[8][2] = {{14, 16}, {52, 57}, {23, 40}, {5, 37},
                                  {25, 33}, {46, 12}, {58, 22}, {32, 32}};

constexpr std::uint64_t Rotl(std::uint64_t x, int r) {
  return (x << r) | (x >> (64 - r));
}

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Block256 Threefry4x64(const Block256& counter, const Block256& key) {
  std::uint64_t ks[5];
  ks[4] = kParity;
  for (int i = 0; i < 4; ++i) {
    ks[i] = key[i];
    ks[4] ^= key[i];
  }

  Block256 x;
  for (int i = 0; i < 4; ++i) x[i] = counter[i] + ks[i];

  for (int round = 0; round < kRounds; ++round) {
    const int* rot = kRotations[round % 8];
    if (round % 2 == 0) {
      x[0] += x[1]; x[1] = Rotl(x[1], rot[0]); x[1] ^= x[0];
      x[2] += x[3]; x[3] = Rotl(x[3], rot[1]); x[3] ^= x[2];
    } else {
      x[0] += x[3]; x[3] = Rotl(x[3], rot[0]); x[3] ^= x[0];
      x[2] += x[1]; x[1] = Rotl(x[1], rot[1]); x[1] ^= x[2];
    }
    if (round % 4 == 3) {
      const std::uint64_t s = static_cast<std::uint64_t>(round / 4 + 1);
      for (int i = 0; i < 4; ++i) x[i] += ks[(s + i) % 5];
      x[3] += s;
    }
  }
  return x;
}

Seed256 Seed256::FromHex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty() || hex.size() > 64) {
    throw Error(ErrorCode::kInvalidArgument,
                "seed must have 1..64 hex digits, got " +
                    std::to_string(hex.size()));
  }
  Seed256 seed;
  // Walk from the least significant digit.
  std::size_t nibble = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, ++nibble) {
    const int v = HexValue(*it);
    if (v < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "non-hex character in seed: '" + std::string(1, *it) + "'");
    }
    const std::size_t word = 3 - nibble / 16;
    seed.words[word] |= static_cast<std::uint64_t>(v) << (4 * (nibble % 16));
  }
  return seed;
}

std::string Seed256::ToHex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint64_t w : words) {
    for (int shift = 60; shift >= 0; shift -= 4) {
      out.push_back(kDigits[(w >> shift) & 0xf]);
    }
  }
  return out;
}

Seed256 Seed256::Derive(std::uint64_t tag) const {
  return Seed256{Threefry4x64({tag, ~tag, 0x5eedULL, 0}, words)};
}

CounterRng::CounterRng(const Seed256& seed, std::uint64_t domain0,
                       std::uint64_t domain1, std::uint64_t domain2)
    : key_(seed.words), counter_{domain0, domain1, domain2, 0} {}

std::uint64_t CounterRng::NextU64() {
  const std::uint64_t lane = position_ % 4;
  if (lane == 0) {
    counter_[3] = position_ / 4;
    buffer_ = Threefry4x64(counter_, key_);
  }
  ++position_;
  return buffer_[lane];
}

void CounterRng::Fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t w = NextU64();
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(w >> (8 * b));
    }
  }
}

std::uint64_t CounterRng::UniformBelow(std::uint64_t bound) {
  if (bound == 0) {
    throw Error(ErrorCode::kInvalidArgument, "UniformBelow bound must be > 0");
  }
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  std::uint64_t v;
  do {
    v = NextU64();
  } while (v > limit);
  return v % bound;
}

}  // namespace smartagg
