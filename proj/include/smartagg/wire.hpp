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

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "smartagg/meter_id.hpp"

namespace smartagg::protocol {

enum class MessageType : std::uint8_t {
  kSelect = 1,        // AGG -> SMs: id_sel || t_i
  kNoiseTotal = 2,    // AGG -> SM_sel: folded noise ciphertext
  kNoise = 3,         // SM -> AGG: noise under the designated meter's key
  kNoisyReading = 4,  // SM -> AGG: noisy reading under the utility key
  kAggregate = 5,     // AGG -> UP: folded noisy readings
};

std::string_view MessageTypeName(MessageType type);

/// tag (1) || interval u32 || sender (16) || payload length u32 || payload.
/// Multi-byte integers are big-endian.
struct WireMessage {
  MessageType type = MessageType::kSelect;
  std::uint32_t interval = 0;
  MeterId sender;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

inline constexpr std::size_t kWireHeaderBytes = 1 + 4 + 16 + 4;

std::vector<std::uint8_t> EncodeMessage(const WireMessage& message);
/// Throws kParseError on truncated input, trailing bytes or unknown tags.
WireMessage DecodeMessage(std::span<const std::uint8_t> bytes);

}  // namespace smartagg::protocol
