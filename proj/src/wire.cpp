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

#include "smartagg/wire.hpp"

#include <string>

#include "smartagg/error.hpp"

namespace smartagg::protocol {
namespace {

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

std::uint32_t GetU32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) v = (v << 8) | bytes[at + i];
  return v;
}

}  // namespace

std::string_view MessageTypeName(MessageType type) {
  switch (type) {
    case MessageType::kSelect: return "SELECT";
    case MessageType::kNoiseTotal: return "NOISE_TOTAL";
    case MessageType::kNoise: return "NOISE";
    case MessageType::kNoisyReading: return "NOISY_READING";
    case MessageType::kAggregate: return "AGGREGATE";
  }
  return "UNKNOWN";
}

std::vector<std::uint8_t> EncodeMessage(const WireMessage& message) {
  std::vector<std::uint8_t> out;
  out.reserve(kWireHeaderBytes + message.payload.size());
  out.push_back(static_cast<std::uint8_t>(message.type));
  PutU32(out, message.interval);
  out.insert(out.end(), message.sender.bytes.begin(),
             message.sender.bytes.end());
  PutU32(out, static_cast<std::uint32_t>(message.payload.size()));
  out.insert(out.end(), message.payload.begin(), message.payload.end());
  return out;
}

WireMessage DecodeMessage(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kWireHeaderBytes) {
    throw Error(ErrorCode::kParseError, "wire message shorter than header");
  }
  const std::uint8_t tag = bytes[0];
  if (tag < 1 || tag > 5) {
    throw Error(ErrorCode::kParseError,
                "unknown message tag " + std::to_string(tag));
  }
  WireMessage message;
  message.type = static_cast<MessageType>(tag);
  message.interval = GetU32(bytes, 1);
  for (std::size_t i = 0; i < 16; ++i) message.sender.bytes[i] = bytes[5 + i];
  const std::uint32_t length = GetU32(bytes, 21);
  if (bytes.size() - kWireHeaderBytes != length) {
    throw Error(ErrorCode::kParseError, "payload length mismatch");
  }
  message.payload.assign(bytes.begin() + kWireHeaderBytes, bytes.end());
  return message;
}

}  // namespace smartagg::protocol
