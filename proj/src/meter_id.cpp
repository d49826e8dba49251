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

#include "smartagg/meter_id.hpp"

#include <cstdio>

#include "smartagg/error.hpp"

namespace smartagg {

MeterId MeterId::FromString(std::string_view text) {
  if (text.empty() || text.size() > 16) {
    throw Error(ErrorCode::kInvalidArgument,
                "meter id must be 1..16 bytes: '" + std::string(text) + "'");
  }
  MeterId id;
  for (std::size_t i = 0; i < text.size(); ++i) {
    id.bytes[i] = static_cast<std::uint8_t>(text[i]);
  }
  return id;
}

MeterId MeterId::FromIndex(std::uint32_t index) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "SM%06u", index);
  return FromString(buf);
}

std::string MeterId::ToString() const {
  std::string out;
  for (std::uint8_t b : bytes) {
    if (b == 0) break;
    out.push_back(static_cast<char>(b));
  }
  return out;
}

std::uint64_t MeterId::High() const {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | bytes[i];
  return v;
}

std::uint64_t MeterId::Low() const {
  std::uint64_t v = 0;
  for (int i = 8; i < 16; ++i) v = (v << 8) | bytes[i];
  return v;
}

}  // namespace smartagg
