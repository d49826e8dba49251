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
#include <string>
#include <string_view>

namespace smartagg {

/// Opaque 16-byte entity identifier. Textual ids up to 16 bytes are stored
/// left-aligned and zero-padded.
struct MeterId {
  std::array<std::uint8_t, 16> bytes{};

  static MeterId FromString(std::string_view text);
  /// "SM" followed by a zero-padded decimal index, e.g. SM000042.
  static MeterId FromIndex(std::uint32_t index);

  std::string ToString() const;
  std::uint64_t High() const;  // bytes 0..7, big-endian
  std::uint64_t Low() const;   // bytes 8..15, big-endian

  friend auto operator<=>(const MeterId&, const MeterId&) = default;
};

}  // namespace smartagg
