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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smartagg/ingest.hpp"
#include "smartagg/noise.hpp"
#include "smartagg/random.hpp"
#include "smartagg/simnet.hpp"

namespace smartagg {

/// A noise multiplier kept with its textual form ("1/9", "3").
struct SigmaScale {
  std::string label;
  double value = 1.0;
};

/// Parses "a", "a/b" or a decimal into a non-negative SigmaScale.
SigmaScale ParseSigmaScale(std::string_view text);

/// The seven multipliers swept by the privacy experiment.
std::vector<SigmaScale> DefaultSigmaSweep();

struct RunConfig {
  unsigned key_bits = 1024;
  std::size_t meters = 20;
  std::size_t intervals = 96;
  std::uint64_t scale = 1000;
  std::string domain = "D1";
  SigmaScale sigma_scale{"1", 1.0};
  noise::Transform transform = noise::Transform::kBoxMuller;

  Seed256 master_seed = Seed256::FromHex("5eed");
  std::optional<Seed256> keygen_seed;
  std::optional<Seed256> selection_seed;
  std::optional<Seed256> noise_seed;
  std::optional<Seed256> profile_seed;

  std::optional<std::filesystem::path> readings_csv;
  ingest::ProfileParams profile;
  simnet::LinkProfile links = simnet::LinkProfile::Default(20);
  simnet::PayloadSizes payloads;
  std::filesystem::path out_dir = "out";

  std::vector<unsigned> bench_key_bits{128, 256, 512, 1024, 2048};
  std::size_t bench_repetitions = 5;
  std::vector<SigmaScale> privacy_scales = DefaultSigmaSweep();
  std::size_t nce_bins = 64;

  Seed256 KeygenSeed() const;
  Seed256 SelectionSeed() const;
  Seed256 NoiseSeed() const;
  Seed256 ProfileSeed() const;
  Seed256 NonceSeed() const;

  /// Throws kConfigError on inconsistent values.
  void Validate() const;
};

/// Applies an INI-style key=value file on top of `base`. Sections map to
/// dotted keys (e.g. [noise] transform = ... is noise.transform).
RunConfig LoadConfigFile(const std::filesystem::path& path,
                         RunConfig base = {});

}  // namespace smartagg
