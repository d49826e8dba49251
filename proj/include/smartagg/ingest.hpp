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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smartagg/random.hpp"

namespace smartagg::ingest {

inline constexpr std::uint32_t kDefaultIntervalSeconds = 900;
inline constexpr std::size_t kIntervalsPerDay = 96;

struct Reading {
  std::uint64_t interval_index = 0;
  double active_kwh = 0.0;
  std::optional<double> reactive_kvarh;

  friend bool operator==(const Reading&, const Reading&) = default;
};

/// Readings of one meter; interval indices are strictly increasing and
/// contiguous.
struct ReadingSeries {
  std::string meter_id;
  std::uint32_t interval_seconds = kDefaultIntervalSeconds;
  std::vector<Reading> readings;

  friend bool operator==(const ReadingSeries&, const ReadingSeries&) = default;
};

/// Expected CSV layout: meter_id,timestamp_iso8601,active_kwh[,reactive_kvarh]
struct CsvSchema {
  /// nullopt accepts both header variants.
  std::optional<bool> reactive_column;
  std::uint32_t interval_seconds = kDefaultIntervalSeconds;
};

/// Seconds since the Unix epoch for "YYYY-MM-DDTHH:MM:SS" with an optional
/// "Z" or "+00:00" suffix.
std::int64_t ParseTimestamp(std::string_view text);
std::string FormatTimestamp(std::int64_t epoch_seconds);

/// Parses readings grouped by meter (first-appearance order). Interval
/// indices are epoch seconds / interval_seconds. Throws kParseError with the
/// line number for malformed rows and kGapError naming missing intervals.
std::vector<ReadingSeries> ParseReadings(std::istream& in,
                                         const CsvSchema& schema = {},
                                         std::string_view source = "<stream>");
std::vector<ReadingSeries> LoadReadings(const std::filesystem::path& path,
                                        const CsvSchema& schema = {});

/// Inverse of ParseReadings. The reactive column is written when any
/// reading carries a value.
void WriteReadings(std::ostream& out, std::span<const ReadingSeries> series);

/// Shape of the synthetic residential load profile (kWh per interval).
struct ProfileParams {
  double base_kwh = 0.08;
  double morning_amplitude_kwh = 0.22;
  double morning_center_hour = 7.5;
  double morning_width_hours = 1.0;
  double evening_amplitude_kwh = 0.40;
  double evening_center_hour = 19.5;
  double evening_width_hours = 1.6;
  double jitter_sigma_kwh = 0.03;
};

/// Synthetic 15-minute load curves: base load plus morning and evening
/// activity bumps plus per-meter jitter, rounded to whole Wh and clamped at
/// zero. A pure function of its arguments.
std::vector<ReadingSeries> SynthesizeReadings(std::size_t meter_count,
                                              std::size_t intervals,
                                              const Seed256& profile_seed,
                                              const ProfileParams& params = {});

/// All active readings of all series, series by series.
std::vector<double> PooledReadings(std::span<const ReadingSeries> series);

/// Population standard deviation.
double StandardDeviation(std::span<const double> values);

}  // namespace smartagg::ingest
