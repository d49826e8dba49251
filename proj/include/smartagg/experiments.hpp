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

#include <iosfwd>
#include <vector>

#include "smartagg/config.hpp"
#include "smartagg/ingest.hpp"
#include "smartagg/metrics.hpp"

namespace smartagg::experiments {

/// Readings from cfg.readings_csv when set, synthetic profiles otherwise.
std::vector<ingest::ReadingSeries> LoadOrSynthesize(const RunConfig& cfg);

/// Noise standard deviation in kWh: sigma_scale times the standard deviation
/// of all readings in the calibration window.
double NoiseSigma(const RunConfig& cfg,
                  const std::vector<ingest::ReadingSeries>& series,
                  double sigma_scale);

/// One protocol round per interval. Writes aggregates.csv, transcript.csv
/// and deliveries.csv to cfg.out_dir and prints per-interval totals.
void CmdRun(const RunConfig& cfg, std::ostream& log);

/// Timing grid over cfg.bench_key_bits (timing.csv) and the analytical
/// memory estimate for cfg.key_bits (memory.csv).
std::vector<metrics::TimingBreakdown> CmdBench(const RunConfig& cfg,
                                               std::ostream& log);

/// NCE for each configured sigma multiplier (nce.csv).
std::vector<metrics::NcePoint> CmdPrivacy(const RunConfig& cfg,
                                          std::ostream& log);

/// Frame sizes and transmission times for every protocol payload on every
/// link it crosses (comm.csv), plus the minimum bandwidth (bandwidth.csv).
void CmdComm(const RunConfig& cfg, std::ostream& log);

}  // namespace smartagg::experiments
