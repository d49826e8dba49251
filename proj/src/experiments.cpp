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

#include "smartagg/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "smartagg/error.hpp"
#include "smartagg/protocol.hpp"
#include "smartagg/simnet.hpp"

namespace smartagg::experiments {
namespace {

std::ofstream OpenOutput(const RunConfig& cfg, const char* name) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError, "cannot create " + cfg.out_dir.string() +
                                         ": " + ec.message());
  }
  const std::filesystem::path path = cfg.out_dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

// Exact decimal rendering of a signed fixed-point amount.
std::string FormatUnits(const paillier::BigInt& units, std::uint64_t scale) {
  const bool negative = units < 0;
  const paillier::BigInt magnitude = abs(units);
  const paillier::BigInt whole = magnitude / static_cast<unsigned long>(scale);
  const paillier::BigInt frac = magnitude % static_cast<unsigned long>(scale);
  std::string out = (negative ? "-" : "") + whole.get_str();
  std::size_t digits = 0;
  for (std::uint64_t s = scale; s > 1; s /= 10) ++digits;
  if (digits > 0) {
    std::string f = frac.get_str();
    out += "." + std::string(digits - f.size(), '0') + f;
  }
  return out;
}

}  // namespace

std::vector<ingest::ReadingSeries> LoadOrSynthesize(const RunConfig& cfg) {
  if (cfg.readings_csv) return ingest::LoadReadings(*cfg.readings_csv);
  return ingest::SynthesizeReadings(cfg.meters, cfg.intervals,
                                    cfg.ProfileSeed(), cfg.profile);
}

double NoiseSigma(const RunConfig& /*cfg*/,
                  const std::vector<ingest::ReadingSeries>& series,
                  double sigma_scale) {
  const std::vector<double> pooled = ingest::PooledReadings(series);
  return sigma_scale * ingest::StandardDeviation(pooled);
}

void CmdRun(const RunConfig& cfg, std::ostream& log) {
  cfg.Validate();
  const std::vector<ingest::ReadingSeries> series = LoadOrSynthesize(cfg);
  const double sigma = NoiseSigma(cfg, series, cfg.sigma_scale.value);

  std::vector<MeterId> ids;
  for (const ingest::ReadingSeries& s : series) {
    ids.push_back(MeterId::FromString(s.meter_id));
  }
  const protocol::Deployment deployment = protocol::Deployment::Create(
      cfg.domain, ids, cfg.key_bits, cfg.KeygenSeed());
  const protocol::RoundSeeds seeds{cfg.SelectionSeed(), cfg.NoiseSeed(),
                                   cfg.NonceSeed()};

  // Intervals come from the first meter's window; every other meter must
  // report for each of them or the round aborts.
  std::vector<std::uint64_t> intervals;
  for (const ingest::Reading& r : series.front().readings) {
    if (intervals.size() == cfg.intervals) break;
    intervals.push_back(r.interval_index);
  }

  std::ofstream aggregates = OpenOutput(cfg, "aggregates.csv");
  std::ofstream transcript = OpenOutput(cfg, "transcript.csv");
  std::ofstream deliveries = OpenOutput(cfg, "deliveries.csv");
  aggregates << "interval,domain,kwh\n";
  transcript << "interval,seq,type,from,to,wire_hex\n";
  simnet::WriteDeliveryCsv(deliveries, {}, true);

  simnet::Network network;
  for (std::uint64_t interval : intervals) {
    std::map<MeterId, protocol::MeterRecord> readings;
    for (std::size_t k = 0; k < series.size(); ++k) {
      for (const ingest::Reading& r : series[k].readings) {
        if (r.interval_index != interval) continue;
        readings[ids[k]] = protocol::MeterRecord{
            interval * series[k].interval_seconds, 0.0,
            r.reactive_kvarh.value_or(0.0), r.active_kwh};
        break;
      }
    }
    protocol::RoundResult result;
    try {
      const protocol::RoundConfig round = protocol::MakeRoundConfig(
          deployment, static_cast<std::uint32_t>(interval), seeds, sigma,
          cfg.scale, cfg.transform);
      result = protocol::RunRound(deployment, round, readings, network,
                                  cfg.links);
    } catch (const Error& e) {
      throw Error(e.code(), "interval " + std::to_string(interval) + ": " +
                                e.what());
    }
    const std::string kwh = FormatUnits(result.aggregate_units, cfg.scale);
    aggregates << interval << ',' << cfg.domain << ',' << kwh << '\n';
    transcript << protocol::FormatTranscript(result.transcript);
    simnet::WriteDeliveryCsv(deliveries, network.records(), false);
    network.ClearRecords();
    log << "interval " << interval << " domain " << cfg.domain
        << " aggregate " << kwh << " kWh\n";
  }
}

std::vector<metrics::TimingBreakdown> CmdBench(const RunConfig& cfg,
                                               std::ostream& log) {
  cfg.Validate();
  const std::vector<ingest::ReadingSeries> series =
      ingest::SynthesizeReadings(cfg.meters, cfg.intervals, cfg.ProfileSeed(),
                                 cfg.profile);
  const double sigma = NoiseSigma(cfg, series, cfg.sigma_scale.value);

  std::vector<MeterId> ids;
  std::map<MeterId, double> readings;
  for (const ingest::ReadingSeries& s : series) {
    ids.push_back(MeterId::FromString(s.meter_id));
    readings[ids.back()] = s.readings.front().active_kwh;
  }
  const protocol::RoundSeeds seeds{cfg.SelectionSeed(), cfg.NoiseSeed(),
                                   cfg.NonceSeed()};

  std::vector<metrics::TimingBreakdown> rows;
  char line[160];
  std::snprintf(line, sizeof(line), "%-9s %12s %12s %12s %12s %12s\n",
                "key_bits", "t_sm_sel", "t_sm", "t_agg", "t_up", "t_op");
  log << line;
  for (unsigned bits : cfg.bench_key_bits) {
    const protocol::Deployment deployment = protocol::Deployment::Create(
        cfg.domain, ids, bits, cfg.KeygenSeed());
    const protocol::RoundConfig round = protocol::MakeRoundConfig(
        deployment, 0, seeds, sigma, cfg.scale, cfg.transform);
    rows.push_back(metrics::BenchmarkRound(deployment, round, readings,
                                           cfg.bench_repetitions));
    const metrics::TimingBreakdown& t = rows.back();
    std::snprintf(line, sizeof(line),
                  "%-9u %12.5f %12.5f %12.5f %12.5f %12.5f\n", bits,
                  t.t_sm_sel, t.t_sm, t.t_agg, t.t_up, t.t_op);
    log << line;
  }
  std::ofstream timing = OpenOutput(cfg, "timing.csv");
  metrics::WriteTimingCsv(timing, rows);

  const metrics::MemoryEstimate memory = metrics::EstimateMemory(
      metrics::SizeTable::ForKeyBits(cfg.key_bits), cfg.meters);
  std::ofstream mem = OpenOutput(cfg, "memory.csv");
  metrics::WriteMemoryCsv(mem, memory);
  log << "memory estimate at " << cfg.key_bits << " bits, M=" << cfg.meters
      << ": " << memory.s_op << " bytes\n";
  return rows;
}

std::vector<metrics::NcePoint> CmdPrivacy(const RunConfig& cfg,
                                          std::ostream& log) {
  cfg.Validate();
  const std::vector<ingest::ReadingSeries> series = LoadOrSynthesize(cfg);
  std::vector<metrics::NcePoint> rows;
  for (const SigmaScale& s : cfg.privacy_scales) {
    const double sigma = NoiseSigma(cfg, series, s.value);
    const metrics::PerturbedView view = metrics::PerturbReadings(
        series, sigma, cfg.scale, cfg.transform, cfg.NoiseSeed());
    double nce;
    try {
      nce = metrics::Nce(view.original, view.perturbed, cfg.nce_bins);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUndefinedMetric) throw;
      throw Error(ErrorCode::kUndefinedMetric,
                  std::string(e.what()) +
                      "; the readings are constant, supply a dataset with "
                      "varying consumption or more bins");
    }
    rows.push_back(metrics::NcePoint{s.label, nce});
    log << "sigma x " << s.label << " (" << sigma << " kWh): NCE " << nce
        << '\n';
  }
  std::ofstream out = OpenOutput(cfg, "nce.csv");
  metrics::WriteNceCsv(out, rows);
  return rows;
}

void CmdComm(const RunConfig& cfg, std::ostream& log) {
  cfg.Validate();
  std::ofstream out = OpenOutput(cfg, "comm.csv");
  out << "payload,payload_bytes,hop,frame_bytes,seconds\n";

  const simnet::PathModel nan = simnet::NeighborhoodPath(cfg.links);
  const simnet::PathModel wan = simnet::WidePath(cfg.links);
  const std::pair<const char*, std::uint64_t> payloads[] = {
      {"P_id_sel", cfg.payloads.id_sel},
      {"P_noise_total", cfg.payloads.noise_total},
      {"P_noise", cfg.payloads.noise},
      {"P_noisy_reading", cfg.payloads.noisy_reading},
      {"P_aggregate", cfg.payloads.aggregate}};

  auto emit = [&](const char* name, std::uint64_t bytes,
                  const simnet::Hop& hop) {
    const std::uint64_t frame = simnet::FrameSize(bytes, hop.link);
    const std::string secs = simnet::FormatSeconds(simnet::TransmissionTime(
        frame, hop.link.per_meter_bandwidth_bps));
    out << name << ',' << bytes << ',' << hop.name << ',' << frame << ','
        << secs << '\n';
    log << name << " (" << bytes << " B) over " << hop.name << ": " << frame
        << " B, " << secs << " s\n";
  };
  for (const auto& [name, bytes] : payloads) emit(name, bytes, nan.hops[0]);
  for (const simnet::Hop& hop : wan.hops) {
    emit("P_aggregate", cfg.payloads.aggregate, hop);
  }

  const std::vector<std::uint64_t> all = cfg.payloads.All();
  const std::uint64_t min_bw = simnet::MinBandwidth(all, cfg.meters);
  std::ofstream bw = OpenOutput(cfg, "bandwidth.csv");
  bw << "meters,max_payload_bytes,min_bandwidth_bytes\n"
     << cfg.meters << ',' << *std::max_element(all.begin(), all.end()) << ','
     << min_bw << '\n';
  log << "minimum bandwidth per interval for " << cfg.meters
      << " meters: " << min_bw << " B\n";
}

}  // namespace smartagg::experiments
