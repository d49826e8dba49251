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

#include <boost/rational.hpp>

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace smartagg::simnet {

/// Simulated time, kept as an exact rational number of seconds.
using Seconds = boost::rational<std::int64_t>;

std::string FormatSeconds(const Seconds& s, int decimals = 5);

enum class Stack { kWiSun802154g, kLtePdcp, kEthernet8023 };

/// Analytical link layer: payload -> frame bytes -> seconds.
struct LinkModel {
  Stack stack = Stack::kWiSun802154g;
  std::uint64_t base_header_bytes = 0;
  std::uint64_t per_fragment_header_bytes = 0;
  std::uint64_t max_fragment_payload_bytes = 1;
  std::int64_t bandwidth_bps = 1;
  std::int64_t per_meter_bandwidth_bps = 1;

  /// Throws kInvalidArgument when the parameters are unusable.
  void Validate() const;
};

struct Hop {
  std::string name;
  LinkModel link;
};

struct PathModel {
  std::vector<Hop> hops;

  /// Hop names must be unique.
  void Validate() const;
};

/// The four links of the deployment. Shared bandwidth is divided evenly
/// among `meter_count` meters to obtain the per-meter share.
struct LinkProfile {
  LinkModel nan;        // SM <-> AGG, 6LoWPAN over IEEE 802.15.4g
  LinkModel lte;        // AGG <-> eNB, PDCP
  LinkModel eth_core;   // eNB <-> PGW, with GTP-U encapsulation
  LinkModel eth_edge;   // PGW <-> UP

  static LinkProfile Default(std::uint64_t meter_count = 20);
  /// Recomputes per-meter shares from the shared bandwidths.
  void SetMeterCount(std::uint64_t meter_count);
};

inline constexpr const char* kHopSmAgg = "SM-AGG";
inline constexpr const char* kHopAggEnb = "AGG-eNB";
inline constexpr const char* kHopEnbPgw = "eNB-PGW";
inline constexpr const char* kHopPgwUp = "PGW-UP";

PathModel NeighborhoodPath(const LinkProfile& links);
PathModel WidePath(const LinkProfile& links);
PathModel FullPath(const LinkProfile& links);

/// payload + base header + ceil(payload / max fragment) * fragment header.
std::uint64_t FrameSize(std::uint64_t payload_bytes, const LinkModel& link);

/// frame_bytes * 8 / bandwidth, exact.
Seconds TransmissionTime(std::uint64_t frame_bytes, std::int64_t bandwidth_bps);

/// Minimum per-interval bandwidth in bytes: max(payloads) * meter_count.
std::uint64_t MinBandwidth(std::span<const std::uint64_t> payload_sizes,
                           std::uint64_t meter_count);

/// Protocol payload sizes used for link accounting, one per message type.
struct PayloadSizes {
  std::uint64_t id_sel = 16;
  std::uint64_t noise_total = 512;
  std::uint64_t noise = 512;
  std::uint64_t noisy_reading = 512;
  std::uint64_t aggregate = 512;

  std::vector<std::uint64_t> All() const {
    return {id_sel, noise_total, noise, noisy_reading, aggregate};
  }
};

struct Envelope {
  std::uint64_t round = 0;
  std::string message_type;
  std::string sender;
  std::uint64_t payload_bytes = 0;
};

struct DeliveryRecord {
  std::uint64_t round = 0;
  std::string message_type;
  std::string hop;
  std::uint64_t payload_bytes = 0;
  std::uint64_t frame_bytes = 0;
  Seconds seconds;
};

struct Delivery {
  std::uint64_t sequence = 0;  // per-sender, starting at 0
  Seconds sent_at;
  Seconds arrived_at;
  std::vector<DeliveryRecord> hops;
};

/// Reliable in-order transport over analytical links with a single
/// simulated clock. No loss, jitter or contention.
class Network {
 public:
  Delivery Deliver(const Envelope& envelope, const PathModel& path);

  const Seconds& now() const { return clock_; }
  const std::vector<DeliveryRecord>& records() const { return records_; }
  void ClearRecords() { records_.clear(); }

 private:
  Seconds clock_{0};
  std::map<std::string, std::uint64_t> next_sequence_;
  std::vector<DeliveryRecord> records_;
};

/// round,message_type,hop,payload_bytes,frame_bytes,seconds
void WriteDeliveryCsv(std::ostream& os,
                      std::span<const DeliveryRecord> records,
                      bool header = true);

}  // namespace smartagg::simnet
