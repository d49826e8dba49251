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

#include "smartagg/simnet.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "smartagg/error.hpp"

namespace smartagg::simnet {
namespace {

constexpr std::int64_t kNanBandwidthBps = 250'000;
constexpr std::int64_t kWanBandwidthBps = 1'000'000;

LinkModel MakeLink(Stack stack, std::uint64_t base, std::uint64_t per_fragment,
                   std::uint64_t max_fragment, std::int64_t bandwidth) {
  return LinkModel{stack, base, per_fragment, max_fragment, bandwidth,
                   bandwidth};
}

}  // namespace

std::string FormatSeconds(const Seconds& s, int decimals) {
  // Round half away from zero at the requested number of decimals.
  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const Seconds scaled = s * scale;
  const bool negative = scaled < 0;
  const std::int64_t num = negative ? -scaled.numerator() : scaled.numerator();
  const std::int64_t den = scaled.denominator();
  std::int64_t units = num / den;
  if (2 * (num % den) >= den) ++units;

  std::ostringstream os;
  if (negative) os << '-';
  os << units / scale;
  if (decimals > 0) {
    std::string frac = std::to_string(units % scale);
    os << '.' << std::string(decimals - frac.size(), '0') << frac;
  }
  return os.str();
}

void LinkModel::Validate() const {
  if (max_fragment_payload_bytes == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "max_fragment_payload_bytes must be positive");
  }
  if (bandwidth_bps <= 0 || per_meter_bandwidth_bps <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "bandwidth must be positive");
  }
  if (per_meter_bandwidth_bps > bandwidth_bps) {
    throw Error(ErrorCode::kInvalidArgument,
                "per-meter bandwidth exceeds link bandwidth");
  }
}

void PathModel::Validate() const {
  std::set<std::string> names;
  for (const Hop& hop : hops) {
    if (!names.insert(hop.name).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate hop name '" + hop.name + "'");
    }
    hop.link.Validate();
  }
}

LinkProfile LinkProfile::Default(std::uint64_t meter_count) {
  LinkProfile p;
  // Header parameters fitted to the measured frame sizes: 16 B -> 45 B and
  // 512 B -> 661 B on Wi-SUN; 512 B -> 566 / 634 / 578 B on the WAN hops.
  p.nan = MakeLink(Stack::kWiSun802154g, 5, 24, 96, kNanBandwidthBps);
  p.lte = MakeLink(Stack::kLtePdcp, 40, 14, 1400, kWanBandwidthBps);
  p.eth_core = MakeLink(Stack::kEthernet8023, 104, 18, 1400, kWanBandwidthBps);
  p.eth_edge = MakeLink(Stack::kEthernet8023, 48, 18, 1452, kWanBandwidthBps);
  p.SetMeterCount(meter_count);
  return p;
}

void LinkProfile::SetMeterCount(std::uint64_t meter_count) {
  if (meter_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "meter count must be positive");
  }
  for (LinkModel* link : {&nan, &lte, &eth_core, &eth_edge}) {
    link->per_meter_bandwidth_bps =
        link->bandwidth_bps / static_cast<std::int64_t>(meter_count);
  }
}

PathModel NeighborhoodPath(const LinkProfile& links) {
  return PathModel{{{kHopSmAgg, links.nan}}};
}

PathModel WidePath(const LinkProfile& links) {
  return PathModel{{{kHopAggEnb, links.lte},
                    {kHopEnbPgw, links.eth_core},
                    {kHopPgwUp, links.eth_edge}}};
}

PathModel FullPath(const LinkProfile& links) {
  PathModel path = NeighborhoodPath(links);
  for (Hop& hop : WidePath(links).hops) path.hops.push_back(std::move(hop));
  return path;
}

std::uint64_t FrameSize(std::uint64_t payload_bytes, const LinkModel& link) {
  if (payload_bytes == 0) {
    throw Error(ErrorCode::kInvalidArgument, "payload must be at least 1 byte");
  }
  link.Validate();
  const std::uint64_t fragments =
      (payload_bytes + link.max_fragment_payload_bytes - 1) /
      link.max_fragment_payload_bytes;
  return payload_bytes + link.base_header_bytes +
         fragments * link.per_fragment_header_bytes;
}

Seconds TransmissionTime(std::uint64_t frame_bytes,
                         std::int64_t bandwidth_bps) {
  if (bandwidth_bps <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "bandwidth must be positive");
  }
  return Seconds(static_cast<std::int64_t>(frame_bytes) * 8, bandwidth_bps);
}

std::uint64_t MinBandwidth(std::span<const std::uint64_t> payload_sizes,
                           std::uint64_t meter_count) {
  if (payload_sizes.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no payload sizes given");
  }
  return *std::max_element(payload_sizes.begin(), payload_sizes.end()) *
         meter_count;
}

Delivery Network::Deliver(const Envelope& envelope, const PathModel& path) {
  path.Validate();
  Delivery delivery;
  delivery.sequence = next_sequence_[envelope.sender]++;
  delivery.sent_at = clock_;
  for (const Hop& hop : path.hops) {
    DeliveryRecord record;
    record.round = envelope.round;
    record.message_type = envelope.message_type;
    record.hop = hop.name;
    record.payload_bytes = envelope.payload_bytes;
    record.frame_bytes = FrameSize(envelope.payload_bytes, hop.link);
    record.seconds =
        TransmissionTime(record.frame_bytes, hop.link.per_meter_bandwidth_bps);
    clock_ += record.seconds;
    records_.push_back(record);
    delivery.hops.push_back(std::move(record));
  }
  delivery.arrived_at = clock_;
  return delivery;
}

void WriteDeliveryCsv(std::ostream& os,
                      std::span<const DeliveryRecord> records, bool header) {
  if (header) {
    os << "round,message_type,hop,payload_bytes,frame_bytes,seconds\n";
  }
  for (const DeliveryRecord& r : records) {
    os << r.round << ',' << r.message_type << ',' << r.hop << ','
       << r.payload_bytes << ',' << r.frame_bytes << ','
       << FormatSeconds(r.seconds) << '\n';
  }
}

}  // namespace smartagg::simnet
