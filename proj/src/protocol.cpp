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

#include "smartagg/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "smartagg/error.hpp"

namespace smartagg::protocol {
namespace {

constexpr std::uint64_t kKeygenDomain = 0x6b657973ULL;  // "keys"

std::string Name(const MeterId& id) { return id.ToString(); }

std::vector<std::uint8_t> IdPayload(const MeterId& id) {
  return {id.bytes.begin(), id.bytes.end()};
}

}  // namespace

MeterId AggregatorId() { return MeterId::FromString("AGG"); }
MeterId UtilityId() { return MeterId::FromString("UP"); }

const PublicKey& Directory::MeterKey(const MeterId& id) const {
  auto it = meters.find(id);
  if (it == meters.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no public key for meter " + Name(id));
  }
  return it->second;
}

Deployment Deployment::Create(std::string domain_id, std::vector<MeterId> ids,
                              unsigned key_bits, const Seed256& keygen_seed) {
  if (ids.empty()) {
    throw Error(ErrorCode::kNoActiveMeters, "deployment needs meters");
  }
  std::set<MeterId> seen;
  for (const MeterId& id : ids) {
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "meter id " + Name(id) + " is not unique in the domain");
    }
  }

  Deployment d;
  d.domain_id = std::move(domain_id);
  for (const MeterId& id : ids) {
    CounterRng rng(keygen_seed, kKeygenDomain, id.High(), id.Low());
    d.meters.push_back(
        MeterIdentity{id, paillier::GenerateKeypair(key_bits, rng)});
    d.directory.meters.emplace(id, d.meters.back().keypair.pk);
  }
  const MeterId up = UtilityId();
  CounterRng rng(keygen_seed, kKeygenDomain, up.High(), up.Low());
  d.utility = paillier::GenerateKeypair(key_bits, rng);
  d.directory.utility = d.utility.pk;
  return d;
}

const MeterIdentity& Deployment::Meter(const MeterId& id) const {
  for (const MeterIdentity& m : meters) {
    if (m.id == id) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown meter " + Name(id));
}

std::vector<MeterId> Deployment::MeterIds() const {
  std::vector<MeterId> ids;
  ids.reserve(meters.size());
  for (const MeterIdentity& m : meters) ids.push_back(m.id);
  return ids;
}

double MinimizeRecord(const MeterRecord& record) { return record.active_kwh; }

RoundSeeds RoundSeeds::FromMaster(const Seed256& master) {
  return RoundSeeds{master.Derive(seed_tag::kSelection),
                    master.Derive(seed_tag::kNoise),
                    master.Derive(seed_tag::kNonce)};
}

void RoundConfig::Validate() const {
  if (active_meters.empty()) {
    throw Error(ErrorCode::kNoActiveMeters, "round has no active meters");
  }
  if (std::find(active_meters.begin(), active_meters.end(), designated_id) ==
      active_meters.end()) {
    throw Error(ErrorCode::kRoleError,
                "designated meter " + Name(designated_id) + " is not active");
  }
  if (scale == 0 || !(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "bad scale or sigma");
  }
}

MeterId SelectDesignated(std::span<const MeterId> active_ids,
                         std::uint32_t interval, const Seed256& seed) {
  if (active_ids.empty()) {
    throw Error(ErrorCode::kNoActiveMeters, "cannot select from no meters");
  }
  CounterRng rng(seed, seed_tag::kSelection, interval, 0);
  return active_ids[rng.UniformBelow(active_ids.size())];
}

RoundConfig MakeRoundConfig(const Deployment& deployment,
                            std::uint32_t interval, const RoundSeeds& seeds,
                            double sigma, std::uint64_t scale,
                            noise::Transform transform) {
  RoundConfig cfg;
  cfg.interval = interval;
  cfg.domain_id = deployment.domain_id;
  cfg.active_meters = deployment.MeterIds();
  cfg.designated_id = SelectDesignated(cfg.active_meters, interval,
                                       seeds.selection);
  cfg.sigma = sigma;
  cfg.scale = scale;
  cfg.transform = transform;
  cfg.seeds = seeds;
  return cfg;
}

noise::NoiseContext NoiseContextFor(const RoundConfig& cfg,
                                    const MeterId& id) {
  return noise::NoiseContext{cfg.seeds.noise, id, cfg.interval, cfg.sigma, 0};
}

CounterRng NonceStreamFor(const RoundConfig& cfg, const MeterId& id) {
  return CounterRng(cfg.seeds.nonce, id.High(), id.Low(), cfg.interval);
}

MeterOutput MeterStepWithNoise(const MeterIdentity& meter, double reading_kwh,
                               const RoundConfig& cfg,
                               const Directory& directory,
                               std::int64_t noise_units, CounterRng& nonces) {
  if (meter.id == cfg.designated_id) {
    throw Error(ErrorCode::kRoleError,
                "designated meter must not perturb with its own noise");
  }
  if (!(reading_kwh >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "reading must be non-negative");
  }
  const PublicKey& pk_sel = directory.MeterKey(cfg.designated_id);
  const PublicKey& pk_up = directory.utility;

  const BigInt s = noise_units;
  const BigInt nc = paillier::ToUnits(reading_kwh, cfg.scale) + s;

  MeterOutput out;
  out.sender = meter.id;
  out.noise_cipher = paillier::Encrypt(
      pk_sel, paillier::EncodeUnits(s, cfg.scale, pk_sel), nonces);
  out.reading_cipher = paillier::Encrypt(
      pk_up, paillier::EncodeUnits(nc, cfg.scale, pk_up), nonces);
  return out;
}

MeterOutput MeterStepNondesignated(const MeterIdentity& meter,
                                   double reading_kwh, const RoundConfig& cfg,
                                   const Directory& directory,
                                   noise::NoiseContext noise_ctx) {
  if (meter.id == cfg.designated_id) {
    throw Error(ErrorCode::kRoleError,
                "designated meter must not perturb with its own noise");
  }
  const noise::GaussianSample s =
      noise::SampleRoundNoise(noise_ctx, cfg.transform, cfg.scale);
  CounterRng nonces = NonceStreamFor(cfg, meter.id);
  return MeterStepWithNoise(meter, reading_kwh, cfg, directory, s.quantized,
                            nonces);
}

Ciphertext AggregatorCollectNoise(std::span<const MeterOutput> outputs,
                                  const PublicKey& pk_sel,
                                  std::size_t meter_count) {
  std::set<MeterId> senders;
  for (const MeterOutput& o : outputs) {
    if (!senders.insert(o.sender).second) {
      throw Error(ErrorCode::kDuplicateReport,
                  "meter " + Name(o.sender) + " reported twice");
    }
  }
  if (meter_count == 0 || outputs.size() != meter_count - 1) {
    throw Error(ErrorCode::kIncompleteRound,
                "expected " + std::to_string(meter_count - 1) +
                    " noise reports, got " + std::to_string(outputs.size()));
  }
  Ciphertext total = paillier::Identity(pk_sel);
  for (const MeterOutput& o : outputs) {
    total = paillier::Add(pk_sel, total, o.noise_cipher);
  }
  return total;
}

Ciphertext MeterStepDesignated(const MeterIdentity& meter, double reading_kwh,
                               const Ciphertext& noise_total_cipher,
                               const RoundConfig& cfg,
                               const Directory& directory) {
  if (meter.id != cfg.designated_id) {
    throw Error(ErrorCode::kRoleError,
                "meter " + Name(meter.id) + " is not designated this round");
  }
  if (!(reading_kwh >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "reading must be non-negative");
  }
  const PublicKey& own = meter.keypair.pk;
  const PublicKey& pk_up = directory.utility;

  const BigInt noise_sum = paillier::DecodeUnits(
      paillier::Decrypt(own, meter.keypair.sk, noise_total_cipher, cfg.scale),
      own);
  const BigInt inverse = -noise_sum;
  if (2 * abs(inverse) >= pk_up.n) {
    throw Error(ErrorCode::kInverseOverflow,
                "additive inverse does not fit the utility ring");
  }
  const BigInt nc = paillier::ToUnits(reading_kwh, cfg.scale) + inverse;
  paillier::EncodedValue encoded;
  try {
    encoded = paillier::EncodeUnits(nc, cfg.scale, pk_up);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInverseOverflow, e.what());
  }
  CounterRng nonces = NonceStreamFor(cfg, meter.id);
  return paillier::Encrypt(pk_up, encoded, nonces);
}

Ciphertext AggregatorFinal(std::span<const MeterOutput> nondesignated,
                           const Ciphertext& designated_cipher,
                           const PublicKey& pk_up) {
  Ciphertext total = paillier::Identity(pk_up);
  for (const MeterOutput& o : nondesignated) {
    total = paillier::Add(pk_up, total, o.reading_cipher);
  }
  return paillier::Add(pk_up, total, designated_cipher);
}

BigInt UtilityDecryptUnits(const Keypair& utility, const Ciphertext& aggregate,
                           std::uint64_t scale) {
  return paillier::DecodeUnits(
      paillier::Decrypt(utility.pk, utility.sk, aggregate, scale), utility.pk);
}

double UtilityDecrypt(const Keypair& utility, const Ciphertext& aggregate,
                      std::uint64_t scale) {
  return UtilityDecryptUnits(utility, aggregate, scale).get_d() /
         static_cast<double>(scale);
}

void CheckRingCapacity(const PublicKey& pk, std::size_t meter_count,
                       const BigInt& max_reading_units, double sigma,
                       std::uint64_t scale) {
  BigInt noise_bound;
  mpz_set_d(noise_bound.get_mpz_t(),
            std::ceil(9.0 * sigma * static_cast<double>(scale)));
  const BigInt m = static_cast<unsigned long>(meter_count);
  const BigInt needed = m * max_reading_units + m * noise_bound;
  if (2 * needed >= pk.n) {
    throw Error(ErrorCode::kRingTooSmall,
                std::to_string(pk.bits) + "-bit modulus cannot hold " +
                    std::to_string(meter_count) + " meters at this scale");
  }
}

RoundResult RunRound(const Deployment& deployment, const RoundConfig& cfg,
                     const std::map<MeterId, MeterRecord>& readings,
                     simnet::Network& network,
                     const simnet::LinkProfile& links) {
  cfg.Validate();
  const std::size_t meter_count = cfg.active_meters.size();

  std::map<MeterId, double> minimized;
  BigInt max_units = 0;
  for (const MeterId& id : cfg.active_meters) {
    auto it = readings.find(id);
    if (it == readings.end()) {
      throw Error(ErrorCode::kIncompleteRound,
                  "no reading from meter " + Name(id) + " at interval " +
                      std::to_string(cfg.interval));
    }
    const double kwh = MinimizeRecord(it->second);
    minimized[id] = kwh;
    max_units = std::max(max_units, paillier::ToUnits(kwh, cfg.scale));
  }

  const Directory& dir = deployment.directory;
  const PublicKey& pk_up = dir.utility;
  const PublicKey& pk_sel = dir.MeterKey(cfg.designated_id);
  CheckRingCapacity(pk_up, meter_count, max_units, cfg.sigma, cfg.scale);
  CheckRingCapacity(pk_sel, meter_count, 0, cfg.sigma, cfg.scale);

  const simnet::PathModel nan = simnet::NeighborhoodPath(links);
  const simnet::PathModel wan = simnet::WidePath(links);
  const MeterId agg_id = AggregatorId();

  RoundResult result;
  result.designated = cfg.designated_id;

  // Every message crosses the wire as bytes; receivers decode what arrives.
  auto send = [&](MessageType type, const MeterId& sender, std::string to,
                  std::vector<std::uint8_t> payload,
                  const simnet::PathModel& path) -> WireMessage {
    WireMessage msg{type, cfg.interval, sender, std::move(payload)};
    const std::vector<std::uint8_t> bytes = EncodeMessage(msg);
    simnet::Envelope env{cfg.interval, std::string(MessageTypeName(type)),
                         Name(sender), msg.payload.size()};
    result.transcript.push_back(TranscriptEntry{
        Name(sender), std::move(to), msg, network.Deliver(env, path)});
    return DecodeMessage(bytes);
  };

  // AGG -> SMs: id_sel || t_i
  send(MessageType::kSelect, agg_id, "*", IdPayload(cfg.designated_id), nan);

  std::vector<MeterOutput> received;
  for (const MeterId& id : cfg.active_meters) {
    if (id == cfg.designated_id) continue;
    result.noise_samplers.push_back(id);
    const MeterOutput out = MeterStepNondesignated(
        deployment.Meter(id), minimized[id], cfg, dir, NoiseContextFor(cfg, id));
    const WireMessage noise_msg =
        send(MessageType::kNoise, id, Name(agg_id),
             paillier::SerializeCiphertext(pk_sel, out.noise_cipher), nan);
    const WireMessage reading_msg =
        send(MessageType::kNoisyReading, id, Name(agg_id),
             paillier::SerializeCiphertext(pk_up, out.reading_cipher), nan);
    received.push_back(MeterOutput{
        paillier::ParseCiphertext(pk_sel, noise_msg.payload),
        paillier::ParseCiphertext(pk_up, reading_msg.payload),
        noise_msg.sender});
  }

  const Ciphertext noise_total =
      AggregatorCollectNoise(received, pk_sel, meter_count);
  const WireMessage total_msg =
      send(MessageType::kNoiseTotal, agg_id, Name(cfg.designated_id),
           paillier::SerializeCiphertext(pk_sel, noise_total), nan);

  const Ciphertext designated_cipher = MeterStepDesignated(
      deployment.Meter(cfg.designated_id), minimized[cfg.designated_id],
      paillier::ParseCiphertext(pk_sel, total_msg.payload), cfg, dir);
  const WireMessage designated_msg =
      send(MessageType::kNoisyReading, cfg.designated_id, Name(agg_id),
           paillier::SerializeCiphertext(pk_up, designated_cipher), nan);

  const Ciphertext aggregate = AggregatorFinal(
      received, paillier::ParseCiphertext(pk_up, designated_msg.payload),
      pk_up);
  const WireMessage aggregate_msg =
      send(MessageType::kAggregate, agg_id, Name(UtilityId()),
           paillier::SerializeCiphertext(pk_up, aggregate), wan);

  result.aggregate_cipher =
      paillier::ParseCiphertext(pk_up, aggregate_msg.payload);
  result.aggregate_units =
      UtilityDecryptUnits(deployment.utility, result.aggregate_cipher,
                          cfg.scale);
  result.aggregate_kwh =
      result.aggregate_units.get_d() / static_cast<double>(cfg.scale);
  return result;
}

RoundResult RunRound(const Deployment& deployment, const RoundConfig& cfg,
                     const std::map<MeterId, double>& readings,
                     simnet::Network& network,
                     const simnet::LinkProfile& links) {
  std::map<MeterId, MeterRecord> records;
  for (const auto& [id, kwh] : readings) {
    records[id] = MeterRecord{cfg.interval * 900ULL, 0.0, 0.0, kwh};
  }
  return RunRound(deployment, cfg, records, network, links);
}

std::string FormatTranscript(std::span<const TranscriptEntry> transcript) {
  std::ostringstream os;
  for (const TranscriptEntry& e : transcript) {
    os << e.message.interval << ',' << e.delivery.sequence << ','
       << MessageTypeName(e.message.type) << ',' << e.from << ',' << e.to
       << ',' << paillier::HexEncode(EncodeMessage(e.message)) << '\n';
  }
  return os.str();
}

}  // namespace smartagg::protocol
