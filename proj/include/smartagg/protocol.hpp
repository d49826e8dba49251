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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smartagg/meter_id.hpp"
#include "smartagg/noise.hpp"
#include "smartagg/paillier.hpp"
#include "smartagg/random.hpp"
#include "smartagg/simnet.hpp"
#include "smartagg/wire.hpp"

namespace smartagg::protocol {

using paillier::BigInt;
using paillier::Ciphertext;
using paillier::Keypair;
using paillier::PublicKey;

/// Sender ids of the two infrastructure roles on the wire.
MeterId AggregatorId();
MeterId UtilityId();

/// Public keys every participant holds before the protocol starts.
struct Directory {
  PublicKey utility;
  std::map<MeterId, PublicKey> meters;

  const PublicKey& MeterKey(const MeterId& id) const;
};

struct MeterIdentity {
  MeterId id;
  Keypair keypair;
};

/// One aggregation domain: its meters, the utility keypair and the public
/// directory. Keys are derived deterministically from `keygen_seed`.
struct Deployment {
  std::string domain_id;
  std::vector<MeterIdentity> meters;
  Keypair utility;
  Directory directory;

  static Deployment Create(std::string domain_id, std::vector<MeterId> ids,
                           unsigned key_bits, const Seed256& keygen_seed);

  const MeterIdentity& Meter(const MeterId& id) const;
  std::vector<MeterId> MeterIds() const;
};

/// Full record held inside a meter. Only active_kwh leaves the device.
struct MeterRecord {
  std::uint64_t timestamp = 0;
  double voltage = 0.0;
  double reactive_kvarh = 0.0;
  double active_kwh = 0.0;
};

double MinimizeRecord(const MeterRecord& record);

struct RoundSeeds {
  Seed256 selection;
  Seed256 noise;
  Seed256 nonce;

  /// Per-purpose streams split from one master seed.
  static RoundSeeds FromMaster(const Seed256& master);
};

struct RoundConfig {
  std::uint32_t interval = 0;
  std::string domain_id;
  std::vector<MeterId> active_meters;
  MeterId designated_id;
  double sigma = 1.0;  // kWh
  std::uint64_t scale = paillier::kDefaultScale;
  noise::Transform transform = noise::Transform::kBoxMuller;
  RoundSeeds seeds;

  /// Throws unless M >= 1 and the designated meter is active.
  void Validate() const;
};

/// Runs designated-meter selection and fills a RoundConfig.
RoundConfig MakeRoundConfig(const Deployment& deployment,
                            std::uint32_t interval, const RoundSeeds& seeds,
                            double sigma, std::uint64_t scale,
                            noise::Transform transform);

struct MeterOutput {
  Ciphertext noise_cipher;    // under the designated meter's key
  Ciphertext reading_cipher;  // under the utility key
  MeterId sender;
};

/// Uniform choice among `active_ids`, deterministic in (seed, interval).
MeterId SelectDesignated(std::span<const MeterId> active_ids,
                         std::uint32_t interval, const Seed256& seed);

/// Noise context of one meter for one round.
noise::NoiseContext NoiseContextFor(const RoundConfig& cfg, const MeterId& id);
/// Nonce stream for the Paillier encryptions one entity makes in one round.
CounterRng NonceStreamFor(const RoundConfig& cfg, const MeterId& id);

/// Non-designated meter: draws s, forms nc = c + s in fixed point, returns
/// Enc(pk_sel, s) and Enc(pk_UP, nc).
MeterOutput MeterStepNondesignated(const MeterIdentity& meter,
                                   double reading_kwh, const RoundConfig& cfg,
                                   const Directory& directory,
                                   noise::NoiseContext noise_ctx);

/// As above with a caller-provided noise value (in fixed-point units).
MeterOutput MeterStepWithNoise(const MeterIdentity& meter, double reading_kwh,
                               const RoundConfig& cfg,
                               const Directory& directory,
                               std::int64_t noise_units, CounterRng& nonces);

/// Folds the noise ciphertexts of the M-1 non-designated meters.
Ciphertext AggregatorCollectNoise(std::span<const MeterOutput> outputs,
                                  const PublicKey& pk_sel,
                                  std::size_t meter_count);

/// Designated meter: S = -Dec(sk_sel, total), returns Enc(pk_UP, c + S).
Ciphertext MeterStepDesignated(const MeterIdentity& meter, double reading_kwh,
                               const Ciphertext& noise_total_cipher,
                               const RoundConfig& cfg,
                               const Directory& directory);

/// Folds every noisy-reading ciphertext into the domain aggregate.
Ciphertext AggregatorFinal(std::span<const MeterOutput> nondesignated,
                           const Ciphertext& designated_cipher,
                           const PublicKey& pk_up);

BigInt UtilityDecryptUnits(const Keypair& utility, const Ciphertext& aggregate,
                           std::uint64_t scale);
double UtilityDecrypt(const Keypair& utility, const Ciphertext& aggregate,
                      std::uint64_t scale);

/// Throws kRingTooSmall unless
/// M * max_reading_units + M * 9 sigma * scale < n / 2 for `pk`.
void CheckRingCapacity(const PublicKey& pk, std::size_t meter_count,
                       const BigInt& max_reading_units, double sigma,
                       std::uint64_t scale);

struct TranscriptEntry {
  std::string from;
  std::string to;  // "*" for a broadcast
  WireMessage message;
  simnet::Delivery delivery;
};

struct RoundResult {
  Ciphertext aggregate_cipher;
  BigInt aggregate_units;
  double aggregate_kwh = 0.0;
  MeterId designated;
  std::vector<TranscriptEntry> transcript;
  /// Meters that drew perturbation noise this round, in draw order.
  std::vector<MeterId> noise_samplers;
};

/// Executes selection, the non-designated steps, noise aggregation, the
/// designated step, final aggregation and utility decryption, routing every
/// message through `network`.
RoundResult RunRound(const Deployment& deployment, const RoundConfig& cfg,
                     const std::map<MeterId, MeterRecord>& readings,
                     simnet::Network& network,
                     const simnet::LinkProfile& links);

/// Convenience overload for plain kWh readings.
RoundResult RunRound(const Deployment& deployment, const RoundConfig& cfg,
                     const std::map<MeterId, double>& readings,
                     simnet::Network& network,
                     const simnet::LinkProfile& links);

/// Serializes the transcript as one line per message:
/// interval,seq,type,from,to,hex(wire bytes)
std::string FormatTranscript(std::span<const TranscriptEntry> transcript);

}  // namespace smartagg::protocol
