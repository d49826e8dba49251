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
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "smartagg/ingest.hpp"
#include "smartagg/noise.hpp"
#include "smartagg/protocol.hpp"

namespace smartagg::metrics {

// ---- privacy ----------------------------------------------------------------

/// Shannon entropy in bits of a histogram; empty bins contribute nothing.
double Entropy(std::span<const std::uint64_t> counts);

/// Joint histogram with X along rows and Y along columns.
class Histogram2D {
 public:
  Histogram2D(std::vector<double> x_edges, std::vector<double> y_edges);
  /// Builds a histogram directly from a bins_x * bins_y row-major grid.
  static Histogram2D FromCounts(std::size_t bins_x, std::size_t bins_y,
                                std::vector<std::uint64_t> counts);

  std::size_t bins_x() const { return x_edges_.size() - 1; }
  std::size_t bins_y() const { return y_edges_.size() - 1; }
  std::uint64_t total() const { return total_; }
  std::uint64_t at(std::size_t ix, std::size_t iy) const {
    return counts_[ix * bins_y() + iy];
  }
  const std::vector<double>& x_edges() const { return x_edges_; }
  const std::vector<double>& y_edges() const { return y_edges_; }

  void Add(double x, double y);
  std::vector<std::uint64_t> MarginalX() const;
  std::vector<std::uint64_t> MarginalY() const;

 private:
  static std::size_t Bin(const std::vector<double>& edges, double v);

  std::vector<double> x_edges_;
  std::vector<double> y_edges_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// H(X|Y) = -sum p(x,y) log2 p(x|y), in bits.
double ConditionalEntropy(const Histogram2D& joint);

/// `bins` equal-width edges spanning [min, max] of both series together.
std::vector<double> SharedEdges(std::span<const double> a,
                                std::span<const double> b, std::size_t bins);

inline constexpr std::size_t kDefaultNceBins = 64;

/// H(X|Y) / H(X) over a shared equal-width binning, clamped to [0, 1].
/// Throws kUndefinedMetric when H(X) = 0.
double Nce(std::span<const double> original, std::span<const double> perturbed,
           std::size_t bins = kDefaultNceBins);

/// Original and perturbed readings as a colluding aggregator and utility
/// would see them: each reading plus that meter's quantized round noise.
struct PerturbedView {
  std::vector<double> original;
  std::vector<double> perturbed;
};

PerturbedView PerturbReadings(std::span<const ingest::ReadingSeries> series,
                              double sigma, std::uint64_t scale,
                              noise::Transform transform,
                              const Seed256& noise_seed);

// ---- computation ------------------------------------------------------------

/// Median per-entity compute seconds for one round (transmission excluded).
struct TimingBreakdown {
  double t_sm = 0.0;      // one non-designated meter
  double t_sm_sel = 0.0;  // the designated meter
  double t_agg = 0.0;     // both homomorphic folds
  double t_up = 0.0;      // one decryption
  double t_op = 0.0;      // sum of the four above
  unsigned key_bits = 0;
  std::size_t meter_count = 0;

  bool CompositionHolds() const {
    return t_op == t_sm + t_sm_sel + t_agg + t_up;
  }
};

/// Times each entity's protocol work `repetitions` times (at least 3) and
/// keeps per-entity medians. t_sm is the mean over the non-designated meters
/// within a repetition.
TimingBreakdown BenchmarkRound(const protocol::Deployment& deployment,
                               const protocol::RoundConfig& cfg,
                               const std::map<MeterId, double>& readings,
                               std::size_t repetitions);

// ---- memory -----------------------------------------------------------------

/// Byte sizes of the stored items.
struct SizeTable {
  std::uint64_t id = 0;
  std::uint64_t cipher = 0;
  std::uint64_t consumption = 0;
  std::uint64_t noisy_consumption = 0;
  std::uint64_t random_value = 0;
  std::uint64_t keypair = 0;
  std::uint64_t public_key = 0;

  /// Sizes implied by this library's encodings for a given key size.
  static SizeTable ForKeyBits(unsigned key_bits);
};

struct MemoryEstimate {
  std::uint64_t s_sm = 0;
  std::uint64_t s_sm_sel = 0;
  std::uint64_t s_agg = 0;
  std::uint64_t s_up = 0;
  std::uint64_t s_op = 0;
  SizeTable params;
};

MemoryEstimate EstimateMemory(const SizeTable& sizes, std::size_t meter_count);

// ---- reports ----------------------------------------------------------------

/// key_bits,entity,seconds with entities sm_sel, sm, agg, up, op.
void WriteTimingCsv(std::ostream& os, std::span<const TimingBreakdown> rows);

struct NcePoint {
  std::string sigma_scale;  // as configured, e.g. "1/9"
  double nce = 0.0;
};
/// sigma_scale,nce
void WriteNceCsv(std::ostream& os, std::span<const NcePoint> rows);
/// entity,bytes
void WriteMemoryCsv(std::ostream& os, const MemoryEstimate& estimate);

}  // namespace smartagg::metrics
