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

#include "smartagg/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "smartagg/error.hpp"

namespace smartagg::metrics {
namespace {

std::string Shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void CheckEdges(const std::vector<double>& edges) {
  if (edges.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one bin");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bin edges must be strictly increasing");
    }
  }
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

template <class F>
double TimeIt(F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

double Entropy(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  if (total == 0) {
    throw Error(ErrorCode::kEmptyInput, "entropy of an empty histogram");
  }
  double h = 0.0;
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

Histogram2D::Histogram2D(std::vector<double> x_edges,
                         std::vector<double> y_edges)
    : x_edges_(std::move(x_edges)), y_edges_(std::move(y_edges)) {
  CheckEdges(x_edges_);
  CheckEdges(y_edges_);
  counts_.assign(bins_x() * bins_y(), 0);
}

Histogram2D Histogram2D::FromCounts(std::size_t bins_x, std::size_t bins_y,
                                    std::vector<std::uint64_t> counts) {
  if (counts.size() != bins_x * bins_y) {
    throw Error(ErrorCode::kInvalidArgument, "count grid has the wrong size");
  }
  std::vector<double> xe(bins_x + 1), ye(bins_y + 1);
  for (std::size_t i = 0; i <= bins_x; ++i) xe[i] = static_cast<double>(i);
  for (std::size_t i = 0; i <= bins_y; ++i) ye[i] = static_cast<double>(i);
  Histogram2D h(std::move(xe), std::move(ye));
  h.counts_ = std::move(counts);
  for (std::uint64_t c : h.counts_) h.total_ += c;
  return h;
}

std::size_t Histogram2D::Bin(const std::vector<double>& edges, double v) {
  if (v < edges.front() || v > edges.back()) {
    throw Error(ErrorCode::kInvalidArgument, "value outside histogram range");
  }
  // Bins are [e_i, e_{i+1}); the last bin also holds the upper edge.
  const auto it = std::upper_bound(edges.begin(), edges.end(), v);
  const std::size_t bin = static_cast<std::size_t>(it - edges.begin()) - 1;
  return std::min(bin, edges.size() - 2);
}

void Histogram2D::Add(double x, double y) {
  ++counts_[Bin(x_edges_, x) * bins_y() + Bin(y_edges_, y)];
  ++total_;
}

std::vector<std::uint64_t> Histogram2D::MarginalX() const {
  std::vector<std::uint64_t> m(bins_x(), 0);
  for (std::size_t i = 0; i < bins_x(); ++i) {
    for (std::size_t j = 0; j < bins_y(); ++j) m[i] += at(i, j);
  }
  return m;
}

std::vector<std::uint64_t> Histogram2D::MarginalY() const {
  std::vector<std::uint64_t> m(bins_y(), 0);
  for (std::size_t i = 0; i < bins_x(); ++i) {
    for (std::size_t j = 0; j < bins_y(); ++j) m[j] += at(i, j);
  }
  return m;
}

double ConditionalEntropy(const Histogram2D& joint) {
  if (joint.total() == 0) {
    throw Error(ErrorCode::kEmptyInput, "conditional entropy of empty joint");
  }
  const std::vector<std::uint64_t> y_counts = joint.MarginalY();
  const double total = static_cast<double>(joint.total());
  double h = 0.0;
  for (std::size_t i = 0; i < joint.bins_x(); ++i) {
    for (std::size_t j = 0; j < joint.bins_y(); ++j) {
      const std::uint64_t c = joint.at(i, j);
      if (c == 0) continue;
      const double p_xy = static_cast<double>(c) / total;
      const double p_x_given_y =
          static_cast<double>(c) / static_cast<double>(y_counts[j]);
      h -= p_xy * std::log2(p_x_given_y);
    }
  }
  return std::max(0.0, h);
}

std::vector<double> SharedEdges(std::span<const double> a,
                                std::span<const double> b, std::size_t bins) {
  if (bins == 0) {
    throw Error(ErrorCode::kInvalidArgument, "bin count must be positive");
  }
  if (a.empty() && b.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no values to bin");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (auto s : {a, b}) {
    for (double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = lo + width * static_cast<double>(i);
  }
  edges.back() = std::max(edges.back(), hi);
  return edges;
}

double Nce(std::span<const double> original, std::span<const double> perturbed,
           std::size_t bins) {
  if (original.size() != perturbed.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "original and perturbed series differ in length");
  }
  if (original.empty()) {
    throw Error(ErrorCode::kEmptyInput, "NCE of empty series");
  }
  const std::vector<double> edges = SharedEdges(original, perturbed, bins);
  Histogram2D joint(edges, edges);
  for (std::size_t i = 0; i < original.size(); ++i) {
    joint.Add(original[i], perturbed[i]);
  }
  const double hx = Entropy(joint.MarginalX());
  if (hx <= 0.0) {
    throw Error(ErrorCode::kUndefinedMetric,
                "original series has zero entropy at this binning");
  }
  return std::clamp(ConditionalEntropy(joint) / hx, 0.0, 1.0);
}

PerturbedView PerturbReadings(std::span<const ingest::ReadingSeries> series,
                              double sigma, std::uint64_t scale,
                              noise::Transform transform,
                              const Seed256& noise_seed) {
  PerturbedView view;
  const double denom = static_cast<double>(scale);
  for (const ingest::ReadingSeries& s : series) {
    const MeterId id = MeterId::FromString(s.meter_id);
    for (const ingest::Reading& r : s.readings) {
      const std::int64_t units = std::llround(r.active_kwh * denom);
      std::int64_t noise_units = 0;
      if (sigma > 0.0) {
        noise::NoiseContext ctx{noise_seed, id, r.interval_index, sigma, 0};
        noise_units = noise::SampleRoundNoise(ctx, transform, scale).quantized;
      }
      view.original.push_back(static_cast<double>(units) / denom);
      view.perturbed.push_back(static_cast<double>(units + noise_units) /
                               denom);
    }
  }
  return view;
}

TimingBreakdown BenchmarkRound(const protocol::Deployment& deployment,
                               const protocol::RoundConfig& cfg,
                               const std::map<MeterId, double>& readings,
                               std::size_t repetitions) {
  if (repetitions < 3) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 3 repetitions");
  }
  cfg.Validate();
  const protocol::Directory& dir = deployment.directory;
  const protocol::PublicKey& pk_sel = dir.MeterKey(cfg.designated_id);
  const std::size_t m = cfg.active_meters.size();
  auto reading = [&](const MeterId& id) {
    auto it = readings.find(id);
    if (it == readings.end()) {
      throw Error(ErrorCode::kIncompleteRound, "missing benchmark reading");
    }
    return it->second;
  };

  std::vector<double> sm, sel, agg, up;
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    std::vector<protocol::MeterOutput> outputs;
    double sm_total = 0.0;
    for (const MeterId& id : cfg.active_meters) {
      if (id == cfg.designated_id) continue;
      const protocol::MeterIdentity& meter = deployment.Meter(id);
      sm_total += TimeIt([&] {
        outputs.push_back(protocol::MeterStepNondesignated(
            meter, reading(id), cfg, dir, protocol::NoiseContextFor(cfg, id)));
      });
    }
    sm.push_back(m > 1 ? sm_total / static_cast<double>(m - 1) : 0.0);

    protocol::Ciphertext total;
    double agg_seconds = TimeIt([&] {
      protocol::SelectDesignated(cfg.active_meters, cfg.interval,
                                 cfg.seeds.selection);
      total = protocol::AggregatorCollectNoise(outputs, pk_sel, m);
    });

    protocol::Ciphertext designated;
    sel.push_back(TimeIt([&] {
      designated = protocol::MeterStepDesignated(
          deployment.Meter(cfg.designated_id), reading(cfg.designated_id),
          total, cfg, dir);
    }));

    protocol::Ciphertext aggregate;
    agg_seconds += TimeIt([&] {
      aggregate = protocol::AggregatorFinal(outputs, designated, dir.utility);
    });
    agg.push_back(agg_seconds);

    up.push_back(TimeIt([&] {
      protocol::UtilityDecryptUnits(deployment.utility, aggregate, cfg.scale);
    }));
  }

  TimingBreakdown t;
  t.key_bits = dir.utility.bits;
  t.meter_count = m;
  t.t_sm = Median(sm);
  t.t_sm_sel = Median(sel);
  t.t_agg = Median(agg);
  t.t_up = Median(up);
  t.t_op = t.t_sm + t.t_sm_sel + t.t_agg + t.t_up;
  return t;
}

SizeTable SizeTable::ForKeyBits(unsigned key_bits) {
  const std::uint64_t n_bytes = (key_bits + 7) / 8;
  SizeTable s;
  s.id = 16;
  s.cipher = 2 * n_bytes;
  s.consumption = sizeof(double);
  s.noisy_consumption = sizeof(double);
  s.random_value = sizeof(double);
  s.public_key = 4 + (4 + n_bytes) + (4 + n_bytes);
  s.keypair = s.public_key + (4 + n_bytes) + (4 + n_bytes);
  return s;
}

MemoryEstimate EstimateMemory(const SizeTable& sizes,
                              std::size_t meter_count) {
  for (std::uint64_t v : {sizes.id, sizes.cipher, sizes.consumption,
                          sizes.noisy_consumption, sizes.random_value,
                          sizes.keypair, sizes.public_key}) {
    if (v == 0) {
      throw Error(ErrorCode::kInvalidArgument, "sizes must be positive");
    }
  }
  const std::uint64_t m = meter_count;
  MemoryEstimate e;
  e.params = sizes;
  e.s_sm = 2 * sizes.id + sizes.random_value + sizes.consumption +
           sizes.noisy_consumption + 2 * sizes.cipher + sizes.keypair +
           sizes.public_key;
  e.s_sm_sel = sizes.id + sizes.random_value + sizes.consumption +
               sizes.noisy_consumption + 2 * sizes.cipher + sizes.keypair +
               sizes.public_key;
  e.s_agg = m * sizes.id + 2 * m * sizes.cipher + sizes.keypair +
            sizes.public_key;
  e.s_up = sizes.cipher + sizes.consumption + sizes.keypair + sizes.public_key;
  e.s_op = e.s_sm + e.s_sm_sel + e.s_agg + e.s_up;
  return e;
}

void WriteTimingCsv(std::ostream& os, std::span<const TimingBreakdown> rows) {
  os << "key_bits,entity,seconds\n";
  for (const TimingBreakdown& t : rows) {
    const std::pair<const char*, double> cells[] = {
        {"sm_sel", t.t_sm_sel}, {"sm", t.t_sm}, {"agg", t.t_agg},
        {"up", t.t_up},         {"op", t.t_op}};
    for (const auto& [entity, seconds] : cells) {
      os << t.key_bits << ',' << entity << ',' << Shortest(seconds) << '\n';
    }
  }
}

void WriteNceCsv(std::ostream& os, std::span<const NcePoint> rows) {
  os << "sigma_scale,nce\n";
  for (const NcePoint& p : rows) {
    os << p.sigma_scale << ',' << Shortest(p.nce) << '\n';
  }
}

void WriteMemoryCsv(std::ostream& os, const MemoryEstimate& e) {
  os << "entity,bytes\n"
     << "sm," << e.s_sm << '\n'
     << "sm_sel," << e.s_sm_sel << '\n'
     << "agg," << e.s_agg << '\n'
     << "up," << e.s_up << '\n'
     << "op," << e.s_op << '\n';
}

}  // namespace smartagg::metrics
