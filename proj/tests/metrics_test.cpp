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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "smartagg/error.hpp"
#include "smartagg/ingest.hpp"

namespace smartagg::metrics {
namespace {

using U64s = std::vector<std::uint64_t>;

TEST(Entropy, ClosedFormCases) {
  EXPECT_DOUBLE_EQ(Entropy(U64s{5, 5, 5, 5}), 2.0);
  EXPECT_DOUBLE_EQ(Entropy(U64s{0, 9, 0}), 0.0);
  EXPECT_DOUBLE_EQ(Entropy(U64s{2, 1, 1}), 1.5);
  EXPECT_THROW(Entropy(U64s{}), Error);
  EXPECT_THROW(Entropy(U64s{0, 0}), Error);
}

TEST(Entropy, MatchesTextbookFormulaOnRandomHistograms) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 200; ++trial) {
    U64s counts(1 + gen() % 40);
    double total = 0;
    for (auto& c : counts) {
      c = gen() % 4 == 0 ? 0 : gen() % 1000;
      total += static_cast<double>(c);
    }
    if (total == 0) continue;
    std::vector<double> p;
    for (auto c : counts) p.push_back(static_cast<double>(c) / total);
    EXPECT_NEAR(Entropy(counts), oracle::EntropyBits(p), 1e-12);
  }
}

TEST(ConditionalEntropy, HandBuiltTwoByTwo) {
  // p(x, y): rows x, columns y = {{0.25, 0.25}, {0.5, 0}}.
  const Histogram2D joint = Histogram2D::FromCounts(2, 2, {1, 1, 2, 0});
  // H(X|Y) = H(X, Y) - H(Y) = 1.5 - H(0.75, 0.25)
  const double expected =
      oracle::EntropyBits({0.25, 0.25, 0.5}) - oracle::EntropyBits({0.75, 0.25});
  EXPECT_NEAR(expected, 0.6887218755408671, 1e-15);
  EXPECT_NEAR(ConditionalEntropy(joint), expected, 1e-12);
}

TEST(ConditionalEntropy, DiagonalAndProductJoints) {
  EXPECT_DOUBLE_EQ(
      ConditionalEntropy(Histogram2D::FromCounts(3, 3, {4, 0, 0, 0, 2, 0, 0, 0, 7})),
      0.0);
  // Product of p(x) = {1/2, 1/4, 1/4} and p(y) = {1/3, 2/3}.
  const Histogram2D product =
      Histogram2D::FromCounts(3, 2, {2, 4, 1, 2, 1, 2});
  EXPECT_NEAR(ConditionalEntropy(product), 1.5, 1e-12);
  EXPECT_THROW(ConditionalEntropy(Histogram2D::FromCounts(1, 1, {0})), Error);
}

TEST(ConditionalEntropy, FuzzedJointsRespectBounds) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t bx = 1 + gen() % 12, by = 1 + gen() % 12;
    U64s counts(bx * by);
    for (auto& c : counts) c = gen() % 3 == 0 ? 0 : gen() % 50;
    counts[gen() % counts.size()] += 1;
    const Histogram2D h = Histogram2D::FromCounts(bx, by, counts);
    const double hxy = ConditionalEntropy(h);
    const double hx = Entropy(h.MarginalX());
    EXPECT_GE(hxy, -1e-12);
    EXPECT_LE(hxy, hx + 1e-12);
  }
}

TEST(Histogram2D, BinningIncludesUpperEdge) {
  Histogram2D h({0.0, 1.0, 2.0}, {0.0, 10.0});
  h.Add(0.0, 0.0);
  h.Add(1.0, 5.0);
  h.Add(2.0, 10.0);
  EXPECT_EQ(h.at(0, 0), 1u);
  EXPECT_EQ(h.at(1, 0), 2u);
  EXPECT_EQ(h.total(), 3u);
  EXPECT_EQ(h.MarginalX(), (U64s{1, 2}));
  EXPECT_THROW(Histogram2D({1.0, 1.0}, {0.0, 1.0}), Error);
}

TEST(Nce, IdenticalSeriesIsZero) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> d(0.3, 0.1);
  std::vector<double> x(5000);
  for (double& v : x) v = d(gen);
  EXPECT_EQ(Nce(x, x), 0.0);
}

TEST(Nce, IndependentResampleIsNearOne) {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> x(100000), y(100000);
  for (double& v : x) v = d(gen);
  for (double& v : y) v = d(gen);
  const double nce = Nce(x, y);
  EXPECT_GT(nce, 0.97);
  EXPECT_LE(nce, 1.0);
}

TEST(Nce, FuzzedPairsStayInUnitInterval) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + gen() % 500;
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> x(n), y(n);
    const int mode = trial % 3;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::round(u(gen) * 4.0) / 4.0;
      y[i] = mode == 0 ? u(gen) : mode == 1 ? x[i] + 0.1 * u(gen) : -x[i];
    }
    x[0] = -5.0;
    x[1] = 5.0;  // non-constant original
    const double nce = Nce(x, y, 2 + gen() % 99);
    ASSERT_GE(nce, 0.0);
    ASSERT_LE(nce, 1.0);
  }
}

TEST(Nce, JointPermutationInvariance) {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> d(1.0, 0.5);
  std::vector<std::size_t> idx(3000);
  std::vector<double> x(3000), y(3000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    idx[i] = i;
    x[i] = d(gen);
    y[i] = x[i] + d(gen);
  }
  std::shuffle(idx.begin(), idx.end(), gen);
  std::vector<double> px, py;
  for (std::size_t i : idx) {
    px.push_back(x[i]);
    py.push_back(y[i]);
  }
  EXPECT_EQ(Nce(x, y), Nce(px, py));
}

TEST(Nce, Errors) {
  const std::vector<double> c(10, 1.0), v{1, 2, 3};
  EXPECT_EQ([&] {
    try {
      Nce(c, c);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  }(),
            ErrorCode::kUndefinedMetric);
  EXPECT_THROW(Nce(v, c), Error);
  EXPECT_THROW(Nce(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST(Nce, StrictlyIncreasesOverTheSigmaSweep) {
  const auto series = ingest::SynthesizeReadings(20, 96, Seed256::FromHex("5eed"));
  const auto pooled = ingest::PooledReadings(series);
  const double base = ingest::StandardDeviation(pooled);  // kWh
  double prev = -1.0;
  for (double k : {1.0 / 9, 1.0 / 6, 1.0 / 3, 1.0, 3.0, 6.0, 9.0}) {
    const PerturbedView view = PerturbReadings(
        series, base * k, 1000, noise::Transform::kBoxMuller,
        Seed256::FromHex("5eed").Derive(seed_tag::kNoise));
    const double nce = Nce(view.original, view.perturbed);
    EXPECT_GT(nce, prev) << "sigma multiplier " << k;
    std::cout << "  sigma x " << k << ": NCE " << nce << '\n';
    prev = nce;
  }
}

TEST(Perturb, ZeroSigmaLeavesReadingsAlone) {
  const auto series = ingest::SynthesizeReadings(3, 10, Seed256::FromHex("1"));
  const PerturbedView view = PerturbReadings(
      series, 0.0, 1000, noise::Transform::kBoxMuller, Seed256::FromHex("2"));
  EXPECT_EQ(view.original, view.perturbed);
  EXPECT_EQ(view.original.size(), 30u);
}

TEST(Memory, UnitSizes) {
  const SizeTable ones{1, 1, 1, 1, 1, 1, 1};
  const MemoryEstimate e = EstimateMemory(ones, 1);
  EXPECT_EQ(e.s_sm, 9u);      // 2 + 1 + 1 + 1 + 2 + 1 + 1
  EXPECT_EQ(e.s_sm_sel, 8u);  // 1 + 1 + 1 + 1 + 2 + 1 + 1
  EXPECT_EQ(e.s_agg, 5u);     // 1 + 2 + 1 + 1
  EXPECT_EQ(e.s_up, 4u);      // 1 + 1 + 1 + 1
  EXPECT_EQ(e.s_op, 26u);
}

TEST(Memory, DistinctSizesAndLinearityInM) {
  const SizeTable s{16, 256, 8, 8, 8, 540, 272};
  const MemoryEstimate e = EstimateMemory(s, 20);
  EXPECT_EQ(e.s_sm, 2 * 16 + 8 + 8 + 8 + 2 * 256 + 540 + 272u);
  EXPECT_EQ(e.s_sm_sel, 16 + 8 + 8 + 8 + 2 * 256 + 540 + 272u);
  EXPECT_EQ(e.s_agg, 20 * 16 + 40 * 256 + 540 + 272u);
  EXPECT_EQ(e.s_up, 256 + 8 + 540 + 272u);
  EXPECT_EQ(e.s_op, e.s_sm + e.s_sm_sel + e.s_agg + e.s_up);

  const std::uint64_t fixed = s.keypair + s.public_key;
  EXPECT_EQ(EstimateMemory(s, 40).s_agg - fixed, 2 * (e.s_agg - fixed));
  EXPECT_THROW(EstimateMemory(SizeTable{}, 1), Error);
}

TEST(Memory, RealisticSizesStayUnderOneGigabyte) {
  const SizeTable s = SizeTable::ForKeyBits(1024);
  EXPECT_EQ(s.cipher, 256u);
  EXPECT_EQ(s.public_key, 4u + 132 + 132);
  EXPECT_LT(EstimateMemory(s, 20).s_op, 1'000'000'000u);
}

TEST(Timing, CompositionAndGrowthWithMeters) {
  const std::size_t max_m = 40;
  std::vector<MeterId> ids;
  for (std::uint32_t i = 0; i < max_m; ++i) ids.push_back(MeterId::FromIndex(i));
  const auto d = protocol::Deployment::Create("D1", ids, 512, Seed256::FromHex("71"));
  std::map<MeterId, double> readings;
  for (const MeterId& id : ids) readings[id] = 0.42;

  std::vector<double> ms, t_agg;
  for (std::size_t m : {5, 10, 20, 40}) {
    protocol::RoundConfig cfg;
    cfg.domain_id = "D1";
    cfg.active_meters.assign(ids.begin(), ids.begin() + static_cast<long>(m));
    cfg.designated_id = ids[0];
    cfg.sigma = 0.1;
    cfg.seeds = protocol::RoundSeeds::FromMaster(Seed256::FromHex("72"));
    const TimingBreakdown t = BenchmarkRound(d, cfg, readings, 15);
    EXPECT_TRUE(t.CompositionHolds());
    EXPECT_EQ(t.meter_count, m);
    EXPECT_EQ(t.key_bits, 512u);
    EXPECT_GT(t.t_up, 0.0);
    ms.push_back(static_cast<double>(m));
    t_agg.push_back(t.t_agg);
  }
  const oracle::LinearFit fit = oracle::FitLine(ms, t_agg);
  EXPECT_GT(fit.slope, 0.0);
  EXPECT_GT(fit.r_squared, 0.95);
}

TEST(Timing, NeedsThreeRepetitions) {
  const auto d = protocol::Deployment::Create(
      "D1", {MeterId::FromIndex(0)}, 64, Seed256::FromHex("1"));
  protocol::RoundConfig cfg;
  cfg.active_meters = d.MeterIds();
  cfg.designated_id = cfg.active_meters[0];
  EXPECT_THROW(BenchmarkRound(d, cfg, {{cfg.designated_id, 1.0}}, 2), Error);
}

TEST(Reports, CsvLayouts) {
  TimingBreakdown t;
  t.key_bits = 128;
  t.t_sm = 0.5;
  t.t_sm_sel = 0.25;
  t.t_agg = 0.125;
  t.t_up = 0.0625;
  t.t_op = 0.9375;
  std::ostringstream timing;
  WriteTimingCsv(timing, std::vector<TimingBreakdown>{t});
  EXPECT_EQ(timing.str(),
            "key_bits,entity,seconds\n128,sm_sel,0.25\n128,sm,0.5\n"
            "128,agg,0.125\n128,up,0.0625\n128,op,0.9375\n");

  std::ostringstream nce;
  WriteNceCsv(nce, std::vector<NcePoint>{{"1/9", 0.25}, {"9", 0.875}});
  EXPECT_EQ(nce.str(), "sigma_scale,nce\n1/9,0.25\n9,0.875\n");

  std::ostringstream mem;
  WriteMemoryCsv(mem, EstimateMemory(SizeTable{1, 1, 1, 1, 1, 1, 1}, 1));
  EXPECT_EQ(mem.str(), "entity,bytes\nsm,9\nsm_sel,8\nagg,5\nup,4\nop,26\n");
}

}  // namespace
}  // namespace smartagg::metrics
