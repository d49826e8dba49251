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

#include "smartagg/ingest.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "smartagg/error.hpp"

namespace smartagg::ingest {
namespace {

constexpr std::int64_t kJan2024 = 1704067200;  // 2024-01-01T00:00:00Z

std::vector<ReadingSeries> Parse(const std::string& text,
                                 const CsvSchema& schema = {}) {
  std::istringstream in(text);
  return ParseReadings(in, schema, "fixture.csv");
}

Error ErrorOf(const std::string& text) {
  try {
    Parse(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected an Error";
  return Error(ErrorCode::kIoError, "none");
}

TEST(Timestamp, KnownEpochValues) {
  EXPECT_EQ(ParseTimestamp("1970-01-01T00:00:00Z"), 0);
  EXPECT_EQ(ParseTimestamp("2024-01-01T00:00:00Z"), kJan2024);
  EXPECT_EQ(ParseTimestamp("2024-01-01T00:15:00+00:00"), kJan2024 + 900);
  EXPECT_EQ(ParseTimestamp("2024-02-29T12:00:00"), 1709208000);
  EXPECT_EQ(ParseTimestamp("2024-01-01 00:00:00"), kJan2024);
  EXPECT_EQ(FormatTimestamp(kJan2024 + 900), "2024-01-01T00:15:00Z");
  for (const char* bad : {"2024-13-01T00:00:00Z", "2024-02-30T00:00:00Z",
                          "2024/01/01T00:00:00", "2024-01-01T25:00:00Z",
                          "2024-01-01T00:00:00+01:00", ""}) {
    EXPECT_THROW(ParseTimestamp(bad), Error) << bad;
  }
}

TEST(ParseReadings, ThreeRowFixture) {
  const auto series = Parse(
      "meter_id,timestamp_iso8601,active_kwh\n"
      "SM1,2024-01-01T00:00:00Z,0.125\n"
      "SM1,2024-01-01T00:15:00Z,0.5\n"
      "SM1,2024-01-01T00:30:00Z,0\n");
  ASSERT_EQ(series.size(), 1u);
  EXPECT_EQ(series[0].meter_id, "SM1");
  ASSERT_EQ(series[0].readings.size(), 3u);
  EXPECT_EQ(series[0].readings[0].interval_index,
            static_cast<std::uint64_t>(kJan2024 / 900));
  EXPECT_EQ(series[0].readings[2].interval_index,
            series[0].readings[0].interval_index + 2);
  EXPECT_EQ(series[0].readings[1].active_kwh, 0.5);
  EXPECT_FALSE(series[0].readings[1].reactive_kvarh.has_value());
}

TEST(ParseReadings, ReactiveColumnAndMultipleMeters) {
  const auto series = Parse(
      "meter_id,timestamp_iso8601,active_kwh,reactive_kvarh\n"
      "B,2024-01-01T00:00:00Z,1,0.1\n"
      "A,2024-01-01T00:00:00Z,2,0.2\n"
      "B,2024-01-01T00:15:00Z,3,0.3\n"
      "A,2024-01-01T00:15:00Z,4,0.4\n");
  ASSERT_EQ(series.size(), 2u);
  EXPECT_EQ(series[0].meter_id, "B");
  EXPECT_EQ(series[1].readings[1].active_kwh, 4.0);
  EXPECT_EQ(series[1].readings[1].reactive_kvarh, 0.4);
}

TEST(ParseReadings, NegativeReadingNamesItsLine) {
  const Error e = ErrorOf(
      "meter_id,timestamp_iso8601,active_kwh\n"
      "SM1,2024-01-01T00:00:00Z,0.1\n"
      "SM1,2024-01-01T00:15:00Z,-1\n");
  EXPECT_EQ(e.code(), ErrorCode::kParseError);
  EXPECT_NE(std::string(e.what()).find("fixture.csv:3:"), std::string::npos)
      << e.what();
}

TEST(ParseReadings, MalformedRows) {
  const std::string head = "meter_id,timestamp_iso8601,active_kwh\n";
  for (const std::string row :
       {"SM1,2024-01-01T00:00:00Z,abc\n", "SM1,2024-01-01T00:00:00Z\n",
        "SM1,2024-01-01T00:00:00Z,1,2,3\n", "SM1,2024-01-01T00:07:00Z,1\n",
        ",2024-01-01T00:00:00Z,1\n", "SM1,2024-01-01T00:00:00Z,nan\n",
        "SM1,2024-01-01T00:00:00Z,inf\n"}) {
    EXPECT_EQ(ErrorOf(head + row).code(), ErrorCode::kParseError) << row;
  }
  EXPECT_EQ(ErrorOf("id,time,kwh\nSM1,2024-01-01T00:00:00Z,1\n").code(),
            ErrorCode::kParseError);
  EXPECT_EQ(ErrorOf("").code(), ErrorCode::kParseError);
  EXPECT_EQ(ErrorOf(head + "SM1,2024-01-01T00:00:00Z,1\n"
                           "SM1,2024-01-01T00:00:00Z,2\n")
                .code(),
            ErrorCode::kParseError);
}

TEST(ParseReadings, GapIsNamed) {
  const Error e = ErrorOf(
      "meter_id,timestamp_iso8601,active_kwh\n"
      "SM1,2024-01-01T00:00:00Z,1\n"
      "SM1,2024-01-01T00:30:00Z,1\n");
  EXPECT_EQ(e.code(), ErrorCode::kGapError);
  EXPECT_NE(std::string(e.what()).find("2024-01-01T00:15:00Z"),
            std::string::npos)
      << e.what();
}

TEST(ParseReadings, CrlfLineEndings) {
  const auto series = Parse(
      "meter_id,timestamp_iso8601,active_kwh\r\n"
      "SM1,2024-01-01T00:00:00Z,1.5\r\n");
  ASSERT_EQ(series.size(), 1u);
  EXPECT_EQ(series[0].readings[0].active_kwh, 1.5);
}

TEST(WriteReadings, RoundTripsThroughCsv) {
  auto original = SynthesizeReadings(4, 10, Seed256::FromHex("77"));
  for (auto& s : original) {
    for (auto& r : s.readings) r.interval_index += kJan2024 / 900;
  }
  original[1].readings[3].reactive_kvarh = 0.123456789;
  std::ostringstream out;
  WriteReadings(out, original);
  EXPECT_EQ(Parse(out.str()), original);
}

TEST(LoadReadings, ReadsFilesAndReportsMissingOnes) {
  const auto dir = std::filesystem::temp_directory_path() / "smartagg_ingest";
  std::filesystem::create_directories(dir);
  const auto path = dir / "readings.csv";
  {
    std::ofstream f(path);
    f << "meter_id,timestamp_iso8601,active_kwh\n"
         "SM1,2024-01-01T00:00:00Z,0.25\n";
  }
  EXPECT_EQ(LoadReadings(path)[0].readings[0].active_kwh, 0.25);
  EXPECT_THROW(LoadReadings(dir / "missing.csv"), Error);
  std::filesystem::remove_all(dir);
}

TEST(Synthesize, DeterministicShapeAndLength) {
  const Seed256 seed = Seed256::FromHex("5eed");
  const auto a = SynthesizeReadings(1, 96, seed);
  const auto b = SynthesizeReadings(1, 96, seed);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].readings.size(), 96u);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, SynthesizeReadings(1, 96, Seed256::FromHex("5eee")));
}

TEST(Synthesize, EveningExceedsOvernight) {
  const auto series = SynthesizeReadings(20, 96 * 7, Seed256::FromHex("e"));
  double evening = 0, night = 0;
  int ne = 0, nn = 0;
  for (const auto& s : series) {
    for (const auto& r : s.readings) {
      const double hour = static_cast<double>(r.interval_index % 96) / 4.0;
      if (hour >= 18.0 && hour < 22.0) {
        evening += r.active_kwh;
        ++ne;
      } else if (hour < 5.0) {
        night += r.active_kwh;
        ++nn;
      }
    }
  }
  EXPECT_GT(evening / ne, night / nn);
}

TEST(Synthesize, NonNegativeFiniteWholeWattHours) {
  ProfileParams noisy;
  noisy.jitter_sigma_kwh = 0.5;  // force the clamp to matter
  for (const auto& s : SynthesizeReadings(10, 200, Seed256::FromHex("9"), noisy)) {
    for (const auto& r : s.readings) {
      ASSERT_TRUE(std::isfinite(r.active_kwh));
      ASSERT_GE(r.active_kwh, 0.0);
      ASSERT_DOUBLE_EQ(r.active_kwh * 1000.0, std::round(r.active_kwh * 1000.0));
    }
  }
}

TEST(Synthesize, TwentyDistinctSeries) {
  const auto series = SynthesizeReadings(20, 96, Seed256::FromHex("20"));
  ASSERT_EQ(series.size(), 20u);
  std::set<std::vector<double>> unique;
  std::set<std::string> ids;
  for (const auto& s : series) {
    std::vector<double> v;
    for (const auto& r : s.readings) v.push_back(r.active_kwh);
    unique.insert(v);
    ids.insert(s.meter_id);
  }
  EXPECT_EQ(unique.size(), 20u);
  EXPECT_EQ(ids.size(), 20u);
  EXPECT_EQ(series[3].meter_id, "SM000003");
}

TEST(Statistics, PooledAndPopulationStd) {
  std::vector<ReadingSeries> s(2);
  s[0].readings = {{0, 2.0, {}}, {1, 4.0, {}}};
  s[1].readings = {{0, 4.0, {}}, {1, 4.0, {}}, {2, 5.0, {}}, {3, 5.0, {}},
                   {4, 7.0, {}}, {5, 9.0, {}}};
  const auto pooled = PooledReadings(s);
  EXPECT_EQ(pooled.size(), 8u);
  EXPECT_DOUBLE_EQ(StandardDeviation(pooled), 2.0);
  EXPECT_THROW(StandardDeviation(std::vector<double>{}), Error);
}

}  // namespace
}  // namespace smartagg::ingest
