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

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>

#include "smartagg/error.hpp"
#include "smartagg/meter_id.hpp"
#include "smartagg/noise.hpp"

namespace smartagg::ingest {
namespace {

std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void Fail(std::string_view source, std::size_t line,
                       const std::string& what) {
  throw Error(ErrorCode::kParseError, std::string(source) + ":" +
                                          std::to_string(line) + ": " + what);
}

bool ParseInt(std::string_view s, int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

double ParseNumber(std::string_view text, std::string_view source,
                   std::size_t line, std::string_view column) {
  const std::string s(Trim(text));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    Fail(source, line,
         std::string(column) + " is not a number: '" + s + "'");
  }
  if (v < 0.0) {
    Fail(source, line, std::string(column) + " is negative: " + s);
  }
  return v;
}

std::string FormatKwh(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double BumpShape(double hour, double center, double width) {
  // Circular distance so evening bumps wrap past midnight.
  double d = std::fabs(hour - center);
  d = std::min(d, 24.0 - d);
  return std::exp(-0.5 * (d / width) * (d / width));
}

}  // namespace

std::int64_t ParseTimestamp(std::string_view text) {
  using namespace std::chrono;
  text = Trim(text);
  if (text.ends_with("Z")) {
    text.remove_suffix(1);
  } else if (text.ends_with("+00:00")) {
    text.remove_suffix(6);
  }
  if (text.size() != 19 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != ' ') || text[13] != ':' ||
      text[16] != ':') {
    throw Error(ErrorCode::kParseError,
                "timestamp is not YYYY-MM-DDTHH:MM:SS: '" + std::string(text) +
                    "'");
  }
  int y, mo, d, h, mi, s;
  if (!ParseInt(text.substr(0, 4), y) || !ParseInt(text.substr(5, 2), mo) ||
      !ParseInt(text.substr(8, 2), d) || !ParseInt(text.substr(11, 2), h) ||
      !ParseInt(text.substr(14, 2), mi) || !ParseInt(text.substr(17, 2), s)) {
    throw Error(ErrorCode::kParseError,
                "timestamp has non-numeric fields: '" + std::string(text) +
                    "'");
  }
  const year_month_day date{year{y}, month{static_cast<unsigned>(mo)},
                            day{static_cast<unsigned>(d)}};
  if (!date.ok() || h > 23 || mi > 59 || s > 59 || h < 0 || mi < 0 || s < 0) {
    throw Error(ErrorCode::kParseError,
                "timestamp out of range: '" + std::string(text) + "'");
  }
  const auto days_since_epoch = sys_days(date).time_since_epoch().count();
  return static_cast<std::int64_t>(days_since_epoch) * 86400 + h * 3600 +
         mi * 60 + s;
}

std::string FormatTimestamp(std::int64_t epoch_seconds) {
  using namespace std::chrono;
  std::int64_t days_count = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days_count;
  }
  const year_month_day date{sys_days{days{days_count}}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()),
                static_cast<unsigned>(date.day()),
                static_cast<int>(rem / 3600), static_cast<int>(rem % 3600 / 60),
                static_cast<int>(rem % 60));
  return buf;
}

std::vector<ReadingSeries> ParseReadings(std::istream& in,
                                         const CsvSchema& schema,
                                         std::string_view source) {
  if (schema.interval_seconds == 0) {
    throw Error(ErrorCode::kInvalidArgument, "interval_seconds must be > 0");
  }
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) Fail(source, 1, "missing header");
  ++line_no;

  std::vector<std::string_view> header = SplitCsv(Trim(line));
  for (auto& h : header) h = Trim(h);
  const bool base_ok = header.size() >= 3 && header[0] == "meter_id" &&
                       header[1] == "timestamp_iso8601" &&
                       header[2] == "active_kwh";
  const bool with_reactive = header.size() == 4 && header[3] == "reactive_kvarh";
  if (!base_ok || (header.size() != 3 && !with_reactive)) {
    Fail(source, 1,
         "header must be meter_id,timestamp_iso8601,active_kwh"
         "[,reactive_kvarh]");
  }
  if (schema.reactive_column.has_value() &&
      *schema.reactive_column != with_reactive) {
    Fail(source, 1, "reactive_kvarh column presence does not match schema");
  }

  std::vector<ReadingSeries> series;
  std::map<std::string, std::size_t> index_of;
  std::map<std::string, std::map<std::uint64_t, std::size_t>> line_of;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = Trim(line);
    if (row.empty()) continue;
    std::vector<std::string_view> fields = SplitCsv(row);
    if (fields.size() != header.size()) {
      Fail(source, line_no,
           "expected " + std::to_string(header.size()) + " fields, got " +
               std::to_string(fields.size()));
    }
    const std::string meter(Trim(fields[0]));
    if (meter.empty() || meter.size() > 16) {
      Fail(source, line_no, "meter_id must be 1..16 characters");
    }
    std::int64_t ts;
    try {
      ts = ParseTimestamp(fields[1]);
    } catch (const Error& e) {
      Fail(source, line_no, e.what());
    }
    if (ts < 0 || ts % schema.interval_seconds != 0) {
      Fail(source, line_no, "timestamp is not aligned to the interval grid");
    }
    Reading r;
    r.interval_index = static_cast<std::uint64_t>(ts) / schema.interval_seconds;
    r.active_kwh = ParseNumber(fields[2], source, line_no, "active_kwh");
    if (with_reactive) {
      r.reactive_kvarh =
          ParseNumber(fields[3], source, line_no, "reactive_kvarh");
    }

    auto [it, inserted] = index_of.emplace(meter, series.size());
    if (inserted) {
      series.push_back(ReadingSeries{meter, schema.interval_seconds, {}});
    }
    if (!line_of[meter].emplace(r.interval_index, line_no).second) {
      Fail(source, line_no, "duplicate interval for meter " + meter);
    }
    series[it->second].readings.push_back(r);
  }

  for (ReadingSeries& s : series) {
    std::sort(s.readings.begin(), s.readings.end(),
              [](const Reading& a, const Reading& b) {
                return a.interval_index < b.interval_index;
              });
    std::string missing;
    std::size_t missing_count = 0;
    for (std::size_t i = 1; i < s.readings.size(); ++i) {
      for (std::uint64_t k = s.readings[i - 1].interval_index + 1;
           k < s.readings[i].interval_index; ++k) {
        if (missing_count++ < 16) {
          missing += (missing.empty() ? "" : ", ") +
                     FormatTimestamp(static_cast<std::int64_t>(
                         k * schema.interval_seconds));
        }
      }
    }
    if (missing_count > 0) {
      throw Error(ErrorCode::kGapError,
                  std::string(source) + ": meter " + s.meter_id + " is missing " +
                      std::to_string(missing_count) + " interval(s): " +
                      missing + (missing_count > 16 ? ", ..." : ""));
    }
  }
  return series;
}

std::vector<ReadingSeries> LoadReadings(const std::filesystem::path& path,
                                        const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return ParseReadings(in, schema, path.string());
}

void WriteReadings(std::ostream& out, std::span<const ReadingSeries> series) {
  bool reactive = false;
  for (const ReadingSeries& s : series) {
    for (const Reading& r : s.readings) {
      reactive = reactive || r.reactive_kvarh.has_value();
    }
  }
  out << "meter_id,timestamp_iso8601,active_kwh"
      << (reactive ? ",reactive_kvarh" : "") << '\n';
  for (const ReadingSeries& s : series) {
    for (const Reading& r : s.readings) {
      out << s.meter_id << ','
          << FormatTimestamp(static_cast<std::int64_t>(r.interval_index *
                                                       s.interval_seconds))
          << ',' << FormatKwh(r.active_kwh);
      if (reactive) out << ',' << FormatKwh(r.reactive_kvarh.value_or(0.0));
      out << '\n';
    }
  }
}

std::vector<ReadingSeries> SynthesizeReadings(std::size_t meter_count,
                                              std::size_t intervals,
                                              const Seed256& profile_seed,
                                              const ProfileParams& params) {
  if (meter_count == 0 || intervals == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "need at least one meter and one interval");
  }
  std::vector<ReadingSeries> out;
  out.reserve(meter_count);
  for (std::size_t k = 0; k < meter_count; ++k) {
    const MeterId id = MeterId::FromIndex(static_cast<std::uint32_t>(k));
    CounterRng rng(profile_seed, id.High(), id.Low(), 0);
    auto uniform = [&rng](double lo, double hi) {
      return lo + (hi - lo) * noise::ToUnitInterval(rng.NextU64());
    };
    // Household-specific scaling and timing.
    const double base = params.base_kwh * uniform(0.5, 1.5);
    const double morning_amp = params.morning_amplitude_kwh * uniform(0.5, 1.5);
    const double evening_amp = params.evening_amplitude_kwh * uniform(0.6, 1.4);
    const double morning_center = params.morning_center_hour + uniform(-0.75, 0.75);
    const double evening_center = params.evening_center_hour + uniform(-1.0, 1.0);

    ReadingSeries s{id.ToString(), kDefaultIntervalSeconds, {}};
    s.readings.reserve(intervals);
    for (std::size_t t = 0; t < intervals; ++t) {
      const double hour =
          static_cast<double>(t % kIntervalsPerDay) * 24.0 / kIntervalsPerDay;
      double u1 = noise::ToUnitInterval(rng.NextU64());
      if (u1 == 0.0) u1 = 0x1p-64;
      const double u2 = noise::ToUnitInterval(rng.NextU64());
      const double jitter = noise::BoxMuller(u1, u2, params.jitter_sigma_kwh).first;

      double kwh = base +
                   morning_amp * BumpShape(hour, morning_center,
                                           params.morning_width_hours) +
                   evening_amp * BumpShape(hour, evening_center,
                                           params.evening_width_hours) +
                   jitter;
      kwh = std::max(0.0, std::round(kwh * 1000.0) / 1000.0);
      // Reactive energy rides along so minimization has something to drop.
      const double kvarh = std::round(kwh * 0.3 * 1000.0) / 1000.0;
      s.readings.push_back(Reading{t, kwh, kvarh});
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<double> PooledReadings(std::span<const ReadingSeries> series) {
  std::vector<double> out;
  for (const ReadingSeries& s : series) {
    for (const Reading& r : s.readings) out.push_back(r.active_kwh);
  }
  return out;
}

double StandardDeviation(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kEmptyInput, "standard deviation of no values");
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

}  // namespace smartagg::ingest
