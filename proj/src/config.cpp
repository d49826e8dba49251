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

#include "smartagg/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "smartagg/error.hpp"

namespace smartagg {
namespace {

namespace pt = boost::property_tree;

double ParseDouble(std::string_view text, std::string_view key) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::kConfigError,
                std::string(key) + ": not a number: '" + s + "'");
  }
  return v;
}

template <class T>
T ParseUnsigned(std::string_view text, std::string_view key) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kConfigError, std::string(key) +
                                             ": not a non-negative integer: '" +
                                             std::string(text) + "'");
  }
  return v;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

Seed256 ParseSeed(const std::string& text, std::string_view key) {
  try {
    return Seed256::FromHex(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, std::string(key) + ": " + e.what());
  }
}

const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = [] {
    std::set<std::string> k = {
        "key_bits", "meters", "intervals", "scale", "domain", "out",
        "noise.transform", "noise.sigma_scale", "noise.master_seed",
        "seeds.master", "seeds.keygen", "seeds.selection", "seeds.noise",
        "seeds.profile", "ingest.csv", "profile.base_kwh",
        "profile.morning_amplitude_kwh", "profile.morning_center_hour",
        "profile.morning_width_hours", "profile.evening_amplitude_kwh",
        "profile.evening_center_hour", "profile.evening_width_hours",
        "profile.jitter_sigma", "payload.id_sel", "payload.noise_total",
        "payload.noise", "payload.noisy_reading", "payload.aggregate",
        "bench.key_bits", "bench.repetitions", "privacy.sigma_scales",
        "privacy.bins"};
    for (const char* link : {"wisun", "lte", "eth_core", "eth_edge"}) {
      for (const char* field : {"base_header", "fragment_header",
                                "fragment_payload", "bandwidth_bps"}) {
        k.insert(std::string("links.") + link + "." + field);
      }
    }
    return k;
  }();
  return keys;
}

using FlatConfig = std::map<std::string, std::string>;

// "[links] wisun.base_header = 5" and "[links.wisun] base_header = 5" both
// become "links.wisun.base_header".
void Flatten(const pt::ptree& tree, const std::string& prefix,
             FlatConfig& out) {
  for (const auto& [name, child] : tree) {
    const std::string key = prefix.empty() ? name : prefix + "." + name;
    if (!child.empty()) {
      Flatten(child, key, out);
    } else if (!KnownKeys().contains(key)) {
      throw Error(ErrorCode::kConfigError, "unknown config key '" + key + "'");
    } else if (!out.emplace(key, child.data()).second) {
      throw Error(ErrorCode::kConfigError, "duplicate config key '" + key + "'");
    }
  }
}

std::optional<std::string> Lookup(const FlatConfig& flat,
                                  const std::string& key) {
  auto it = flat.find(key);
  if (it == flat.end()) return std::nullopt;
  return it->second;
}

void ApplyLink(const FlatConfig& flat, const std::string& prefix,
               simnet::LinkModel& link) {
  auto get = [&](const char* field) {
    return Lookup(flat, "links." + prefix + "." + field);
  };
  if (auto v = get("base_header")) {
    link.base_header_bytes = ParseUnsigned<std::uint64_t>(*v, prefix);
  }
  if (auto v = get("fragment_header")) {
    link.per_fragment_header_bytes = ParseUnsigned<std::uint64_t>(*v, prefix);
  }
  if (auto v = get("fragment_payload")) {
    link.max_fragment_payload_bytes = ParseUnsigned<std::uint64_t>(*v, prefix);
  }
  if (auto v = get("bandwidth_bps")) {
    link.bandwidth_bps = ParseUnsigned<std::int64_t>(*v, prefix);
  }
}

}  // namespace

SigmaScale ParseSigmaScale(std::string_view text) {
  const std::string label(text);
  const auto slash = text.find('/');
  double value;
  if (slash == std::string_view::npos) {
    value = ParseDouble(text, "sigma_scale");
  } else {
    const double num = ParseDouble(text.substr(0, slash), "sigma_scale");
    const double den = ParseDouble(text.substr(slash + 1), "sigma_scale");
    if (den == 0.0) {
      throw Error(ErrorCode::kConfigError, "sigma_scale: zero denominator");
    }
    value = num / den;
  }
  if (value < 0.0) {
    throw Error(ErrorCode::kConfigError, "sigma_scale must be >= 0");
  }
  return SigmaScale{label, value};
}

std::vector<SigmaScale> DefaultSigmaSweep() {
  std::vector<SigmaScale> out;
  for (const char* s : {"1/9", "1/6", "1/3", "1", "3", "6", "9"}) {
    out.push_back(ParseSigmaScale(s));
  }
  return out;
}

Seed256 RunConfig::KeygenSeed() const {
  return keygen_seed.value_or(master_seed.Derive(seed_tag::kKeygen));
}
Seed256 RunConfig::SelectionSeed() const {
  return selection_seed.value_or(master_seed.Derive(seed_tag::kSelection));
}
Seed256 RunConfig::NoiseSeed() const {
  return noise_seed.value_or(master_seed.Derive(seed_tag::kNoise));
}
Seed256 RunConfig::ProfileSeed() const {
  return profile_seed.value_or(master_seed.Derive(seed_tag::kProfile));
}
Seed256 RunConfig::NonceSeed() const {
  return master_seed.Derive(seed_tag::kNonce);
}

void RunConfig::Validate() const {
  if (key_bits < 16 || key_bits > 4096 || key_bits % 2 != 0) {
    throw Error(ErrorCode::kConfigError,
                "key_bits must be even and in [16, 4096]");
  }
  if (meters == 0) throw Error(ErrorCode::kConfigError, "meters must be >= 1");
  if (intervals == 0) {
    throw Error(ErrorCode::kConfigError, "intervals must be >= 1");
  }
  if (scale == 0) throw Error(ErrorCode::kConfigError, "scale must be >= 1");
  if (bench_key_bits.empty()) {
    throw Error(ErrorCode::kConfigError, "bench key size list is empty");
  }
  if (bench_repetitions < 3) {
    throw Error(ErrorCode::kConfigError, "bench repetitions must be >= 3");
  }
  if (privacy_scales.empty()) {
    throw Error(ErrorCode::kConfigError, "privacy sigma_scales list is empty");
  }
  if (nce_bins == 0) throw Error(ErrorCode::kConfigError, "bins must be >= 1");
  for (const simnet::LinkModel* l :
       {&links.nan, &links.lte, &links.eth_core, &links.eth_edge}) {
    try {
      l->Validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfigError, e.what());
    }
  }
}

RunConfig LoadConfigFile(const std::filesystem::path& path, RunConfig cfg) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
  FlatConfig flat;
  Flatten(tree, "", flat);
  auto get = [&](const std::string& key) { return Lookup(flat, key); };

  if (auto v = get("key_bits")) cfg.key_bits = ParseUnsigned<unsigned>(*v, "key_bits");
  if (auto v = get("meters")) cfg.meters = ParseUnsigned<std::size_t>(*v, "meters");
  if (auto v = get("intervals")) cfg.intervals = ParseUnsigned<std::size_t>(*v, "intervals");
  if (auto v = get("scale")) cfg.scale = ParseUnsigned<std::uint64_t>(*v, "scale");
  if (auto v = get("domain")) cfg.domain = *v;
  if (auto v = get("out")) cfg.out_dir = *v;

  if (auto v = get("noise.transform")) {
    auto t = noise::ParseTransform(*v);
    if (!t) {
      throw Error(ErrorCode::kConfigError,
                  "noise.transform must be box-muller or inverse-cdf");
    }
    cfg.transform = *t;
  }
  if (auto v = get("noise.sigma_scale")) cfg.sigma_scale = ParseSigmaScale(*v);
  if (auto v = get("noise.master_seed")) {
    cfg.noise_seed = ParseSeed(*v, "noise.master_seed");
  }

  if (auto v = get("seeds.master")) cfg.master_seed = ParseSeed(*v, "seeds.master");
  if (auto v = get("seeds.keygen")) cfg.keygen_seed = ParseSeed(*v, "seeds.keygen");
  if (auto v = get("seeds.selection")) cfg.selection_seed = ParseSeed(*v, "seeds.selection");
  if (auto v = get("seeds.noise")) cfg.noise_seed = ParseSeed(*v, "seeds.noise");
  if (auto v = get("seeds.profile")) cfg.profile_seed = ParseSeed(*v, "seeds.profile");

  if (auto v = get("ingest.csv")) cfg.readings_csv = *v;

  if (auto v = get("profile.base_kwh")) cfg.profile.base_kwh = ParseDouble(*v, "profile.base_kwh");
  if (auto v = get("profile.morning_amplitude_kwh")) cfg.profile.morning_amplitude_kwh = ParseDouble(*v, "profile.morning_amplitude_kwh");
  if (auto v = get("profile.morning_center_hour")) cfg.profile.morning_center_hour = ParseDouble(*v, "profile.morning_center_hour");
  if (auto v = get("profile.morning_width_hours")) cfg.profile.morning_width_hours = ParseDouble(*v, "profile.morning_width_hours");
  if (auto v = get("profile.evening_amplitude_kwh")) cfg.profile.evening_amplitude_kwh = ParseDouble(*v, "profile.evening_amplitude_kwh");
  if (auto v = get("profile.evening_center_hour")) cfg.profile.evening_center_hour = ParseDouble(*v, "profile.evening_center_hour");
  if (auto v = get("profile.evening_width_hours")) cfg.profile.evening_width_hours = ParseDouble(*v, "profile.evening_width_hours");
  if (auto v = get("profile.jitter_sigma")) cfg.profile.jitter_sigma_kwh = ParseDouble(*v, "profile.jitter_sigma");

  ApplyLink(flat, "wisun", cfg.links.nan);
  ApplyLink(flat, "lte", cfg.links.lte);
  ApplyLink(flat, "eth_core", cfg.links.eth_core);
  ApplyLink(flat, "eth_edge", cfg.links.eth_edge);

  if (auto v = get("payload.id_sel")) cfg.payloads.id_sel = ParseUnsigned<std::uint64_t>(*v, "payload.id_sel");
  if (auto v = get("payload.noise_total")) cfg.payloads.noise_total = ParseUnsigned<std::uint64_t>(*v, "payload.noise_total");
  if (auto v = get("payload.noise")) cfg.payloads.noise = ParseUnsigned<std::uint64_t>(*v, "payload.noise");
  if (auto v = get("payload.noisy_reading")) cfg.payloads.noisy_reading = ParseUnsigned<std::uint64_t>(*v, "payload.noisy_reading");
  if (auto v = get("payload.aggregate")) cfg.payloads.aggregate = ParseUnsigned<std::uint64_t>(*v, "payload.aggregate");

  if (auto v = get("bench.key_bits")) {
    cfg.bench_key_bits.clear();
    for (const std::string& item : SplitList(*v)) {
      cfg.bench_key_bits.push_back(ParseUnsigned<unsigned>(item, "bench.key_bits"));
    }
  }
  if (auto v = get("bench.repetitions")) cfg.bench_repetitions = ParseUnsigned<std::size_t>(*v, "bench.repetitions");

  if (auto v = get("privacy.sigma_scales")) {
    cfg.privacy_scales.clear();
    for (const std::string& item : SplitList(*v)) {
      cfg.privacy_scales.push_back(ParseSigmaScale(item));
    }
  }
  if (auto v = get("privacy.bins")) cfg.nce_bins = ParseUnsigned<std::size_t>(*v, "privacy.bins");

  cfg.links.SetMeterCount(cfg.meters);
  return cfg;
}

}  // namespace smartagg
