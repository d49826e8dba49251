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

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "smartagg/config.hpp"
#include "smartagg/error.hpp"
#include "smartagg/experiments.hpp"

namespace {

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::size_t> meters;
  std::optional<unsigned> key_bits;
  std::optional<std::string> sigma_scale;
  std::optional<std::string> seed;
  std::optional<std::string> out;
};

// Precedence: flags > config file > defaults.
smartagg::RunConfig Resolve(const Overrides& o) {
  smartagg::RunConfig cfg;
  std::optional<std::string> path = o.config;
  if (!path) {
    if (const char* env = std::getenv("SMARTAGG_CONFIG")) path = env;
  }
  if (path) cfg = smartagg::LoadConfigFile(*path, cfg);
  if (o.meters) cfg.meters = *o.meters;
  if (o.key_bits) cfg.key_bits = *o.key_bits;
  if (o.sigma_scale) {
    cfg.sigma_scale = smartagg::ParseSigmaScale(*o.sigma_scale);
  }
  if (o.seed) {
    cfg.master_seed = smartagg::Seed256::FromHex(*o.seed);
  }
  if (o.out) cfg.out_dir = *o.out;
  if (cfg.meters > 0) cfg.links.SetMeterCount(cfg.meters);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving smart-meter aggregation simulator"};
  app.require_subcommand(1);

  Overrides o;
  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "Config file (key=value / INI)");
    sub->add_option("--meters", o.meters, "Number of meters M");
    sub->add_option("--key-bits", o.key_bits, "Paillier modulus size");
    sub->add_option("--sigma-scale", o.sigma_scale,
                    "Noise multiplier, e.g. 1/3 or 6");
    sub->add_option("--seed", o.seed, "Master seed (hex)");
    sub->add_option("--out", o.out, "Output directory");
  };

  CLI::App* run = app.add_subcommand("run", "Run one protocol round per interval");
  CLI::App* bench = app.add_subcommand("bench", "Per-entity timing across key sizes");
  CLI::App* privacy = app.add_subcommand("privacy", "NCE across noise levels");
  CLI::App* comm = app.add_subcommand("comm", "Frame sizes, link times, bandwidth");
  for (CLI::App* sub : {run, bench, privacy, comm}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    const smartagg::RunConfig cfg = Resolve(o);
    if (run->parsed()) smartagg::experiments::CmdRun(cfg, std::cout);
    if (bench->parsed()) smartagg::experiments::CmdBench(cfg, std::cout);
    if (privacy->parsed()) smartagg::experiments::CmdPrivacy(cfg, std::cout);
    if (comm->parsed()) smartagg::experiments::CmdComm(cfg, std::cout);
  } catch (const smartagg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
