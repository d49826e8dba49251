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
#include <optional>
#include <string_view>
#include <utility>

#include "smartagg/meter_id.hpp"
#include "smartagg/random.hpp"

namespace smartagg::noise {

enum class Transform { kBoxMuller, kInverseCdf };

std::optional<Transform> ParseTransform(std::string_view name);
std::string_view TransformName(Transform t);

/// Addresses one meter's noise stream for one interval. Every output is a
/// pure function of (master_seed, meter_id, interval, counter).
struct NoiseContext {
  Seed256 master_seed;
  MeterId meter_id;
  std::uint64_t interval = 0;
  double sigma = 1.0;  // kWh
  std::uint64_t counter = 0;
};

struct GaussianSample {
  double value = 0.0;          // kWh
  std::int64_t quantized = 0;  // round(value * scale)
};

/// The 64-bit PRNG word at position `index` of the context's stream.
std::uint64_t RawWord(const NoiseContext& ctx, std::uint64_t index);

/// Maps a 64-bit word to [0, 1) as floor(x / 2^64) at double precision.
double ToUnitInterval(std::uint64_t word);

/// Two uniforms from the next two stream positions; u1 is never 0 (an exact
/// 0 is remapped to 2^-64). Advances ctx.counter by 2.
std::pair<double, double> UniformPair(NoiseContext& ctx);

/// Box-Muller: R = sqrt(-2 ln u1), theta = 2 pi u2, returns
/// (sigma R cos theta, sigma R sin theta). Requires u1 in (0, 1].
std::pair<double, double> BoxMuller(double u1, double u2, double sigma);

/// Standard normal quantile. Rational initial guess refined by one Halley
/// step against erfc. Requires u in (0, 1).
double InverseNormalCdf(double u);

/// sigma * InverseNormalCdf(u).
double InverseCdfSample(double u, double sigma);

GaussianSample Quantize(double value, std::uint64_t scale);

/// Picks the first Box-Muller output for bit 0, the second for bit 1.
double SelectOutput(const std::pair<double, double>& outputs, unsigned bit);

/// One perturbation value for a non-designated meter. Box-Muller draws a
/// pair, then a selector bit from the next stream word; inverse-CDF uses a
/// single uniform. The result is quantized to `scale`.
GaussianSample SampleRoundNoise(NoiseContext& ctx, Transform transform,
                                std::uint64_t scale);

}  // namespace smartagg::noise
