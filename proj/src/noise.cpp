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

#include "smartagg/noise.hpp"

#include <cmath>
#include <numbers>

#include "smartagg/error.hpp"

namespace smartagg::noise {
namespace {

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
constexpr double kTwoPow64Inv = 1.0 / 18446744073709551616.0;

// Acklam's rational approximation, valid for 0 < p <= 0.5.
double AcklamLowerHalf(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLowBreak = 0.02425;

  if (p < kLowBreak) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

std::optional<Transform> ParseTransform(std::string_view name) {
  if (name == "box-muller") return Transform::kBoxMuller;
  if (name == "inverse-cdf") return Transform::kInverseCdf;
  return std::nullopt;
}

std::string_view TransformName(Transform t) {
  return t == Transform::kBoxMuller ? "box-muller" : "inverse-cdf";
}

std::uint64_t RawWord(const NoiseContext& ctx, std::uint64_t index) {
  const Block256 counter{ctx.meter_id.High(), ctx.meter_id.Low(), ctx.interval,
                         index / 4};
  return Threefry4x64(counter, ctx.master_seed.words)[index % 4];
}

double ToUnitInterval(std::uint64_t word) {
  // Keep the top 53 bits so the conversion is exact and never rounds to 1.
  return static_cast<double>(word >> 11) * kTwoPow53Inv;
}

std::pair<double, double> UniformPair(NoiseContext& ctx) {
  double u1 = ToUnitInterval(RawWord(ctx, ctx.counter));
  const double u2 = ToUnitInterval(RawWord(ctx, ctx.counter + 1));
  ctx.counter += 2;
  if (u1 == 0.0) u1 = kTwoPow64Inv;
  return {u1, u2};
}

std::pair<double, double> BoxMuller(double u1, double u2, double sigma) {
  if (!(u1 > 0.0 && u1 <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "Box-Muller needs u1 in (0, 1]");
  }
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {sigma * radius * std::cos(theta), sigma * radius * std::sin(theta)};
}

double InverseNormalCdf(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "inverse normal CDF needs u in (0, 1)");
  }
  if (u == 0.5) return 0.0;
  // Solve in the lower half where 1 - u is exact, then reflect.
  const bool upper = u > 0.5;
  const double p = upper ? 1.0 - u : u;

  double x = AcklamLowerHalf(p);
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double step = e * std::sqrt(2.0 * std::numbers::pi) *
                      std::exp(0.5 * x * x);
  x -= step / (1.0 + 0.5 * x * step);
  return upper ? -x : x;
}

double InverseCdfSample(double u, double sigma) {
  return sigma * InverseNormalCdf(u);
}

GaussianSample Quantize(double value, std::uint64_t scale) {
  return GaussianSample{
      value, std::llround(value * static_cast<double>(scale))};
}

double SelectOutput(const std::pair<double, double>& outputs, unsigned bit) {
  return bit == 0 ? outputs.first : outputs.second;
}

GaussianSample SampleRoundNoise(NoiseContext& ctx, Transform transform,
                                std::uint64_t scale) {
  if (transform == Transform::kInverseCdf) {
    double u = ToUnitInterval(RawWord(ctx, ctx.counter));
    ctx.counter += 1;
    if (u == 0.0) u = kTwoPow64Inv;
    return Quantize(InverseCdfSample(u, ctx.sigma), scale);
  }
  const auto [u1, u2] = UniformPair(ctx);
  const unsigned bit =
      static_cast<unsigned>(RawWord(ctx, ctx.counter) >> 63);
  ctx.counter += 1;
  return Quantize(SelectOutput(BoxMuller(u1, u2, ctx.sigma), bit), scale);
}

}  // namespace smartagg::noise
