/*
 * Copyright (C) 2026 The relaysim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "relaysim/latency.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace relaysim {

std::string_view AccessPathName(AccessPath path) {
  switch (path) {
    case AccessPath::kDirectExternal:
      return "external";
    case AccessPath::kDirectInternal:
      return "internal";
    case AccessPath::kRelayWifi:
      return "wifi";
    case AccessPath::kRelayInternet:
      return "internet";
    case AccessPath::kInstant:
      return "instant";
  }
  return "unknown";
}

std::optional<AccessPath> ParseAccessPath(std::string_view name) {
  if (name == "external" || name == "direct-external") {
    return AccessPath::kDirectExternal;
  }
  if (name == "internal" || name == "direct-internal") {
    return AccessPath::kDirectInternal;
  }
  if (name == "wifi" || name == "relay-wifi") return AccessPath::kRelayWifi;
  if (name == "internet" || name == "relay-internet") {
    return AccessPath::kRelayInternet;
  }
  if (name == "instant" || name == "none") return AccessPath::kInstant;
  return std::nullopt;
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t master, std::string_view label) {
  uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (char c : label) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001B3ULL;
  }
  return SplitMix64(master ^ h);
}

double SampleDelay(const LatencyModel& model, uint64_t seed) {
  const LatencyParams& p = model.params;
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  switch (model.path) {
    case AccessPath::kInstant:
      return 0.0;
    case AccessPath::kDirectExternal: {
      std::normal_distribution<double> d(p.external_mean_ms,
                                         p.external_stddev_ms);
      return std::max(0.0, d(rng));
    }
    case AccessPath::kDirectInternal:
      return uniform(p.internal_min_ms, p.internal_max_ms);
    case AccessPath::kRelayWifi: {
      const double base = uniform(p.internal_min_ms, p.internal_max_ms);
      return base + uniform(p.wifi_min_ms, p.wifi_max_ms);
    }
    case AccessPath::kRelayInternet: {
      const double base = uniform(p.internal_min_ms, p.internal_max_ms);
      const bool heavy = uniform(0.0, 1.0) < p.internet_heavy_weight;
      if (heavy) {
        std::lognormal_distribution<double> d(
            std::log(p.internet_heavy_median_ms), p.internet_heavy_sigma);
        return base + p.internet_heavy_floor_ms + d(rng);
      }
      // mode = exp(mu - sigma^2)
      const double sigma = p.internet_light_sigma;
      std::lognormal_distribution<double> d(
          std::log(p.internet_light_mode_ms) + sigma * sigma, sigma);
      return base + p.internet_floor_ms + d(rng);
    }
  }
  return 0.0;
}

}  // namespace relaysim
