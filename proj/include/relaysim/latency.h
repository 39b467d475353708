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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace relaysim {

// The four measured ways of reaching the secure element, plus a degenerate
// zero-delay path used for pass-through checks.
enum class AccessPath {
  kDirectExternal,
  kDirectInternal,
  kRelayWifi,
  kRelayInternet,
  kInstant,
};

std::string_view AccessPathName(AccessPath path);
// Accepts "external", "internal", "wifi", "internet", "instant" and the
// enum-style names ("direct-external", "relay-wifi", ...).
std::optional<AccessPath> ParseAccessPath(std::string_view name);

// Distribution parameters, in milliseconds. The defaults are fitted to the
// published ranges, not measured:
//   external  normal(30, 3), clipped at 0
//   internal  uniform(50, 80)
//   wifi      internal + uniform(100, 210)
//   internet  internal + mixture of
//               150 + lognormal(mode 85, sigma 0.5)          (weight 0.45)
//               1000 + lognormal(median 800, sigma 1.0)      (weight 0.55)
struct LatencyParams {
  double external_mean_ms = 30.0;
  double external_stddev_ms = 3.0;
  double internal_min_ms = 50.0;
  double internal_max_ms = 80.0;
  double wifi_min_ms = 100.0;
  double wifi_max_ms = 210.0;
  double internet_floor_ms = 150.0;
  double internet_light_mode_ms = 85.0;
  double internet_light_sigma = 0.5;
  double internet_heavy_weight = 0.55;
  double internet_heavy_floor_ms = 1000.0;
  double internet_heavy_median_ms = 800.0;
  double internet_heavy_sigma = 1.0;
};

struct LatencyModel {
  AccessPath path = AccessPath::kInstant;
  LatencyParams params;
};

// One round-trip delay. A pure function of (model, seed): relay paths draw
// their DirectInternal component first, so the same seed yields the same
// on-device share across paths.
double SampleDelay(const LatencyModel& model, uint64_t seed);

uint64_t SplitMix64(uint64_t x);
// Independent stream seed for a named consumer of a master seed.
uint64_t DeriveSeed(uint64_t master, std::string_view label);

// Sequence of delays with per-sample seeds derived from one master seed.
class DelaySampler {
 public:
  DelaySampler(LatencyModel model, uint64_t seed)
      : model_(model), seed_(seed) {}

  double Next() { return SampleDelay(model_, SampleSeed(seed_, index_++)); }

  static uint64_t SampleSeed(uint64_t seed, uint64_t index) {
    return SplitMix64(seed ^ SplitMix64(index + 0x5EEDULL));
  }

  const LatencyModel& model() const { return model_; }

 private:
  LatencyModel model_;
  uint64_t seed_;
  uint64_t index_ = 0;
};

}  // namespace relaysim
