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

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "relaysim/latency.h"
#include "relaysim/relay.h"
#include "relaysim/secure_element.h"
#include "relaysim/terminal.h"

namespace relaysim {

enum class ClockMode { kVirtual, kReal };

struct ScenarioConfig {
  SeConfig se;
  // Latency model of the relay link (relay-attack only).
  AccessPath model = AccessPath::kRelayWifi;
  LatencyParams latency;
  uint64_t seed = 0;
  std::optional<double> timeout_ms;
  std::optional<Bytes> fixed_un;
  Transport transport = Transport::kTcp;
  ClockMode clock = ClockMode::kVirtual;
  RelayAppConfig relay_app;
  std::optional<double> hard_ceiling_ms;
};

// Scenario file:
//   {"card": "card.json" | {...}, "policy": "policy.json" | {...},
//    "seed": "7", "model": "wifi", "latency": {...}, "timeout_ms": 500,
//    "transport": "tcp" | "pipe", "clock": "virtual" | "real",
//    "relay_app": {"pin": "1234", "se_access_granted": true}}
// Relative paths resolve against the scenario file's directory. Returns
// whether the file set a seed.
bool ApplyScenarioFile(const std::filesystem::path& path, ScenarioConfig& cfg);

struct ScenarioResult {
  TransactionReport report;
  bool session_refused = false;
  std::string session_error;
  bool wallet_locked_after = true;
  uint16_t atc_before = 0;
  uint16_t atc_after = 0;

  bool Approved() const {
    return !session_refused && report.outcome == Outcome::kApproved;
  }
};

// What the legitimate wallet app does after the user enters the PIN:
// select the on-card component, VERIFY when the card checks the PIN, unlock.
bool UnlockLocally(SessionBroker& broker, const SeConfig& config);

// Terminal against the secure element with no relay in between. Internal
// origin uses the on-device latency model, contactless the external one.
ScenarioResult RunPosDirect(const ScenarioConfig& cfg, Origin origin,
                            bool unlock);

// Terminal -> card emulator -> wire -> relay app -> internal interface.
ScenarioResult RunRelayAttack(const ScenarioConfig& cfg);

nlohmann::json ScenarioResultToJson(const ScenarioResult& result,
                                    std::string_view scenario, uint64_t seed);

}  // namespace relaysim
