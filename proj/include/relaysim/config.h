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
#include <stdexcept>

#include <json.hpp>

#include "relaysim/latency.h"
#include "relaysim/secure_element.h"

namespace relaysim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Card configuration file:
//   {
//     "profile": {"pan": "...", "expiry": "YYMM", "service_code": "101",
//                 "discretionary": "...", "cardholder": " /",
//                 "app_version": "0001",
//                 "track1_cvc3_bitmap": "000000000038",
//                 "track1_un_atc_bitmap": "0000000003C6",
//                 "track1_atc_digits": "4",
//                 "track2_cvc3_bitmap": "0038", "track2_un_atc_bitmap": "03C6",
//                 "track2_atc_digits": "4"},
//     "secure_element": {"cvc3_key": "<32 hex>", "initial_atc": "0",
//                        "wallet_locked": true, "pin": "1234",
//                        "pin_tries": "3", "payment_aid": "<hex>",
//                        "application_label": "MasterCard",
//                        "directory": [{"aid": "<hex>", "priority": "1"}],
//                        "list_cards_stub": "<hex>",
//                        "get_status_stub": "<hex>",
//                        "isd_response": "<hex>"}
//   }
// Byte fields are hex strings, digit fields decimal strings (bare integers
// are accepted too). Every key is optional; unknown keys are rejected.
void ApplyCardConfig(const nlohmann::json& json, SeConfig& config);

// Policy file: {"require_pin_on_card": false,
//               "internal_disabled_aids": ["<hex>", ...]}
CountermeasurePolicy ParsePolicy(const nlohmann::json& json);

// Overrides for LatencyParams, keyed by field name (e.g. "wifi_max_ms").
void ApplyLatencyOverrides(const nlohmann::json& json, LatencyParams& params);

// Throws ConfigError when the file is missing or not valid JSON.
nlohmann::json ReadJsonFile(const std::filesystem::path& path);

}  // namespace relaysim
