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

#include <string>

#include <json.hpp>

#include "relaysim/terminal.h"

namespace relaysim {

// Report schema (all byte fields uppercase hex):
//   outcome        "Approved" | "Declined" | "TimedOut" | "CardRemoved"
//   reason         decline detail, "" when approved
//   aid, un, track1, track2, cvc3_track1, cvc3_track2
//   pan, expiry, service_code, discretionary
//   atc            integer or null
//   total_ms       number
//   steps          [{name, command, response, round_trip_ms}]
nlohmann::json ReportToJson(const TransactionReport& report);
TransactionReport ReportFromJson(const nlohmann::json& json);

// Human-readable trace: one block per step with both APDUs and the timing.
std::string ReportTrace(const TransactionReport& report);

}  // namespace relaysim
