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
#include <stdexcept>
#include <string>
#include <vector>

#include "relaysim/apdu.h"
#include "relaysim/card_interface.h"
#include "relaysim/sim_clock.h"

namespace relaysim {

class MalformedAfl : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedTrack : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AflEntry {
  uint8_t sfi;
  uint8_t first_record;
  uint8_t last_record;
  uint8_t signed_records;

  bool operator==(const AflEntry&) const = default;
};

// Application File Locator: four bytes per entry, SFI in the top five bits
// of the first byte.
std::vector<AflEntry> ParseAfl(ByteView afl);

struct Track2Data {
  std::string pan;
  std::string expiry;
  std::string service_code;
  std::string discretionary;
};

// BCD track 2 equivalent data: PAN 'D' YYMM service discretionary ['F'].
Track2Data ParseTrack2(ByteView raw);

struct TerminalConfig {
  // Ceiling for the whole transaction, first command to last response.
  std::optional<double> timeout_ms;
  // Seed for the unpredictable number.
  uint64_t un_seed = 0;
  // Replaces the random UN, for reproducing recorded traces.
  std::optional<Bytes> fixed_un;
  // When non-empty, only these applications are accepted from the PPSE.
  std::vector<Aid> accepted_aids;
};

// Four random bytes derived from the seed.
Bytes GenerateUn(uint64_t seed);

enum class Outcome { kApproved, kDeclined, kTimedOut, kCardRemoved };

const char* OutcomeName(Outcome outcome);

struct TransactionStep {
  std::string name;
  Bytes command;
  Bytes response;
  double round_trip_ms = 0.0;
};

struct TransactionReport {
  std::vector<TransactionStep> steps;
  Bytes aid;
  std::string pan;
  std::string expiry;
  std::string service_code;
  std::string discretionary;
  Bytes track1;
  Bytes track2;
  Bytes un;
  std::optional<uint16_t> atc;
  Bytes cvc3_track1;
  Bytes cvc3_track2;
  double total_ms = 0.0;
  Outcome outcome = Outcome::kDeclined;
  // Decline detail: a status word ("6985") or a named reason.
  std::string reason;
};

// Runs one Mag-Stripe transaction: SELECT PPSE, SELECT application, GET
// PROCESSING OPTIONS, READ RECORD per AFL, COMPUTE CRYPTOGRAPHIC CHECKSUM.
TransactionReport RunTransaction(CardInterface& card, const TerminalConfig& cfg,
                                 SimClock& clock);

}  // namespace relaysim
