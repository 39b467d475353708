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
#include <string_view>

#include "relaysim/hex.h"
#include "relaysim/tlv.h"

namespace relaysim {

bool LuhnValid(std::string_view digits);

// Personalisation of the Mag-Stripe payment applet. Track layouts follow
// ISO/IEC 7813: track 1 is "B" PAN "^" name "^" expiry service discretionary;
// track 2 is BCD PAN 'D' expiry service discretionary, padded with 'F'.
struct CardProfile {
  std::string pan = "5430123405678904";
  std::string expiry = "1711";  // YYMM
  std::string service_code = "101";
  std::string discretionary = "0010000000000";
  std::string cardholder = " /";

  Bytes app_version = {0x00, 0x01};                                  // 9F6C
  Bytes track1_cvc3_bitmap = {0x00, 0x00, 0x00, 0x00, 0x00, 0x38};   // 9F62
  Bytes track1_un_atc_bitmap = {0x00, 0x00, 0x00, 0x00, 0x03, 0xC6}; // 9F63
  uint8_t track1_atc_digits = 4;                                     // 9F64
  Bytes track2_cvc3_bitmap = {0x00, 0x38};                           // 9F65
  Bytes track2_un_atc_bitmap = {0x03, 0xC6};                         // 9F66
  uint8_t track2_atc_digits = 4;                                     // 9F67

  // Throws std::invalid_argument naming the offending field.
  void Validate() const;

  Bytes Track1() const;
  Bytes Track2() const;

  // Record 1 of SFI 1: template 70 with the nine Mag-Stripe data objects.
  TlvNode MagStripeRecord() const;
};

}  // namespace relaysim
