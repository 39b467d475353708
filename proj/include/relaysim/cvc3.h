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

#include <array>
#include <cstdint>

#include "relaysim/hex.h"

namespace relaysim {

// Keyed stand-in for the dynamic card verification code. The issuer
// algorithm is proprietary; this keeps the shape (a 2-byte value per track
// that depends on UN and ATC) without claiming to be it:
//
//   cvc3_trackN = HMAC-SHA256(key, label_N || UN || ATC_be16)[0..1]
//
// with label_1 = 0x01 and label_2 = 0x02.
inline constexpr uint8_t kTrack1Label = 0x01;
inline constexpr uint8_t kTrack2Label = 0x02;

struct Cvc3Pair {
  std::array<uint8_t, 2> track1;
  std::array<uint8_t, 2> track2;
};

std::array<uint8_t, 2> ComputeCvc3(ByteView key, uint8_t track_label,
                                   ByteView un, uint16_t atc);
Cvc3Pair ComputeCvc3Pair(ByteView key, ByteView un, uint16_t atc);

}  // namespace relaysim
