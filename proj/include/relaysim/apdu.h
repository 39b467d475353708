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

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "relaysim/hex.h"

namespace relaysim {

class MalformedApdu : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for frames that need extended-length Lc/Le.
class UnsupportedLength : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace sw {
inline constexpr uint16_t kSuccess = 0x9000;
inline constexpr uint16_t kWrongLength = 0x6700;
inline constexpr uint16_t kPinBlocked = 0x6983;
inline constexpr uint16_t kConditionsNotSatisfied = 0x6985;
inline constexpr uint16_t kWrongData = 0x6A80;
inline constexpr uint16_t kFileNotFound = 0x6A82;
inline constexpr uint16_t kRecordNotFound = 0x6A83;
inline constexpr uint16_t kInsNotSupported = 0x6D00;
inline constexpr uint16_t kClaNotSupported = 0x6E00;
inline constexpr uint16_t kWrongPinBase = 0x63C0;
}  // namespace sw

// ISO 7816-4 command APDU, short form only. An empty `data` means no Lc
// field. `le` holds the raw Le byte; 0x00 requests up to 256 bytes.
struct CommandApdu {
  uint8_t cla = 0;
  uint8_t ins = 0;
  uint8_t p1 = 0;
  uint8_t p2 = 0;
  Bytes data;
  std::optional<uint8_t> le;

  // Maximum response length the Le field asks for, or 0 when Le is absent.
  int ExpectedLength() const { return le ? (*le == 0 ? 256 : *le) : 0; }

  bool operator==(const CommandApdu&) const = default;
};

struct ResponseApdu {
  Bytes data;
  uint8_t sw1 = 0x90;
  uint8_t sw2 = 0x00;

  static ResponseApdu Status(uint16_t status) {
    return {{}, static_cast<uint8_t>(status >> 8),
            static_cast<uint8_t>(status & 0xFF)};
  }
  static ResponseApdu Ok(Bytes body) { return {std::move(body), 0x90, 0x00}; }

  uint16_t Sw() const { return static_cast<uint16_t>((sw1 << 8) | sw2); }
  bool IsOk() const { return Sw() == sw::kSuccess; }

  bool operator==(const ResponseApdu&) const = default;
};

CommandApdu ParseCommand(ByteView raw);
Bytes SerializeCommand(const CommandApdu& cmd);

ResponseApdu ParseResponse(ByteView raw);
Bytes SerializeResponse(const ResponseApdu& rsp);

// Application identifier, 5 to 16 bytes.
class Aid {
 public:
  explicit Aid(Bytes bytes);
  static Aid FromHex(std::string_view hex) { return Aid(relaysim::FromHex(hex)); }

  const Bytes& bytes() const { return bytes_; }
  std::string ToString() const { return ToHex(bytes_); }

  auto operator<=>(const Aid&) const = default;

 private:
  Bytes bytes_;
};

}  // namespace relaysim
