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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relaysim/apdu.h"
#include "relaysim/card_profile.h"

namespace relaysim {

// Which interface a command arrived on. Internal is the application
// processor side; Contactless is the RF side.
enum class Origin { kInternal, kContactless };

const char* OriginName(Origin origin);

namespace aids {
// "2PAY.SYS.DDF01"
inline const Bytes kPpseName = FromHex("325041592E5359532E4444463031");
inline const Bytes kPrepaidCard = FromHex("A0000000041010AA54303200FF01FFFF");
inline const Bytes kMasterCard = FromHex("A0000000041010");
inline const Bytes kWalletComponent = FromHex("A0000004762010");
inline const Bytes kIssuerSecurityDomain = FromHex("A000000003535041");
}  // namespace aids

struct CountermeasurePolicy {
  // The on-card component demands a successful VERIFY before unlock.
  bool require_pin_on_card = false;
  // Applets that refuse all traffic arriving on the internal interface.
  std::set<Aid> internal_disabled_aids;
};

struct DirectoryEntry {
  Aid aid;
  uint8_t priority;
};

struct SeConfig {
  CardProfile profile;
  CountermeasurePolicy policy;

  Aid payment_aid{aids::kPrepaidCard};
  std::string application_label = "MasterCard";
  // Applications listed in the PPSE response, in order.
  std::vector<DirectoryEntry> directory = {{Aid(aids::kPrepaidCard), 1},
                                           {Aid(aids::kMasterCard), 2}};

  Bytes cvc3_key = FromHex("404142434445464748494A4B4C4D4E4F");
  uint16_t initial_atc = 0;

  bool wallet_locked = true;
  std::string pin = "1234";
  uint8_t pin_tries = 3;

  // Payloads for the wallet commands whose semantics are not known. They are
  // echoed verbatim and carry no meaning inside the simulator.
  Bytes list_cards_stub = FromHex("4F10A0000000041010AA54303200FF01FFFF");
  Bytes get_status_stub = FromHex("E3124F10A0000000041010AA54303200FF01FFFF");

  // Body (without status word) returned when the card manager is selected;
  // a timing workload only. 103 bytes + 9000 = 105-byte R-APDU.
  Bytes isd_response;

  SeConfig();
};

// Card-manager FCI stub of the documented size, used by the benchmark.
Bytes DefaultIsdResponse();

// Simulated embedded secure element. Not thread-safe: callers serialize
// access (one command in flight at a time).
class SecureElement {
 public:
  explicit SecureElement(SeConfig config = {});

  ResponseApdu Process(Origin origin, const CommandApdu& cmd);
  // Raw-bytes entry point; undecodable frames yield 6700.
  Bytes Transmit(Origin origin, ByteView raw);

  // Opening or closing a channel resets its selection and PIN-verified flag.
  void OpenChannel(Origin origin);
  void CloseChannel(Origin origin);

  bool wallet_locked() const { return wallet_locked_; }
  uint16_t atc() const { return atc_; }
  uint8_t pin_tries_remaining() const { return pin_tries_; }
  bool pin_verified(Origin origin) const { return channel(origin).verified; }
  std::optional<Aid> selected(Origin origin) const {
    return channel(origin).selected;
  }
  bool contactless_enabled(const Aid& aid) const {
    return !contactless_disabled_.contains(aid);
  }
  const SeConfig& config() const { return config_; }

 private:
  enum class AppletKind { kPpse, kPayment, kWallet, kIssuerDomain };

  struct Applet {
    AppletKind kind;
    bool internal_only = false;
  };

  struct Channel {
    std::optional<Aid> selected;
    bool verified = false;
  };

  Channel& channel(Origin origin) {
    return origin == Origin::kInternal ? internal_ : contactless_;
  }
  const Channel& channel(Origin origin) const {
    return origin == Origin::kInternal ? internal_ : contactless_;
  }

  ResponseApdu Select(Origin origin, const CommandApdu& cmd);
  ResponseApdu ProcessWallet(Origin origin, const CommandApdu& cmd);
  ResponseApdu ProcessPayment(const CommandApdu& cmd);
  ResponseApdu WalletUnlock(Origin origin);
  ResponseApdu WalletLock();
  ResponseApdu VerifyPin(Origin origin, const CommandApdu& cmd);
  ResponseApdu SetCardAvailability(const CommandApdu& cmd);
  ResponseApdu GetProcessingOptions(const CommandApdu& cmd);
  ResponseApdu ReadRecord(const CommandApdu& cmd);
  ResponseApdu ComputeCryptographicChecksum(const CommandApdu& cmd);

  bool InternallyDisabled(const Aid& aid) const {
    return config_.policy.internal_disabled_aids.contains(aid);
  }

  Bytes PpseFci() const;
  Bytes PaymentFci() const;

  SeConfig config_;
  std::map<Aid, Applet> registry_;
  std::set<Aid> contactless_disabled_;
  Channel internal_;
  Channel contactless_;
  bool wallet_locked_;
  uint16_t atc_;
  uint8_t pin_tries_;
};

}  // namespace relaysim
