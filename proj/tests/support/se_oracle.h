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

// Reference model of the secure element's access rules, written from the
// documented behaviour rather than from the implementation. Tests enumerate
// (policy x origin x lock state x command) sequences and compare.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

enum class Cmd {
  kSelectPpse,
  kSelectPayment,
  kSelectListedOnly,  // listed in the directory but not installed
  kSelectWallet,
  kSelectIsd,
  kSelectUnknown,
  kGpo,
  kReadRecord,
  kChecksum,
  kVerifyGood,
  kVerifyBad,
  kUnlock,
  kLock,
  kGetData,
  kBadCla,
  kBadIns,
};

inline constexpr std::array<Cmd, 16> kAllCommands = {
    Cmd::kSelectPpse,  Cmd::kSelectPayment, Cmd::kSelectListedOnly,
    Cmd::kSelectWallet, Cmd::kSelectIsd,    Cmd::kSelectUnknown,
    Cmd::kGpo,          Cmd::kReadRecord,   Cmd::kChecksum,
    Cmd::kVerifyGood,   Cmd::kVerifyBad,    Cmd::kUnlock,
    Cmd::kLock,         Cmd::kGetData,      Cmd::kBadCla,
    Cmd::kBadIns};

// Wire bytes for each abstract command.
inline std::string CommandHex(Cmd c) {
  switch (c) {
    case Cmd::kSelectPpse: return "00A404000E325041592E5359532E444446303100";
    case Cmd::kSelectPayment: return "00A4040010A0000000041010AA54303200FF01FFFF00";
    case Cmd::kSelectListedOnly: return "00A4040007A000000004101000";
    case Cmd::kSelectWallet: return "00A4040007A000000476201000";
    case Cmd::kSelectIsd: return "00A4040008A00000000353504100";
    case Cmd::kSelectUnknown: return "00A4040005F00102030400";
    case Cmd::kGpo: return "80A8000002830000";
    case Cmd::kReadRecord: return "00B2010C00";
    case Cmd::kChecksum: return "802A8E80040000008000";
    case Cmd::kVerifyGood: return "002000000431323334";
    case Cmd::kVerifyBad: return "002000000439393939";
    case Cmd::kUnlock: return "80E200AA00";
    case Cmd::kLock: return "80E2005500";
    case Cmd::kGetData: return "80CA9F7F00";
    case Cmd::kBadCla: return "A0A404000E325041592E5359532E444446303100";
    case Cmd::kBadIns: return "80440000";
  }
  return "";
}

struct Policy {
  bool pin = false;
  bool disable_internal = false;
};

enum class Sel { kNone, kPpse, kPayment, kWallet, kIsd };

struct State {
  bool locked = true;
  int tries = 3;
  uint16_t atc = 0;
  std::array<Sel, 2> sel{Sel::kNone, Sel::kNone};  // [internal, contactless]
  std::array<bool, 2> verified{false, false};
};

// Applies one command; returns the expected status word.
inline uint16_t Step(const Policy& p, State& s, bool internal, Cmd c) {
  const int o = internal ? 0 : 1;
  auto select = [&](Sel target, bool allowed) -> uint16_t {
    if (!allowed) return 0x6A82;
    s.sel[o] = target;
    return 0x9000;
  };
  switch (c) {
    case Cmd::kBadCla:
      return 0x6E00;
    case Cmd::kSelectPpse:
      return select(Sel::kPpse, true);
    case Cmd::kSelectIsd:
      return select(Sel::kIsd, true);
    case Cmd::kSelectListedOnly:
    case Cmd::kSelectUnknown:
      return 0x6A82;
    case Cmd::kSelectWallet:
      return select(Sel::kWallet, internal);
    case Cmd::kSelectPayment:
      if (internal && p.disable_internal) return 0x6A82;
      if (s.locked) return 0x6985;
      return select(Sel::kPayment, true);
    default:
      break;
  }

  const bool payment_ins =
      c == Cmd::kGpo || c == Cmd::kReadRecord || c == Cmd::kChecksum;
  switch (s.sel[o]) {
    case Sel::kNone:
      return internal && p.disable_internal && payment_ins ? 0x6A82 : 0x6985;
    case Sel::kPpse:
    case Sel::kIsd:
      return 0x6D00;
    case Sel::kPayment:
      if (!payment_ins) return 0x6D00;
      if (c == Cmd::kChecksum) ++s.atc;
      return 0x9000;
    case Sel::kWallet:
      break;
  }

  // Wallet component, internal interface only.
  switch (c) {
    case Cmd::kVerifyGood:
    case Cmd::kVerifyBad:
      if (!p.pin) return 0x6D00;
      if (s.tries == 0) return 0x6983;
      if (c == Cmd::kVerifyGood) {
        s.tries = 3;
        s.verified[o] = true;
        return 0x9000;
      }
      --s.tries;
      s.verified[o] = false;
      return static_cast<uint16_t>(0x63C0 | s.tries);
    case Cmd::kUnlock:
      if (p.pin && !s.verified[o]) return 0x6985;
      s.locked = false;
      return 0x9000;
    case Cmd::kLock:
      s.locked = true;
      for (Sel& sel : s.sel) {
        if (sel == Sel::kPayment) sel = Sel::kNone;
      }
      return 0x9000;
    case Cmd::kGetData:
      return 0x9000;
    default:
      return 0x6D00;
  }
}

}  // namespace oracle
