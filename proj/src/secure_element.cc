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

#include "relaysim/secure_element.h"

#include <stdexcept>

#include "relaysim/cvc3.h"
#include "relaysim/tlv.h"

namespace relaysim {

namespace {

constexpr uint8_t kClaInterIndustry = 0x00;
constexpr uint8_t kClaProprietary = 0x80;

constexpr uint8_t kInsSelect = 0xA4;
constexpr uint8_t kInsVerify = 0x20;
constexpr uint8_t kInsGpo = 0xA8;
constexpr uint8_t kInsReadRecord = 0xB2;
constexpr uint8_t kInsChecksum = 0x2A;
constexpr uint8_t kInsWalletLock = 0xE2;
constexpr uint8_t kInsGetData = 0xCA;
constexpr uint8_t kInsGetStatus = 0xF2;
constexpr uint8_t kInsCardState = 0xF0;

bool IsPaymentInstruction(uint8_t ins) {
  return ins == kInsGpo || ins == kInsReadRecord || ins == kInsChecksum;
}

}  // namespace

const char* OriginName(Origin origin) {
  return origin == Origin::kInternal ? "internal" : "contactless";
}

Bytes DefaultIsdResponse() {
  Bytes filler(0x57);
  for (size_t i = 0; i < filler.size(); ++i) {
    filler[i] = static_cast<uint8_t>((i * 7 + 0x11) & 0xFF);
  }
  return TlvEncode(TlvNode::Constructed(
      MakeTag("6F"),
      {TlvNode::Primitive(MakeTag("84"), aids::kIssuerSecurityDomain),
       TlvNode::Constructed(MakeTag("A5"), {TlvNode::Primitive(MakeTag("53"),
                                                               filler)})}));
}

SeConfig::SeConfig() : isd_response(DefaultIsdResponse()) {}

SecureElement::SecureElement(SeConfig config)
    : config_(std::move(config)),
      wallet_locked_(config_.wallet_locked),
      atc_(config_.initial_atc),
      pin_tries_(config_.pin_tries) {
  config_.profile.Validate();
  if (config_.cvc3_key.size() != 16) {
    throw std::invalid_argument("cvc3_key must be 16 bytes");
  }
  registry_.emplace(Aid(aids::kPpseName), Applet{AppletKind::kPpse});
  registry_.emplace(config_.payment_aid, Applet{AppletKind::kPayment});
  registry_.emplace(Aid(aids::kWalletComponent),
                    Applet{AppletKind::kWallet, /*internal_only=*/true});
  registry_.emplace(Aid(aids::kIssuerSecurityDomain),
                    Applet{AppletKind::kIssuerDomain});
  for (const Aid& aid : config_.policy.internal_disabled_aids) {
    if (!registry_.contains(aid)) {
      throw std::invalid_argument("policy references unregistered AID " +
                                  aid.ToString());
    }
  }
}

void SecureElement::OpenChannel(Origin origin) { channel(origin) = Channel{}; }

void SecureElement::CloseChannel(Origin origin) { channel(origin) = Channel{}; }

Bytes SecureElement::Transmit(Origin origin, ByteView raw) {
  CommandApdu cmd;
  try {
    cmd = ParseCommand(raw);
  } catch (const std::runtime_error&) {
    return SerializeResponse(ResponseApdu::Status(sw::kWrongLength));
  }
  return SerializeResponse(Process(origin, cmd));
}

ResponseApdu SecureElement::Process(Origin origin, const CommandApdu& cmd) {
  if (cmd.cla != kClaInterIndustry && cmd.cla != kClaProprietary) {
    return ResponseApdu::Status(sw::kClaNotSupported);
  }
  if (cmd.cla == kClaInterIndustry && cmd.ins == kInsSelect) {
    return Select(origin, cmd);
  }

  const std::optional<Aid>& selected = channel(origin).selected;
  if (!selected) {
    // A disabled interface hides the applet entirely.
    if (origin == Origin::kInternal && IsPaymentInstruction(cmd.ins) &&
        InternallyDisabled(config_.payment_aid)) {
      return ResponseApdu::Status(sw::kFileNotFound);
    }
    return ResponseApdu::Status(sw::kConditionsNotSatisfied);
  }

  switch (registry_.at(*selected).kind) {
    case AppletKind::kWallet:
      return ProcessWallet(origin, cmd);
    case AppletKind::kPayment:
      return ProcessPayment(cmd);
    case AppletKind::kPpse:
    case AppletKind::kIssuerDomain:
      break;
  }
  return ResponseApdu::Status(sw::kInsNotSupported);
}

ResponseApdu SecureElement::Select(Origin origin, const CommandApdu& cmd) {
  if (cmd.p1 != 0x04 || cmd.data.size() < 5 || cmd.data.size() > 16) {
    return ResponseApdu::Status(sw::kFileNotFound);
  }
  const Aid aid(cmd.data);
  auto it = registry_.find(aid);
  if (it == registry_.end()) return ResponseApdu::Status(sw::kFileNotFound);
  const Applet& applet = it->second;

  if (origin == Origin::kContactless &&
      (applet.internal_only || !contactless_enabled(aid))) {
    return ResponseApdu::Status(sw::kFileNotFound);
  }
  if (origin == Origin::kInternal && InternallyDisabled(aid)) {
    return ResponseApdu::Status(sw::kFileNotFound);
  }

  ResponseApdu rsp = ResponseApdu::Ok({});
  switch (applet.kind) {
    case AppletKind::kPpse:
      rsp.data = PpseFci();
      break;
    case AppletKind::kPayment:
      if (wallet_locked_) {
        return ResponseApdu::Status(sw::kConditionsNotSatisfied);
      }
      rsp.data = PaymentFci();
      break;
    case AppletKind::kWallet:
      break;
    case AppletKind::kIssuerDomain:
      rsp.data = config_.isd_response;
      break;
  }
  channel(origin).selected = aid;
  return rsp;
}

ResponseApdu SecureElement::ProcessWallet(Origin origin,
                                          const CommandApdu& cmd) {
  // The component is internal-only; reaching it from the RF side means the
  // selection was bypassed, so nothing is allowed.
  if (origin != Origin::kInternal) {
    return ResponseApdu::Status(sw::kConditionsNotSatisfied);
  }
  if (cmd.cla == kClaInterIndustry && cmd.ins == kInsVerify) {
    return VerifyPin(origin, cmd);
  }
  if (cmd.cla != kClaProprietary) {
    return ResponseApdu::Status(sw::kInsNotSupported);
  }
  switch (cmd.ins) {
    case kInsWalletLock:
      if (cmd.p1 == 0x00 && cmd.p2 == 0xAA) return WalletUnlock(origin);
      if (cmd.p1 == 0x00 && cmd.p2 == 0x55) return WalletLock();
      return ResponseApdu::Status(sw::kWrongData);
    case kInsGetData:
      return ResponseApdu::Ok(config_.list_cards_stub);
    case kInsGetStatus:
      return ResponseApdu::Ok(config_.get_status_stub);
    case kInsCardState:
      return SetCardAvailability(cmd);
    default:
      return ResponseApdu::Status(sw::kInsNotSupported);
  }
}

ResponseApdu SecureElement::WalletUnlock(Origin origin) {
  if (config_.policy.require_pin_on_card && !channel(origin).verified) {
    return ResponseApdu::Status(sw::kConditionsNotSatisfied);
  }
  wallet_locked_ = false;
  return ResponseApdu::Ok({});
}

ResponseApdu SecureElement::WalletLock() {
  wallet_locked_ = true;
  // A locked wallet drops any payment selection on both interfaces.
  for (Channel* ch : {&internal_, &contactless_}) {
    if (ch->selected && registry_.at(*ch->selected).kind == AppletKind::kPayment) {
      ch->selected.reset();
    }
  }
  return ResponseApdu::Ok({});
}

ResponseApdu SecureElement::VerifyPin(Origin origin, const CommandApdu& cmd) {
  if (!config_.policy.require_pin_on_card) {
    return ResponseApdu::Status(sw::kInsNotSupported);
  }
  if (pin_tries_ == 0) return ResponseApdu::Status(sw::kPinBlocked);
  if (std::string(cmd.data.begin(), cmd.data.end()) == config_.pin) {
    pin_tries_ = config_.pin_tries;
    channel(origin).verified = true;
    return ResponseApdu::Ok({});
  }
  --pin_tries_;
  channel(origin).verified = false;
  return ResponseApdu::Status(static_cast<uint16_t>(sw::kWrongPinBase | pin_tries_));
}

ResponseApdu SecureElement::SetCardAvailability(const CommandApdu& cmd) {
  if (cmd.p1 != 0x01 && cmd.p1 != 0x02) {
    return ResponseApdu::Status(sw::kWrongData);
  }
  std::optional<Bytes> target;
  try {
    target = FindTag(TlvDecode(cmd.data), {MakeTag("4F")});
  } catch (const TlvError&) {
    return ResponseApdu::Status(sw::kWrongData);
  }
  if (!target || target->size() < 5 || target->size() > 16) {
    return ResponseApdu::Status(sw::kWrongData);
  }
  const Aid aid(*target);
  auto it = registry_.find(aid);
  if (it == registry_.end() || it->second.kind != AppletKind::kPayment) {
    return ResponseApdu::Status(sw::kFileNotFound);
  }
  if (cmd.p1 == 0x01) {
    contactless_disabled_.insert(aid);
  } else {
    contactless_disabled_.erase(aid);
  }
  return ResponseApdu::Ok({});
}

ResponseApdu SecureElement::ProcessPayment(const CommandApdu& cmd) {
  if (cmd.cla == kClaProprietary && cmd.ins == kInsGpo) {
    return GetProcessingOptions(cmd);
  }
  if (cmd.cla == kClaInterIndustry && cmd.ins == kInsReadRecord) {
    return ReadRecord(cmd);
  }
  if (cmd.cla == kClaProprietary && cmd.ins == kInsChecksum) {
    return ComputeCryptographicChecksum(cmd);
  }
  return ResponseApdu::Status(sw::kInsNotSupported);
}

ResponseApdu SecureElement::GetProcessingOptions(const CommandApdu& cmd) {
  // Empty PDOL: the only acceptable data is an empty command template.
  if (cmd.data != Bytes{0x83, 0x00}) {
    return ResponseApdu::Status(sw::kWrongData);
  }
  return ResponseApdu::Ok(TlvEncode(TlvNode::Constructed(
      MakeTag("77"), {TlvNode::Primitive(MakeTag("82"), {0x00, 0x00}),
                      TlvNode::Primitive(MakeTag("94"),
                                         {0x08, 0x01, 0x01, 0x00})})));
}

ResponseApdu SecureElement::ReadRecord(const CommandApdu& cmd) {
  if (cmd.p1 != 0x01 || cmd.p2 != 0x0C) {
    return ResponseApdu::Status(sw::kRecordNotFound);
  }
  return ResponseApdu::Ok(TlvEncode(config_.profile.MagStripeRecord()));
}

ResponseApdu SecureElement::ComputeCryptographicChecksum(
    const CommandApdu& cmd) {
  if (cmd.data.size() != 4) return ResponseApdu::Status(sw::kWrongLength);
  if (atc_ == 0xFFFF) return ResponseApdu::Status(sw::kConditionsNotSatisfied);
  ++atc_;
  const Cvc3Pair cvc3 = ComputeCvc3Pair(config_.cvc3_key, cmd.data, atc_);
  const Bytes atc_bytes{static_cast<uint8_t>(atc_ >> 8),
                        static_cast<uint8_t>(atc_ & 0xFF)};
  return ResponseApdu::Ok(TlvEncode(TlvNode::Constructed(
      MakeTag("77"),
      {TlvNode::Primitive(MakeTag("9F61"),
                          Bytes(cvc3.track2.begin(), cvc3.track2.end())),
       TlvNode::Primitive(MakeTag("9F60"),
                          Bytes(cvc3.track1.begin(), cvc3.track1.end())),
       TlvNode::Primitive(MakeTag("9F36"), atc_bytes)})));
}

Bytes SecureElement::PpseFci() const {
  std::vector<TlvNode> entries;
  for (const DirectoryEntry& entry : config_.directory) {
    entries.push_back(TlvNode::Constructed(
        MakeTag("61"), {TlvNode::Primitive(MakeTag("4F"), entry.aid.bytes()),
                        TlvNode::Primitive(MakeTag("87"), {entry.priority})}));
  }
  return TlvEncode(TlvNode::Constructed(
      MakeTag("6F"),
      {TlvNode::Primitive(MakeTag("84"), aids::kPpseName),
       TlvNode::Constructed(
           MakeTag("A5"),
           {TlvNode::Constructed(MakeTag("BF0C"), std::move(entries))})}));
}

Bytes SecureElement::PaymentFci() const {
  return TlvEncode(TlvNode::Constructed(
      MakeTag("6F"),
      {TlvNode::Primitive(MakeTag("84"), config_.payment_aid.bytes()),
       TlvNode::Constructed(
           MakeTag("A5"), {TlvNode::Primitive(MakeTag("50"),
                                              ToBytes(config_.application_label))})}));
}

}  // namespace relaysim
