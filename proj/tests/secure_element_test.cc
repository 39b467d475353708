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

#include <gtest/gtest.h>

#include "relaysim/secure_element.h"
#include "relaysim/tlv.h"
#include "support/golden.h"
#include "support/se_oracle.h"

using namespace relaysim;

namespace {

std::string Send(SecureElement& se, Origin o, std::string_view hex) {
  return ToHex(se.Transmit(o, FromHex(hex)));
}

uint16_t Sw(const Bytes& rsp) {
  return static_cast<uint16_t>(rsp[rsp.size() - 2] << 8 | rsp.back());
}

uint16_t SwOf(SecureElement& se, Origin o, std::string_view hex) {
  return Sw(se.Transmit(o, FromHex(hex)));
}

SeConfig Unlocked() {
  SeConfig c;
  c.wallet_locked = false;
  return c;
}

constexpr const char* kSelectWallet = "00A4040007A000000476201000";
constexpr const char* kUnlock = "80E200AA00";
constexpr const char* kLock = "80E2005500";

TEST(SecureElementGolden, PpseSelectIsByteExact) {
  SecureElement se;
  EXPECT_EQ(Send(se, Origin::kContactless, golden::kSelectPpse),
            golden::kSelectPpseResponse);
  // Locked or not, internal or not: the directory is stateless.
  EXPECT_EQ(Send(se, Origin::kInternal, golden::kSelectPpse),
            golden::kSelectPpseResponse);
}

TEST(SecureElementGolden, PaymentSelectAndGpoAreByteExact) {
  SecureElement se(Unlocked());
  EXPECT_EQ(Send(se, Origin::kContactless, golden::kSelectPrepaid),
            golden::kSelectPrepaidResponse);
  EXPECT_EQ(Send(se, Origin::kContactless, golden::kGpo), golden::kGpoResponse);
  EXPECT_EQ(Send(se, Origin::kContactless, golden::kSelectPpse),
            golden::kSelectPpseResponse);
}

TEST(SecureElementGolden, RecordAndChecksumSkeletons) {
  SeConfig cfg = Unlocked();
  cfg.initial_atc = 0x11;
  SecureElement se(cfg);
  Send(se, Origin::kContactless, golden::kSelectPrepaid);
  Bytes rec = se.Transmit(Origin::kContactless, FromHex(golden::kReadRecord));
  ASSERT_EQ(Sw(rec), 0x9000);
  rec.resize(rec.size() - 2);
  EXPECT_TRUE(golden::MatchesSkeleton(rec, golden::kRecordSkeleton));

  Bytes ccc = se.Transmit(Origin::kContactless, FromHex(golden::kChecksum));
  ASSERT_EQ(Sw(ccc), 0x9000);
  ccc.resize(ccc.size() - 2);
  EXPECT_TRUE(golden::MatchesSkeleton(ccc, golden::kChecksumSkeleton));
  EXPECT_EQ(ToHex(Bytes(ccc.end() - 2, ccc.end())), golden::kRecordedAtc);
  EXPECT_EQ(se.atc(), 0x12);
}

TEST(SecureElement, LockedWalletRefusesPaymentSelect) {
  SecureElement se;
  EXPECT_EQ(SwOf(se, Origin::kContactless, golden::kSelectPrepaid), 0x6985);
  EXPECT_FALSE(se.selected(Origin::kContactless).has_value());
  EXPECT_EQ(SwOf(se, Origin::kContactless, golden::kGpo), 0x6985);
}

TEST(SecureElement, WalletComponentIsInternalOnly) {
  SecureElement se;
  EXPECT_EQ(SwOf(se, Origin::kContactless, kSelectWallet), 0x6A82);
  EXPECT_EQ(SwOf(se, Origin::kContactless, kUnlock), 0x6985);
  EXPECT_TRUE(se.wallet_locked());
  EXPECT_EQ(SwOf(se, Origin::kInternal, kSelectWallet), 0x9000);
  EXPECT_EQ(SwOf(se, Origin::kInternal, kUnlock), 0x9000);
  EXPECT_FALSE(se.wallet_locked());
}

TEST(SecureElement, LockUnlockIdempotent) {
  SecureElement se;
  Send(se, Origin::kInternal, kSelectWallet);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(SwOf(se, Origin::kInternal, kUnlock), 0x9000);
    EXPECT_FALSE(se.wallet_locked());
  }
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(SwOf(se, Origin::kInternal, kLock), 0x9000);
    EXPECT_TRUE(se.wallet_locked());
  }
}

TEST(SecureElement, LockDropsPaymentSelectionOnBothChannels) {
  SecureElement se(Unlocked());
  Send(se, Origin::kContactless, golden::kSelectPrepaid);
  ASSERT_TRUE(se.selected(Origin::kContactless).has_value());
  Send(se, Origin::kInternal, kSelectWallet);
  Send(se, Origin::kInternal, kLock);
  EXPECT_FALSE(se.selected(Origin::kContactless).has_value());
  EXPECT_EQ(SwOf(se, Origin::kContactless, golden::kGpo), 0x6985);
}

TEST(SecureElement, AtcCountsChecksums) {
  SecureElement se(Unlocked());
  Send(se, Origin::kContactless, golden::kSelectPrepaid);
  for (int n = 1; n <= 50; ++n) {
    ASSERT_EQ(SwOf(se, Origin::kContactless, golden::kChecksum), 0x9000);
    ASSERT_EQ(se.atc(), n);
  }
  // Failed checksums leave the counter alone.
  EXPECT_EQ(SwOf(se, Origin::kContactless, "802A8E8002000000"), 0x6700);
  EXPECT_EQ(se.atc(), 50);
}

TEST(SecureElement, AtcSaturates) {
  SeConfig cfg = Unlocked();
  cfg.initial_atc = 0xFFFE;
  SecureElement se(cfg);
  Send(se, Origin::kContactless, golden::kSelectPrepaid);
  EXPECT_EQ(SwOf(se, Origin::kContactless, golden::kChecksum), 0x9000);
  EXPECT_EQ(SwOf(se, Origin::kContactless, golden::kChecksum), 0x6985);
  EXPECT_EQ(se.atc(), 0xFFFF);
}

TEST(SecureElement, PaymentCommandErrors) {
  SecureElement se(Unlocked());
  Send(se, Origin::kContactless, golden::kSelectPrepaid);
  EXPECT_EQ(SwOf(se, Origin::kContactless, "80A80000038301AA00"), 0x6A80);
  EXPECT_EQ(SwOf(se, Origin::kContactless, "00B2020C00"), 0x6A83);
  EXPECT_EQ(SwOf(se, Origin::kContactless, "00B2011400"), 0x6A83);
  EXPECT_EQ(SwOf(se, Origin::kContactless, "00B2"), 0x6700);
  EXPECT_EQ(SwOf(se, Origin::kContactless, "A0B2010C00"), 0x6E00);
}

TEST(SecureElement, PinRetryCounter) {
  SeConfig cfg;
  cfg.policy.require_pin_on_card = true;
  SecureElement se(cfg);
  Send(se, Origin::kInternal, kSelectWallet);
  EXPECT_EQ(SwOf(se, Origin::kInternal, kUnlock), 0x6985);
  EXPECT_EQ(SwOf(se, Origin::kInternal, "002000000439393939"), 0x63C2);
  EXPECT_EQ(SwOf(se, Origin::kInternal, "002000000439393939"), 0x63C1);
  EXPECT_EQ(SwOf(se, Origin::kInternal, "002000000439393939"), 0x63C0);
  EXPECT_EQ(SwOf(se, Origin::kInternal, "002000000439393939"), 0x6983);
  // Even the right PIN is refused once blocked.
  EXPECT_EQ(SwOf(se, Origin::kInternal, "002000000431323334"), 0x6983);
  EXPECT_EQ(SwOf(se, Origin::kInternal, kUnlock), 0x6985);
  EXPECT_TRUE(se.wallet_locked());
}

TEST(SecureElement, CorrectPinResetsCounterAndAllowsUnlock) {
  SeConfig cfg;
  cfg.policy.require_pin_on_card = true;
  SecureElement se(cfg);
  Send(se, Origin::kInternal, kSelectWallet);
  EXPECT_EQ(SwOf(se, Origin::kInternal, "002000000439393939"), 0x63C2);
  EXPECT_EQ(SwOf(se, Origin::kInternal, "002000000431323334"), 0x9000);
  EXPECT_EQ(se.pin_tries_remaining(), 3);
  EXPECT_EQ(SwOf(se, Origin::kInternal, kUnlock), 0x9000);
  // Verification does not survive the channel.
  se.CloseChannel(Origin::kInternal);
  EXPECT_FALSE(se.pin_verified(Origin::kInternal));
}

TEST(SecureElement, InternalDisableHidesPaymentApplet) {
  SeConfig cfg = Unlocked();
  cfg.policy.internal_disabled_aids.insert(Aid(aids::kPrepaidCard));
  SecureElement se(cfg);
  EXPECT_EQ(SwOf(se, Origin::kInternal, golden::kSelectPrepaid), 0x6A82);
  EXPECT_EQ(SwOf(se, Origin::kInternal, golden::kGpo), 0x6A82);
  EXPECT_EQ(Send(se, Origin::kContactless, golden::kSelectPrepaid),
            golden::kSelectPrepaidResponse);
}

TEST(SecureElement, ContactlessAvailabilityToggle) {
  SecureElement se(Unlocked());
  Send(se, Origin::kInternal, kSelectWallet);
  const std::string disable =
      "80F0010012" "4F10A0000000041010AA54303200FF01FFFF";
  const std::string enable =
      "80F0020012" "4F10A0000000041010AA54303200FF01FFFF";
  EXPECT_EQ(SwOf(se, Origin::kInternal, disable), 0x9000);
  EXPECT_FALSE(se.contactless_enabled(Aid(aids::kPrepaidCard)));
  EXPECT_EQ(SwOf(se, Origin::kContactless, golden::kSelectPrepaid), 0x6A82);
  EXPECT_EQ(SwOf(se, Origin::kInternal, enable), 0x9000);
  EXPECT_EQ(SwOf(se, Origin::kContactless, golden::kSelectPrepaid), 0x9000);
  EXPECT_EQ(SwOf(se, Origin::kInternal, "80F0030000"), 0x6A80);
}

TEST(SecureElement, IssuerDomainSelectSizes) {
  SecureElement se;
  Bytes rsp = se.Transmit(Origin::kContactless,
                          FromHex("00A4040008A000000003535041"));
  EXPECT_EQ(rsp.size(), 105u);
  EXPECT_EQ(Sw(rsp), 0x9000);
}

// ---- brute force against the reference model ----

struct Scenario {
  oracle::Policy policy;
  bool locked;
};

SeConfig ConfigFor(const Scenario& s) {
  SeConfig cfg;
  cfg.wallet_locked = s.locked;
  cfg.policy.require_pin_on_card = s.policy.pin;
  if (s.policy.disable_internal) {
    cfg.policy.internal_disabled_aids.insert(Aid(aids::kPrepaidCard));
  }
  return cfg;
}

void CheckState(const oracle::State& want, const SecureElement& se) {
  ASSERT_EQ(se.wallet_locked(), want.locked);
  ASSERT_EQ(se.atc(), want.atc);
  ASSERT_EQ(se.pin_tries_remaining(), want.tries);
}

TEST(SecureElementOracle, AllSequencesUpToLengthThree) {
  const oracle::Policy policies[] = {
      {false, false}, {true, false}, {false, true}, {true, true}};
  const size_t n = oracle::kAllCommands.size();
  const size_t alphabet = 2 * n;  // command x origin
  std::vector<Bytes> wire;
  for (oracle::Cmd c : oracle::kAllCommands) {
    wire.push_back(FromHex(oracle::CommandHex(c)));
  }
  size_t checked = 0;
  for (const oracle::Policy& p : policies) {
    for (bool locked : {false, true}) {
      const Scenario sc{p, locked};
      const SeConfig cfg = ConfigFor(sc);
      for (size_t code = 0; code < alphabet * alphabet * alphabet; ++code) {
        SecureElement se(cfg);
        oracle::State st;
        st.locked = locked;
        size_t rest = code;
        for (int step = 0; step < 3; ++step) {
          const size_t sym = rest % alphabet;
          rest /= alphabet;
          const bool internal = sym < n;
          const size_t idx = sym % n;
          const uint16_t want =
              oracle::Step(p, st, internal, oracle::kAllCommands[idx]);
          const uint16_t got =
              Sw(se.Transmit(internal ? Origin::kInternal : Origin::kContactless,
                             wire[idx]));
          ASSERT_EQ(got, want)
              << "pin=" << p.pin << " disable=" << p.disable_internal
              << " locked=" << locked << " step=" << step << " cmd="
              << oracle::CommandHex(oracle::kAllCommands[idx])
              << " internal=" << internal;
          CheckState(st, se);
          ++checked;
        }
      }
    }
  }
  EXPECT_EQ(checked, 4u * 2 * alphabet * alphabet * alphabet * 3);
}

}  // namespace
