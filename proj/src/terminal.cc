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

#include "relaysim/terminal.h"

#include <random>

#include "relaysim/tlv.h"

namespace relaysim {

namespace {

// Early exit from the transaction flow with a final outcome.
struct Abort {
  Outcome outcome;
  std::string reason;
};

std::string SwText(uint16_t status) {
  return ToHex(Bytes{static_cast<uint8_t>(status >> 8),
                     static_cast<uint8_t>(status & 0xFF)});
}

class Session {
 public:
  Session(CardInterface& card, const TerminalConfig& cfg, SimClock& clock,
          TransactionReport& report)
      : card_(card), cfg_(cfg), clock_(clock), report_(report) {}

  ResponseApdu Exchange(const std::string& name, const CommandApdu& cmd) {
    TransactionStep step{name, SerializeCommand(cmd), {}, 0.0};
    const double sent = clock_.NowMs();
    if (!started_) {
      start_ms_ = sent;
      started_ = true;
    }
    try {
      step.response = card_.Transmit(step.command);
    } catch (const CardRemoved& e) {
      step.round_trip_ms = clock_.NowMs() - sent;
      report_.steps.push_back(std::move(step));
      UpdateTotal();
      throw Abort{Outcome::kCardRemoved, e.what()};
    }
    step.round_trip_ms = clock_.NowMs() - sent;
    report_.steps.push_back(step);
    UpdateTotal();

    if (cfg_.timeout_ms && report_.total_ms > *cfg_.timeout_ms) {
      throw Abort{Outcome::kTimedOut, "transaction exceeded " +
                                          std::to_string(*cfg_.timeout_ms) +
                                          " ms after " + name};
    }
    ResponseApdu rsp;
    try {
      rsp = ParseResponse(step.response);
    } catch (const MalformedApdu& e) {
      throw Abort{Outcome::kDeclined, std::string("MalformedResponse: ") + e.what()};
    }
    if (!rsp.IsOk()) throw Abort{Outcome::kDeclined, SwText(rsp.Sw())};
    return rsp;
  }

 private:
  void UpdateTotal() { report_.total_ms = clock_.NowMs() - start_ms_; }

  CardInterface& card_;
  const TerminalConfig& cfg_;
  SimClock& clock_;
  TransactionReport& report_;
  bool started_ = false;
  double start_ms_ = 0.0;
};

std::vector<TlvNode> DecodeOrDecline(const Bytes& data, const char* what) {
  try {
    return TlvDecode(data);
  } catch (const TlvError& e) {
    throw Abort{Outcome::kDeclined,
                std::string("MalformedResponse: ") + what + ": " + e.what()};
  }
}

Bytes Require(const std::vector<TlvNode>& tree, std::vector<Tag> path,
              const char* what) {
  std::optional<Bytes> value = FindTag(tree, path);
  if (!value) {
    throw Abort{Outcome::kDeclined, std::string("MissingData: ") + what};
  }
  return *value;
}

Aid PickApplication(const std::vector<TlvNode>& fci, const TerminalConfig& cfg) {
  const TlvNode* directory =
      FindNode(fci, {MakeTag("6F"), MakeTag("A5"), MakeTag("BF0C")});
  if (directory == nullptr || !directory->IsConstructed()) {
    throw Abort{Outcome::kDeclined, "MissingData: PPSE directory"};
  }
  std::optional<Aid> best;
  int best_priority = 0x100;
  for (const TlvNode& entry : directory->children()) {
    if (entry.tag != MakeTag("61") || !entry.IsConstructed()) continue;
    std::optional<Bytes> aid = FindTag(entry.children(), {MakeTag("4F")});
    if (!aid || aid->size() < 5 || aid->size() > 16) continue;
    std::optional<Bytes> prio = FindTag(entry.children(), {MakeTag("87")});
    // Low nibble of the priority indicator; absent means lowest.
    const int priority = prio && !prio->empty() ? ((*prio)[0] & 0x0F) : 0x0F;
    Aid candidate(*aid);
    if (!cfg.accepted_aids.empty()) {
      bool accepted = false;
      for (const Aid& a : cfg.accepted_aids) accepted |= (a == candidate);
      if (!accepted) continue;
    }
    if (priority < best_priority) {
      best = candidate;
      best_priority = priority;
    }
  }
  if (!best) throw Abort{Outcome::kDeclined, "NoSupportedApplication"};
  return *best;
}

}  // namespace

std::vector<AflEntry> ParseAfl(ByteView afl) {
  if (afl.empty() || afl.size() % 4 != 0) {
    throw MalformedAfl("AFL length " + std::to_string(afl.size()) +
                       " is not a positive multiple of 4");
  }
  std::vector<AflEntry> entries;
  for (size_t i = 0; i < afl.size(); i += 4) {
    AflEntry e{static_cast<uint8_t>(afl[i] >> 3), afl[i + 1], afl[i + 2],
               afl[i + 3]};
    if (e.sfi == 0 || e.sfi > 30 || e.first_record == 0 ||
        e.last_record < e.first_record ||
        e.signed_records > e.last_record - e.first_record + 1) {
      throw MalformedAfl("invalid AFL entry " + ToHex(afl.subspan(i, 4)));
    }
    entries.push_back(e);
  }
  return entries;
}

Track2Data ParseTrack2(ByteView raw) {
  std::string nibbles = ToHex(raw);
  while (!nibbles.empty() && nibbles.back() == 'F') nibbles.pop_back();
  const size_t sep = nibbles.find('D');
  if (sep == std::string::npos) throw MalformedTrack("no field separator");
  for (size_t i = 0; i < nibbles.size(); ++i) {
    if (i != sep && (nibbles[i] < '0' || nibbles[i] > '9')) {
      throw MalformedTrack("non-digit nibble in track 2");
    }
  }
  if (sep == 0) throw MalformedTrack("empty PAN");
  if (nibbles.size() < sep + 1 + 7) {
    throw MalformedTrack("track 2 too short for expiry and service code");
  }
  return {nibbles.substr(0, sep), nibbles.substr(sep + 1, 4),
          nibbles.substr(sep + 5, 3), nibbles.substr(sep + 8)};
}

Bytes GenerateUn(uint64_t seed) {
  std::mt19937_64 rng(seed);
  const uint64_t v = rng();
  return {static_cast<uint8_t>(v >> 24), static_cast<uint8_t>(v >> 16),
          static_cast<uint8_t>(v >> 8), static_cast<uint8_t>(v)};
}

const char* OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kApproved:
      return "Approved";
    case Outcome::kDeclined:
      return "Declined";
    case Outcome::kTimedOut:
      return "TimedOut";
    case Outcome::kCardRemoved:
      return "CardRemoved";
  }
  return "Unknown";
}

TransactionReport RunTransaction(CardInterface& card, const TerminalConfig& cfg,
                                 SimClock& clock) {
  TransactionReport report;
  report.un = cfg.fixed_un ? *cfg.fixed_un : GenerateUn(cfg.un_seed);
  Session session(card, cfg, clock, report);

  try {
    ResponseApdu ppse = session.Exchange(
        "SELECT PPSE",
        {0x00, 0xA4, 0x04, 0x00, ToBytes("2PAY.SYS.DDF01"), 0x00});
    const Aid aid = PickApplication(DecodeOrDecline(ppse.data, "PPSE FCI"), cfg);
    report.aid = aid.bytes();

    ResponseApdu fci = session.Exchange(
        "SELECT AID", {0x00, 0xA4, 0x04, 0x00, aid.bytes(), 0x00});
    if (Require(DecodeOrDecline(fci.data, "application FCI"),
                {MakeTag("6F"), MakeTag("84")}, "DF name") != aid.bytes()) {
      throw Abort{Outcome::kDeclined, "MalformedResponse: DF name mismatch"};
    }

    ResponseApdu gpo = session.Exchange(
        "GET PROCESSING OPTIONS", {0x80, 0xA8, 0x00, 0x00, {0x83, 0x00}, 0x00});
    const auto gpo_tree = DecodeOrDecline(gpo.data, "GPO response");
    const Bytes aip = Require(gpo_tree, {MakeTag("77"), MakeTag("82")}, "AIP");
    if (aip.size() != 2 || (aip[1] & 0x80) != 0) {
      throw Abort{Outcome::kDeclined, "UnsupportedProfile"};
    }
    std::vector<AflEntry> afl;
    try {
      afl = ParseAfl(Require(gpo_tree, {MakeTag("77"), MakeTag("94")}, "AFL"));
    } catch (const MalformedAfl& e) {
      throw Abort{Outcome::kDeclined, std::string("MalformedResponse: ") + e.what()};
    }

    for (const AflEntry& entry : afl) {
      for (int rec = entry.first_record; rec <= entry.last_record; ++rec) {
        ResponseApdu record = session.Exchange(
            "READ RECORD",
            {0x00, 0xB2, static_cast<uint8_t>(rec),
             static_cast<uint8_t>((entry.sfi << 3) | 0x04), {}, 0x00});
        const auto tree = DecodeOrDecline(record.data, "record");
        if (auto t1 = FindTag(tree, {MakeTag("70"), MakeTag("56")})) {
          report.track1 = *t1;
        }
        if (auto t2 = FindTag(tree, {MakeTag("70"), MakeTag("9F6B")})) {
          report.track2 = *t2;
        }
      }
    }
    if (report.track2.empty()) {
      throw Abort{Outcome::kDeclined, "MissingData: track 2"};
    }
    try {
      Track2Data t2 = ParseTrack2(report.track2);
      report.pan = t2.pan;
      report.expiry = t2.expiry;
      report.service_code = t2.service_code;
      report.discretionary = t2.discretionary;
    } catch (const MalformedTrack& e) {
      throw Abort{Outcome::kDeclined, std::string("MalformedResponse: ") + e.what()};
    }

    ResponseApdu ccc = session.Exchange(
        "COMPUTE CRYPTOGRAPHIC CHECKSUM",
        {0x80, 0x2A, 0x8E, 0x80, report.un, 0x00});
    const auto ccc_tree = DecodeOrDecline(ccc.data, "checksum response");
    report.cvc3_track2 = Require(ccc_tree, {MakeTag("77"), MakeTag("9F61")}, "CVC3 track 2");
    report.cvc3_track1 = Require(ccc_tree, {MakeTag("77"), MakeTag("9F60")}, "CVC3 track 1");
    const Bytes atc = Require(ccc_tree, {MakeTag("77"), MakeTag("9F36")}, "ATC");
    if (atc.size() != 2) throw Abort{Outcome::kDeclined, "MalformedResponse: ATC"};
    report.atc = static_cast<uint16_t>((atc[0] << 8) | atc[1]);
    report.outcome = Outcome::kApproved;
  } catch (const Abort& abort) {
    report.outcome = abort.outcome;
    report.reason = abort.reason;
  }
  return report;
}

}  // namespace relaysim
