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

// Acceptance suite: one PASS/FAIL line per criterion.
//
// usage: acceptance <path-to-relaysim-cli>
//
// Criteria 2 and 3 drive the shipped CLI binary end to end and read the
// report.json it writes; the rest run in process against the library.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "relaysim/apdu.h"
#include "relaysim/benchmark.h"
#include "relaysim/hex.h"
#include "relaysim/histogram.h"
#include "relaysim/latency.h"
#include "relaysim/relay.h"
#include "relaysim/secure_element.h"
#include "relaysim/sim_clock.h"
#include "relaysim/stream.h"
#include "relaysim/tlv.h"
#include "relaysim/wire.h"
#include "support/generators.h"
#include "support/golden.h"
#include "support/se_oracle.h"

using namespace relaysim;
namespace fs = std::filesystem;

namespace {

// Collects failures for one criterion; the first few are printed.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  const std::vector<std::string>& failures() const { return failures_; }
  int failed() const { return failed_; }

 private:
  std::vector<std::string> failures_;
  int failed_ = 0;
};

std::string Hex(const Bytes& b) { return ToHex(b); }

uint16_t Sw(const Bytes& rsp) {
  return rsp.size() < 2 ? 0
                        : static_cast<uint16_t>(rsp[rsp.size() - 2] << 8 | rsp.back());
}

Bytes Body(Bytes rsp) {
  if (rsp.size() >= 2) rsp.resize(rsp.size() - 2);
  return rsp;
}

std::string SwHex(uint16_t sw) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%04X", sw);
  return buf;
}

// ---- CLI plumbing ----

struct Cli {
  std::string binary;
  fs::path scratch;
  int counter = 0;

  struct Run {
    int exit_code = -1;
    nlohmann::json report;
  };

  Run Invoke(const std::string& args) {
    const fs::path out = scratch / ("run" + std::to_string(counter++));
    fs::create_directories(out);
    const std::string cmd = "\"" + binary + "\" " + args + " --out \"" +
                            out.string() + "\" >/dev/null 2>&1";
    Run r;
    const int status = std::system(cmd.c_str());
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out / "report.json");
    if (in) {
      try {
        in >> r.report;
      } catch (const std::exception&) {
      }
    }
    fs::remove_all(out);
    return r;
  }

  fs::path WriteFile(const std::string& name, const std::string& content) {
    const fs::path p = scratch / name;
    std::ofstream(p) << content;
    return p;
  }
};

std::string Outcome(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("report")) return "<no report>";
  return j["report"].value("outcome", "<none>");
}

// ---- criterion 1 ----

void GoldenBytes(Check& c) {
  SeConfig cfg;
  cfg.wallet_locked = false;
  cfg.initial_atc = 0x11;
  SecureElement se(cfg);
  auto send = [&](const char* hex) {
    return se.Transmit(Origin::kContactless, FromHex(hex));
  };
  c.Expect(Hex(send(golden::kSelectPpse)) == golden::kSelectPpseResponse,
           "PPSE select response differs");
  c.Expect(Hex(send(golden::kSelectPrepaid)) == golden::kSelectPrepaidResponse,
           "payment select response differs");
  c.Expect(Hex(send(golden::kGpo)) == golden::kGpoResponse, "GPO response differs");
  const Bytes rec = send(golden::kReadRecord);
  c.Expect(Sw(rec) == 0x9000, "READ RECORD status " + SwHex(Sw(rec)));
  c.Expect(golden::MatchesSkeleton(Body(rec), golden::kRecordSkeleton),
           "record skeleton mismatch: " + Hex(rec));
  const Bytes ccc = send(golden::kChecksum);
  c.Expect(Sw(ccc) == 0x9000, "checksum status " + SwHex(Sw(ccc)));
  const Bytes body = Body(ccc);
  c.Expect(golden::MatchesSkeleton(body, golden::kChecksumSkeleton),
           "checksum skeleton mismatch: " + Hex(ccc));
  c.Expect(body.size() >= 2 &&
               Hex(Bytes(body.end() - 2, body.end())) == golden::kRecordedAtc,
           "checksum ATC differs from recorded value");
}

// ---- criterion 2 ----

void EndToEndRelay(Check& c, Cli& cli) {
  for (int seed : {1, 7, 12345}) {
    const std::string s = std::to_string(seed);
    auto relay = cli.Invoke("relay-attack --seed " + s + " --model wifi --transport tcp");
    auto direct = cli.Invoke("pos-direct --origin internal --seed " + s);
    c.Expect(relay.exit_code == 0, "seed " + s + ": relay-attack exit " +
                                       std::to_string(relay.exit_code));
    c.Expect(Outcome(relay.report) == "Approved",
             "seed " + s + ": relay outcome " + Outcome(relay.report));
    c.Expect(Outcome(direct.report) == "Approved",
             "seed " + s + ": pos-direct outcome " + Outcome(direct.report));
    if (!relay.report.is_object() || !direct.report.is_object()) continue;
    const auto& rs = relay.report["report"]["steps"];
    const auto& ds = direct.report["report"]["steps"];
    c.Expect(rs.size() == ds.size() && !rs.empty(), "seed " + s + ": step count differs");
    for (size_t i = 0; i < std::min(rs.size(), ds.size()); ++i) {
      c.Expect(rs[i]["command"] == ds[i]["command"],
               "seed " + s + ": command differs at step " + std::to_string(i));
      c.Expect(rs[i]["response"] == ds[i]["response"],
               "seed " + s + ": response differs at step " + std::to_string(i));
    }
    const int before = relay.report.value("atc_before", -1);
    const int after = relay.report.value("atc_after", -1);
    c.Expect(after - before == 1, "seed " + s + ": ATC moved by " +
                                      std::to_string(after - before));
    c.Expect(relay.report.value("wallet_locked_after", false),
             "seed " + s + ": wallet left unlocked");
  }
}

// ---- criterion 3 ----

void Countermeasures(Check& c, Cli& cli) {
  // (a) timeout against the internet relay.
  int timed_out = 0;
  for (int seed = 1; seed <= 100; ++seed) {
    auto r = cli.Invoke("relay-attack --timeout-ms 500 --model internet --seed " +
                        std::to_string(seed));
    if (Outcome(r.report) == "TimedOut") ++timed_out;
  }
  c.Expect(timed_out >= 95, "(a) only " + std::to_string(timed_out) +
                                "/100 runs timed out");

  // (b) on-card PIN, relay app without the PIN.
  const fs::path pin = cli.WriteFile("policy-pin.json", R"({"require_pin_on_card": true})");
  auto b = cli.Invoke("relay-attack --seed 1 --policy \"" + pin.string() + "\"");
  c.Expect(b.exit_code == 1, "(b) exit " + std::to_string(b.exit_code));
  c.Expect(b.report.value("session_refused", false), "(b) session was not refused");
  c.Expect(b.report.value("session_error", "").rfind("UnlockFailed", 0) == 0,
           "(b) session error: " + b.report.value("session_error", ""));
  c.Expect(b.report.value("wallet_locked_after", false), "(b) wallet unlocked");
  c.Expect(Outcome(b.report) != "Approved", "(b) still approved");

  // (c) payment applet disabled for the internal interface.
  const fs::path dis = cli.WriteFile(
      "policy-disabled.json",
      R"({"internal_disabled_aids": ["A0000000041010AA54303200FF01FFFF"]})");
  auto relay = cli.Invoke("relay-attack --seed 1 --policy \"" + dis.string() + "\"");
  c.Expect(relay.report.value("session_refused", false), "(c) session was not refused");
  c.Expect(Outcome(relay.report) != "Approved", "(c) relay still approved");
  auto local = cli.Invoke("pos-direct --origin contactless --seed 1 --policy \"" +
                          dis.string() + "\"");
  c.Expect(local.exit_code == 0 && Outcome(local.report) == "Approved",
           "(c) contactless payment outcome " + Outcome(local.report));
}

// ---- criterion 4 ----

double AddedDelay(AccessPath path, uint64_t seed) {
  return SampleDelay({path, {}}, seed) -
         SampleDelay({AccessPath::kDirectInternal, {}}, seed);
}

std::vector<double> Draw(AccessPath path, uint64_t seed, int n) {
  DelaySampler s(LatencyModel{path, {}}, seed);
  std::vector<double> v(static_cast<size_t>(n));
  for (double& d : v) d = s.Next();
  return v;
}

void LatencyModels(Check& c) {
  constexpr int kN = 5000;
  const auto ext = Draw(AccessPath::kDirectExternal, 101, kN);
  const double mean = std::accumulate(ext.begin(), ext.end(), 0.0) / kN;
  c.Expect(mean >= 25.0 && mean <= 35.0,
           "DirectExternal mean " + std::to_string(mean));

  const auto in = Draw(AccessPath::kDirectInternal, 102, kN);
  c.Expect(std::all_of(in.begin(), in.end(), [](double d) { return d >= 50 && d <= 80; }),
           "DirectInternal sample outside [50, 80]");

  int wifi_inside = 0;
  double internet_min_added = 1e18;
  for (uint64_t i = 0; i < kN; ++i) {
    const double w = AddedDelay(AccessPath::kRelayWifi, DelaySampler::SampleSeed(103, i));
    if (w >= 100.0 && w <= 210.0) ++wifi_inside;
    internet_min_added = std::min(
        internet_min_added, AddedDelay(AccessPath::kRelayInternet, DelaySampler::SampleSeed(104, i)));
  }
  c.Expect(wifi_inside >= kN * 99 / 100,
           "RelayWifi added delay in range for " + std::to_string(wifi_inside) + "/5000");

  auto net = Draw(AccessPath::kRelayInternet, 104, kN);
  std::sort(net.begin(), net.end());
  const double median = (net[kN / 2 - 1] + net[kN / 2]) / 2;
  c.Expect(median > 1000.0, "RelayInternet median " + std::to_string(median));
  c.Expect(internet_min_added >= 150.0,
           "RelayInternet min added delay " + std::to_string(internet_min_added));
}

// ---- criterion 5 ----

void HistogramLayoutAndCsv(Check& c) {
  const HistogramLayout layout;
  c.Expect(layout.bin_count == 160 && layout.bin_width_ms == 50.0, "default layout");
  Histogram probe;
  for (int k = 0; k < 159; ++k) {
    c.Expect(probe.BinIndex(k * 50.0 + 25.0) == static_cast<size_t>(k),
             "bin " + std::to_string(k) + " misplaced");
  }
  c.Expect(probe.BinIndex(8000.0) == 159 && probe.BinIndex(8000.5) == 159 &&
               probe.BinIndex(1e7) == 159,
           "samples above 8000 ms not in overflow bin");

  for (AccessPath path : {AccessPath::kDirectExternal, AccessPath::kRelayInternet}) {
    BenchmarkSpec spec;
    spec.path = path;
    spec.repetitions = 5000;
    spec.seed = 55;
    const BenchmarkResult r = RunBenchmark(spec);
    const Histogram& h = r.histogram;
    const std::string name(AccessPathName(path));
    c.Expect(h.counts().size() == 160, name + ": bin count");
    c.Expect(std::accumulate(h.counts().begin(), h.counts().end(), uint64_t{0}) == 5000,
             name + ": counts do not sum to repetitions");
    const std::string csv = HistogramToCsv(h);
    Histogram back;
    try {
      back = HistogramFromCsv(csv);
    } catch (const std::exception& e) {
      c.Expect(false, name + ": CSV parse: " + e.what());
      continue;
    }
    c.Expect(back == h, name + ": CSV round trip changed the histogram");
    c.Expect(HistogramToCsv(back) == csv, name + ": CSV text not stable");
  }
}

// ---- criterion 6 ----

void RecordedExchanges(Check& c) {
  struct Cmd {
    const char* hex;
    uint8_t cla, ins, p1, p2;
    const char* data;
  };
  const Cmd cmds[] = {
      {golden::kSelectPpse, 0x00, 0xA4, 0x04, 0x00, "325041592E5359532E4444463031"},
      {golden::kSelectPrepaid, 0x00, 0xA4, 0x04, 0x00, "A0000000041010AA54303200FF01FFFF"},
      {golden::kGpo, 0x80, 0xA8, 0x00, 0x00, "8300"},
      {golden::kReadRecord, 0x00, 0xB2, 0x01, 0x0C, ""},
      {golden::kChecksum, 0x80, 0x2A, 0x8E, 0x80, "00000080"},
  };
  for (const Cmd& e : cmds) {
    const CommandApdu a = ParseCommand(FromHex(e.hex));
    c.Expect(a.cla == e.cla && a.ins == e.ins && a.p1 == e.p1 && a.p2 == e.p2 &&
                 Hex(a.data) == e.data && a.le == std::optional<uint8_t>(0),
             std::string("command breakdown: ") + e.hex);
  }

  auto tree = [](const char* hex) { return TlvDecode(ParseResponse(FromHex(hex)).data); };
  const auto ppse = tree(golden::kSelectPpseResponse);
  const TlvNode* dir = FindNode(ppse, {FromHex("6F"), FromHex("A5"), FromHex("BF0C")});
  c.Expect(dir && dir->children().size() == 2 &&
               FindTag(dir->children(), {FromHex("61"), FromHex("87")}) == FromHex("01") &&
               TlvEncode(dir->children()).size() == 0x25,
           "PPSE directory breakdown");
  const auto fci = tree(golden::kSelectPrepaidResponse);
  c.Expect(FindTag(fci, {FromHex("6F"), FromHex("84")}) ==
                   FromHex("A0000000041010AA54303200FF01FFFF") &&
               FindTag(fci, {FromHex("6F"), FromHex("A5"), FromHex("50")}) ==
                   ToBytes("MasterCard"),
           "payment FCI breakdown");
  const auto gpo = tree(golden::kGpoResponse);
  c.Expect(FindTag(gpo, {FromHex("77"), FromHex("82")}) == FromHex("0000") &&
               FindTag(gpo, {FromHex("77"), FromHex("94")}) == FromHex("08010100"),
           "GPO breakdown");

  SeConfig cfg;
  cfg.wallet_locked = false;
  cfg.initial_atc = 0x11;
  SecureElement se(cfg);
  se.Transmit(Origin::kContactless, FromHex(golden::kSelectPrepaid));
  const auto rec = TlvDecode(Body(se.Transmit(Origin::kContactless, FromHex(golden::kReadRecord))));
  for (const auto& [tag, value] : golden::kRecordValues) {
    c.Expect(FindTag(rec, {FromHex("70"), FromHex(tag)}) == FromHex(value),
             "record field " + tag);
  }
  auto str = [](std::optional<Bytes> b) { return b ? std::string(b->begin(), b->end()) : ""; };
  c.Expect(golden::MatchesMask(str(FindTag(rec, {FromHex("70"), FromHex("56")})),
                               golden::kTrack1Mask),
           "track 1 does not match its mask");
  const auto t2 = FindTag(rec, {FromHex("70"), FromHex("9F6B")});
  c.Expect(t2 && golden::MatchesMask(Hex(*t2), golden::kTrack2Mask),
           "track 2 does not match its mask");
  const auto ccc = TlvDecode(Body(se.Transmit(Origin::kContactless, FromHex(golden::kChecksum))));
  c.Expect(FindTag(ccc, {FromHex("77"), FromHex("9F36")}) == FromHex(golden::kRecordedAtc),
           "checksum ATC breakdown");
}

void Codec(Check& c) {
  std::mt19937_64 rng(0xACC);
  for (int i = 0; i < 10000; ++i) {
    std::vector<TlvNode> nodes;
    for (size_t n = 1 + rng() % 3; n > 0; --n) nodes.push_back(gen::RandomTlvNode(rng, 0));
    const Bytes enc = TlvEncode(nodes);
    c.Expect(TlvDecode(enc) == nodes, "TLV round trip failed at " + std::to_string(i));
    const CommandApdu cmd = gen::RandomCommand(rng);
    c.Expect(ParseCommand(SerializeCommand(cmd)) == cmd,
             "APDU round trip failed at " + std::to_string(i));
  }
  for (int i = 0; i < 10000; ++i) {
    Bytes junk(rng() % 64);
    for (auto& b : junk) b = static_cast<uint8_t>(rng());
    // A decoder may reject input, but only with its own error types.
    try { TlvDecode(junk); } catch (const TlvError&) {}
    try { ParseCommand(junk); } catch (const MalformedApdu&) {} catch (const UnsupportedLength&) {}
    try { ParseResponse(junk); } catch (const MalformedApdu&) {}
    size_t used = 0;
    try { DecodeFrame(junk, &used); } catch (const FrameError&) {}
  }
  RecordedExchanges(c);
}

// ---- criterion 7 ----

void OracleEnumeration(Check& c) {
  const oracle::Policy policies[] = {{false, false}, {true, false}, {false, true}, {true, true}};
  const size_t n = oracle::kAllCommands.size();
  const size_t alphabet = 2 * n;
  std::vector<Bytes> wire;
  for (oracle::Cmd cmd : oracle::kAllCommands) wire.push_back(FromHex(oracle::CommandHex(cmd)));
  for (const oracle::Policy& p : policies) {
    for (bool locked : {false, true}) {
      SeConfig cfg;
      cfg.wallet_locked = locked;
      cfg.policy.require_pin_on_card = p.pin;
      if (p.disable_internal) cfg.policy.internal_disabled_aids.insert(Aid(aids::kPrepaidCard));
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
          const uint16_t want = oracle::Step(p, st, internal, oracle::kAllCommands[idx]);
          const uint16_t got =
              Sw(se.Transmit(internal ? Origin::kInternal : Origin::kContactless, wire[idx]));
          const bool same = got == want && se.wallet_locked() == st.locked &&
                            se.atc() == st.atc && se.pin_tries_remaining() == st.tries;
          c.Expect(same, "oracle mismatch: cmd " + oracle::CommandHex(oracle::kAllCommands[idx]) +
                             " got " + SwHex(got) + " want " + SwHex(want));
          if (!same) break;
        }
      }
    }
  }
}

void StateMachine(Check& c) {
  OracleEnumeration(c);

  constexpr const char* kSelWallet = "00A4040007A000000476201000";
  constexpr const char* kUnlock = "80E200AA00";
  constexpr const char* kLock = "80E2005500";
  auto sw = [](SecureElement& se, Origin o, const char* hex) {
    return Sw(se.Transmit(o, FromHex(hex)));
  };

  {
    SecureElement se;
    sw(se, Origin::kInternal, kSelWallet);
    for (int i = 0; i < 3; ++i) {
      c.Expect(sw(se, Origin::kInternal, kUnlock) == 0x9000 && !se.wallet_locked(),
               "repeated unlock");
    }
    for (int i = 0; i < 3; ++i) {
      c.Expect(sw(se, Origin::kInternal, kLock) == 0x9000 && se.wallet_locked(),
               "repeated lock");
    }
  }
  {
    SecureElement se;
    c.Expect(sw(se, Origin::kContactless, kSelWallet) == 0x6A82,
             "wallet component selectable over contactless");
    c.Expect(sw(se, Origin::kContactless, golden::kSelectPrepaid) == 0x6985,
             "locked wallet payment select not 6985");
  }
  {
    SeConfig cfg;
    cfg.wallet_locked = false;
    SecureElement se(cfg);
    sw(se, Origin::kContactless, golden::kSelectPrepaid);
    const int n = 37;
    for (int i = 0; i < n; ++i) sw(se, Origin::kContactless, golden::kChecksum);
    c.Expect(se.atc() == n, "ATC after 37 checksums is " + std::to_string(se.atc()));
  }
  {
    SeConfig cfg;
    cfg.policy.require_pin_on_card = true;
    SecureElement se(cfg);
    sw(se, Origin::kInternal, kSelWallet);
    std::vector<uint16_t> got;
    for (int i = 0; i < 4; ++i) got.push_back(sw(se, Origin::kInternal, "002000000439393939"));
    c.Expect(got == std::vector<uint16_t>{0x63C2, 0x63C1, 0x63C0, 0x6983},
             "PIN counter sequence");
    c.Expect(sw(se, Origin::kInternal, "002000000431323334") == 0x6983,
             "blocked PIN accepted the right value");
  }

  // Teardown: orderly close, abrupt loss, and emulator disconnect.
  auto locked = [](SessionBroker& b) {
    return b.WithSe([](SecureElement& se) { return se.wallet_locked(); });
  };
  for (Transport t : {Transport::kPipe, Transport::kTcp}) {
    const std::string tn = t == Transport::kPipe ? "pipe" : "tcp";
    {
      SessionBroker broker;
      LocalSeChannel channel(broker);
      VirtualClock clock;
      RelayRig rig(channel, {}, clock, {LatencyModel{AccessPath::kInstant, {}}, 1, {}}, t);
      c.Expect(rig.emulator().ActivateField(), tn + ": session open failed");
      c.Expect(!locked(broker), tn + ": wallet not unlocked during session");
      rig.emulator().DeactivateField();
      rig.Shutdown();
      c.Expect(locked(broker), tn + ": orderly close left wallet unlocked");
    }
    {
      SessionBroker broker;
      LocalSeChannel channel(broker);
      VirtualClock clock;
      RelayRig rig(channel, {}, clock, {LatencyModel{AccessPath::kInstant, {}}, 1, {}}, t);
      rig.emulator().ActivateField();
      rig.emulator().Transmit(FromHex(golden::kSelectPpse));
      rig.emulator().DisconnectRelay();
      rig.Shutdown();
      c.Expect(locked(broker), tn + ": abrupt loss left wallet unlocked");
    }
  }
  {
    // Remote SE host: client vanishes without closing.
    SessionBroker broker;
    auto [near, far] = MakePipe();
    std::thread host([&, f = far.get()] { ServeSeHost(broker, Origin::kInternal, *f); });
    {
      RemoteSeChannel remote(std::move(near));
      remote.Open();
      remote.Transmit(FromHex(kSelWallet));
      remote.Transmit(FromHex(kUnlock));
    }
    host.join();
    c.Expect(locked(broker), "se-host: abrupt loss left wallet unlocked");
  }
}

// ---- driver ----

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<void(Check&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <relaysim-binary>\n";
    return 2;
  }
  Cli cli;
  cli.binary = fs::absolute(argv[1]).string();
  cli.scratch = fs::temp_directory_path() /
                ("relaysim-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(cli.scratch);

  const std::vector<Criterion> criteria = {
      {1, "golden-byte conformance", 1, GoldenBytes},
      {2, "end-to-end relay", 5, [&](Check& c) { EndToEndRelay(c, cli); }},
      {3, "countermeasure efficacy", 60, [&](Check& c) { Countermeasures(c, cli); }},
      {4, "latency model properties", 30, LatencyModels},
      {5, "histogram layout and CSV", 10, HistogramLayoutAndCsv},
      {6, "codec round trips, fuzzing, recorded exchanges", 30, Codec},
      {7, "state machine", 10, StateMachine},
  };

  int failed = 0;
  for (const Criterion& cr : criteria) {
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.Expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    check.Expect(secs < cr.limit_s, "runtime over " + std::to_string(cr.limit_s) + " s");
    char line[160];
    std::snprintf(line, sizeof line, "%s criterion %d: %s (%.2f s, limit %.0f s)",
                  check.ok() ? "PASS" : "FAIL", cr.id, cr.name, secs, cr.limit_s);
    std::cout << line << "\n";
    for (const std::string& f : check.failures()) std::cout << "    - " << f << "\n";
    if (check.failed() > static_cast<int>(check.failures().size())) {
      std::cout << "    (" << check.failed() - check.failures().size() << " more)\n";
    }
    if (!check.ok()) ++failed;
  }
  fs::remove_all(cli.scratch);
  return failed == 0 ? 0 : 1;
}
