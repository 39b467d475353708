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

// relaysim: command-line front end for the relay simulator.
//
// Exit status: 0 success, 1 scenario failure (declined, refused, timed out),
// 2 usage or configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "relaysim/apdu.h"
#include "relaysim/benchmark.h"
#include "relaysim/config.h"
#include "relaysim/relay.h"
#include "relaysim/report.h"
#include "relaysim/scenario.h"
#include "relaysim/stream.h"
#include "relaysim/tlv.h"
#include "relaysim/wire.h"

namespace fs = std::filesystem;
using namespace relaysim;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config;
  std::string card;
  std::string policy;
  std::optional<uint64_t> seed;
  std::string out;
  std::string clock = "virtual";
  std::string un;
  std::optional<double> timeout_ms;
};

void AddCommon(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config, "Scenario file (JSON)");
  sub->add_option("--card", o.card, "Card profile / secure element file (JSON)");
  sub->add_option("--policy", o.policy, "Countermeasure policy file (JSON)");
  sub->add_option("--seed", o.seed, "Master seed (random when omitted)");
  sub->add_option("--out", o.out, "Directory for report files");
  sub->add_option("--clock", o.clock, "virtual | real")
      ->check(CLI::IsMember({"virtual", "real"}));
  sub->add_option("--un", o.un, "Fixed unpredictable number (4 hex bytes)");
  sub->add_option("--timeout-ms", o.timeout_ms, "Terminal transaction timeout")
      ->check(CLI::PositiveNumber);
}

// Scenario file first, then individual files, then flags.
ScenarioConfig BuildScenario(const CommonOptions& o) {
  ScenarioConfig cfg;
  bool seeded = false;
  if (!o.config.empty()) seeded = ApplyScenarioFile(o.config, cfg);
  if (!o.card.empty()) ApplyCardConfig(ReadJsonFile(o.card), cfg.se);
  if (!o.policy.empty()) cfg.se.policy = ParsePolicy(ReadJsonFile(o.policy));
  if (o.seed) {
    cfg.seed = *o.seed;
  } else if (!seeded) {
    std::random_device rd;
    cfg.seed = (static_cast<uint64_t>(rd()) << 32) | rd();
  }
  cfg.clock = o.clock == "real" ? ClockMode::kReal : ClockMode::kVirtual;
  if (!o.un.empty()) {
    Bytes un;
    try {
      un = FromHex(o.un);
    } catch (const HexError& e) {
      throw UsageError(std::string("--un: ") + e.what());
    }
    if (un.size() != 4) throw UsageError("--un must be exactly 4 bytes");
    cfg.fixed_un = un;
  }
  if (o.timeout_ms) cfg.timeout_ms = o.timeout_ms;
  cfg.relay_app.payment_aid = cfg.se.payment_aid;
  return cfg;
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

fs::path OutDir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

// card_local is false when the secure element lives in another process and
// its end state cannot be observed from here.
int EmitResult(const ScenarioResult& result, std::string_view scenario,
               uint64_t seed, const std::string& out, bool card_local = true) {
  if (result.session_refused) {
    std::cout << "session refused: " << result.session_error << "\n";
  } else {
    std::cout << ReportTrace(result.report);
  }
  std::cout << "wallet locked after: "
            << (!card_local ? "unknown (remote card)"
                            : result.wallet_locked_after ? "yes" : "no")
            << "\n"
            << "seed: " << seed << "\n";
  if (!out.empty()) {
    fs::path dir = OutDir(out);
    nlohmann::json j = ScenarioResultToJson(result, scenario, seed);
    if (!card_local) {
      j["wallet_locked_after"] = nullptr;
      j["atc_before"] = nullptr;
      j["atc_after"] = nullptr;
    }
    WriteFile(dir / "report.json", j.dump(2) + "\n");
    WriteFile(dir / "trace.txt",
              result.session_refused
                  ? "session refused: " + result.session_error + "\n"
                  : ReportTrace(result.report));
  }
  return result.Approved() ? 0 : kExitFailure;
}

Origin ParseOrigin(const std::string& s) {
  return s == "contactless" ? Origin::kContactless : Origin::kInternal;
}

// ---- decode ----

std::string DumpData(const Bytes& data) {
  if (data.empty()) return "";
  try {
    return TlvDump(TlvDecode(data));
  } catch (const TlvError&) {
    return "  (not BER-TLV) " + ToHex(data, true) + "\n";
  }
}

int Decode(const std::string& mode, const std::string& hex) {
  const Bytes raw = FromHex(hex);
  if (mode == "tlv") {
    std::cout << TlvDump(TlvDecode(raw));
  } else if (mode == "response") {
    ResponseApdu r = ParseResponse(raw);
    std::printf("SW %04X, %zu data bytes\n", r.Sw(), r.data.size());
    std::cout << DumpData(r.data);
  } else if (mode == "frame") {
    size_t consumed = 0;
    auto frame = DecodeFrame(raw, &consumed);
    if (!frame) throw FrameError("incomplete frame");
    std::cout << FrameKindName(frame->kind) << ", " << frame->payload.size()
              << " payload bytes\n";
    if (frame->kind == FrameKind::kError) {
      std::cout << ErrorReasonName(*frame->error_reason()) << ": "
                << frame->error_detail() << "\n";
    } else if (!frame->payload.empty()) {
      std::cout << ToHex(frame->payload, true) << "\n";
    }
  } else {
    CommandApdu c = ParseCommand(raw);
    std::printf("CLA %02X INS %02X P1 %02X P2 %02X", c.cla, c.ins, c.p1, c.p2);
    if (!c.data.empty()) std::printf(" Lc %02zX", c.data.size());
    if (c.le) std::printf(" Le %02X", *c.le);
    std::printf("\n");
    std::cout << DumpData(c.data);
  }
  return 0;
}

// ---- bench ----

struct BenchOptions {
  std::string path = "all";
  int reps = 5000;
  std::optional<uint64_t> seed;
  double bin_width = 50.0;
  int bins = 160;
  bool ascii = false;
  std::string out;
  std::string card;
};

int Bench(const BenchOptions& o) {
  if (o.reps <= 0) throw UsageError("--reps must be positive");
  if (o.bins <= 0 || o.bin_width <= 0) {
    throw UsageError("--bins and --bin-width must be positive");
  }
  std::vector<AccessPath> paths;
  if (o.path == "all") {
    paths = {AccessPath::kDirectExternal, AccessPath::kDirectInternal,
             AccessPath::kRelayWifi, AccessPath::kRelayInternet};
  } else {
    auto p = ParseAccessPath(o.path);
    if (!p) throw UsageError("unknown --path " + o.path);
    paths = {*p};
  }
  SeConfig se;
  if (!o.card.empty()) ApplyCardConfig(ReadJsonFile(o.card), se);
  uint64_t seed = 0;
  if (o.seed) {
    seed = *o.seed;
  } else {
    std::random_device rd;
    seed = (static_cast<uint64_t>(rd()) << 32) | rd();
  }

  nlohmann::json summary;
  summary["seed"] = std::to_string(seed);
  summary["repetitions"] = o.reps;
  for (AccessPath path : paths) {
    BenchmarkSpec spec;
    spec.path = path;
    spec.repetitions = o.reps;
    spec.seed = DeriveSeed(seed, AccessPathName(path));
    spec.layout = HistogramLayout{o.bin_width, o.bins};
    BenchmarkResult r = RunBenchmark(spec, se);
    const std::string name(AccessPathName(path));
    const bool slow = r.Median() > 1000.0;
    std::printf(
        "%-9s n=%d cmd=%zuB rsp=%zuB min=%.1f median=%.1f mean=%.1f "
        "max=%.1f ms%s\n",
        name.c_str(), o.reps, r.command_length, r.response_length, r.Min(),
        r.Median(), r.Mean(), r.Max(), slow ? "  [median_ms > 1000]" : "");
    if (o.ascii) std::cout << RenderAscii(r.histogram);
    summary["paths"][name] = {{"median_ms", r.Median()},
                              {"mean_ms", r.Mean()},
                              {"min_ms", r.Min()},
                              {"max_ms", r.Max()},
                              {"median_above_1000ms", slow},
                              {"command_bytes", r.command_length},
                              {"response_bytes", r.response_length}};
    if (!o.out.empty()) {
      WriteFile(OutDir(o.out) / ("bench-" + name + ".csv"),
                HistogramToCsv(r.histogram));
    }
  }
  if (!o.out.empty()) {
    WriteFile(OutDir(o.out) / "bench-summary.json", summary.dump(2) + "\n");
  }
  return 0;
}

// ---- multi-process roles ----

int SeHost(const CommonOptions& common, const std::string& listen,
           const std::string& origin, int max_connections) {
  ScenarioConfig cfg = BuildScenario(common);
  auto [host, port] = ParseEndpoint(listen);
  SessionBroker broker(cfg.se);
  TcpListener listener(host, port);
  std::cout << "se-host listening on " << host << ":" << listener.port()
            << std::endl;
  for (int served = 0; max_connections <= 0 || served < max_connections;
       ++served) {
    std::unique_ptr<Stream> conn = listener.Accept();
    if (!conn) break;
    ServeSeHost(broker, ParseOrigin(origin), *conn);
  }
  return 0;
}

int RelayAppMain(const CommonOptions& common, const std::string& connect,
                 const std::string& se_host, std::optional<std::string> pin,
                 bool deny) {
  ScenarioConfig cfg = BuildScenario(common);
  RelayAppConfig app_cfg = cfg.relay_app;
  if (pin) app_cfg.pin = pin;
  if (deny) app_cfg.se_access_granted = false;

  SessionBroker broker(cfg.se);
  std::unique_ptr<SeChannel> channel;
  if (se_host.empty()) {
    channel = std::make_unique<LocalSeChannel>(broker);
  } else {
    auto [h, p] = ParseEndpoint(se_host);
    channel = std::make_unique<RemoteSeChannel>(TcpConnect(h, p));
  }
  auto [host, port] = ParseEndpoint(connect);
  std::unique_ptr<Stream> stream = TcpConnect(host, port);
  RelayApp app(*channel, app_cfg);
  app.ServeConnection(*stream);
  const RelayAppStats& s = app.stats();
  std::cout << "sessions opened " << s.sessions_opened << ", refused "
            << s.sessions_refused << ", closed " << s.sessions_closed
            << ", apdus relayed " << s.apdus_relayed << "\n";
  return 0;
}

int Emulator(const CommonOptions& common, const std::string& listen,
             const std::string& model_name, int transactions) {
  ScenarioConfig cfg = BuildScenario(common);
  if (!model_name.empty()) {
    auto m = ParseAccessPath(model_name);
    if (!m) throw UsageError("unknown --model " + model_name);
    cfg.model = *m;
  }
  auto [host, port] = ParseEndpoint(listen);
  TcpListener listener(host, port);
  std::cout << "emulator listening on " << host << ":" << listener.port()
            << std::endl;
  std::unique_ptr<SimClock> clock;
  if (cfg.clock == ClockMode::kReal) {
    clock = std::make_unique<RealClock>();
  } else {
    clock = std::make_unique<VirtualClock>();
  }
  CardEmulator emulator(*clock,
                        EmulatorConfig{LatencyModel{cfg.model, cfg.latency},
                                       DeriveSeed(cfg.seed, "latency"),
                                       cfg.hard_ceiling_ms});
  emulator.AttachRelay(listener.Accept());

  int status = 0;
  for (int i = 0; i < transactions; ++i) {
    ScenarioResult result;
    if (!emulator.ActivateField()) {
      result.session_refused = true;
      result.session_error = emulator.last_error_text();
    } else {
      TerminalConfig t;
      t.timeout_ms = cfg.timeout_ms;
      t.un_seed = DeriveSeed(cfg.seed + static_cast<uint64_t>(i), "un");
      t.fixed_un = cfg.fixed_un;
      result.report = RunTransaction(emulator, t, *clock);
      emulator.DeactivateField();
    }
    std::string out = common.out;
    if (!out.empty() && transactions > 1) {
      out = (fs::path(out) / ("txn-" + std::to_string(i))).string();
    }
    status = std::max(status, EmitResult(result, "emulator", cfg.seed, out, false));
  }
  emulator.DisconnectRelay();
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NFC relay attack simulator"};
  app.require_subcommand(1);

  CommonOptions pos_opts, relay_opts, host_opts, emu_opts, app_opts;

  auto* pos = app.add_subcommand("pos-direct", "Terminal against the card, no relay");
  AddCommon(pos, pos_opts);
  std::string pos_origin = "internal";
  bool no_unlock = false;
  pos->add_option("--origin", pos_origin, "internal | contactless")
      ->check(CLI::IsMember({"internal", "contactless"}));
  pos->add_flag("--no-unlock", no_unlock, "Leave the wallet locked");

  auto* relay = app.add_subcommand("relay-attack", "Full relay chain in one process");
  AddCommon(relay, relay_opts);
  std::string relay_model, relay_transport;
  std::optional<std::string> relay_pin;
  std::optional<double> relay_ceiling;
  bool relay_deny = false;
  relay->add_option("--model", relay_model, "wifi | internet | instant | ...");
  relay->add_option("--transport", relay_transport, "tcp | pipe")
      ->check(CLI::IsMember({"tcp", "pipe"}));
  relay->add_option("--pin", relay_pin, "PIN the relay app sends before unlocking");
  relay->add_option("--hard-ceiling-ms", relay_ceiling,
                    "Relay round trips above this become Timeout errors")
      ->check(CLI::PositiveNumber);
  relay->add_flag("--deny-se-access", relay_deny,
                  "The OS refuses the relay app access to the secure element");

  auto* se_host = app.add_subcommand("se-host", "Serve the secure element over TCP");
  AddCommon(se_host, host_opts);
  std::string host_listen = "127.0.0.1:0", host_origin = "internal";
  int host_max = 1;
  se_host->add_option("--listen", host_listen, "host:port");
  se_host->add_option("--origin", host_origin, "internal | contactless")
      ->check(CLI::IsMember({"internal", "contactless"}));
  se_host->add_option("--max-connections", host_max, "0 serves forever");

  auto* emulator = app.add_subcommand("emulator", "Card emulator plus terminal");
  AddCommon(emulator, emu_opts);
  std::string emu_listen = "127.0.0.1:0", emu_model;
  int emu_txns = 1;
  emulator->add_option("--listen", emu_listen, "host:port for the relay app");
  emulator->add_option("--model", emu_model, "Relay latency model");
  emulator->add_option("--transactions", emu_txns, "Transactions to run")
      ->check(CLI::PositiveNumber);

  auto* relay_app = app.add_subcommand("relay-app", "Relay app on the victim phone");
  AddCommon(relay_app, app_opts);
  std::string app_connect, app_se_host;
  std::optional<std::string> app_pin;
  bool app_deny = false;
  relay_app->add_option("--connect", app_connect, "Emulator host:port")->required();
  relay_app->add_option("--se-host", app_se_host,
                        "Remote se-host (default: in-process card)");
  relay_app->add_option("--pin", app_pin, "PIN sent before unlocking");
  relay_app->add_flag("--deny-se-access", app_deny, "Simulate a refused SE permission");

  auto* bench = app.add_subcommand("bench", "Round-trip latency histograms");
  BenchOptions bench_opts;
  bench->add_option("--path", bench_opts.path,
                    "all | external | internal | wifi | internet | instant");
  bench->add_option("--reps", bench_opts.reps, "Repetitions per path");
  bench->add_option("--seed", bench_opts.seed, "Master seed");
  bench->add_option("--bin-width", bench_opts.bin_width, "Bin width in ms");
  bench->add_option("--bins", bench_opts.bins, "Number of bins");
  bench->add_flag("--ascii", bench_opts.ascii, "Print ASCII histograms");
  bench->add_option("--out", bench_opts.out, "Directory for CSV files");
  bench->add_option("--card", bench_opts.card, "Card profile file (JSON)");

  auto* decode = app.add_subcommand("decode", "Pretty-print APDUs, TLV or frames");
  std::string decode_mode = "command", decode_hex;
  decode->add_option("--as", decode_mode, "command | response | tlv | frame")
      ->check(CLI::IsMember({"command", "response", "tlv", "frame"}));
  decode->add_option("hex", decode_hex, "Hex bytes")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*pos) {
      ScenarioConfig cfg = BuildScenario(pos_opts);
      return EmitResult(RunPosDirect(cfg, ParseOrigin(pos_origin), !no_unlock),
                        "pos-direct", cfg.seed, pos_opts.out);
    }
    if (*relay) {
      ScenarioConfig cfg = BuildScenario(relay_opts);
      if (!relay_model.empty()) {
        auto m = ParseAccessPath(relay_model);
        if (!m) throw UsageError("unknown --model " + relay_model);
        cfg.model = *m;
      }
      if (!relay_transport.empty()) {
        cfg.transport = relay_transport == "pipe" ? Transport::kPipe
                                                  : Transport::kTcp;
      }
      if (relay_pin) cfg.relay_app.pin = relay_pin;
      if (relay_deny) cfg.relay_app.se_access_granted = false;
      if (relay_ceiling) cfg.hard_ceiling_ms = relay_ceiling;
      return EmitResult(RunRelayAttack(cfg), "relay-attack", cfg.seed,
                        relay_opts.out);
    }
    if (*se_host) return SeHost(host_opts, host_listen, host_origin, host_max);
    if (*emulator) return Emulator(emu_opts, emu_listen, emu_model, emu_txns);
    if (*relay_app) {
      return RelayAppMain(app_opts, app_connect, app_se_host, app_pin, app_deny);
    }
    if (*bench) return Bench(bench_opts);
    if (*decode) return Decode(decode_mode, decode_hex);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const HexError& e) {
    std::cerr << "bad hex: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
