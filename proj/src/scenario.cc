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

#include "relaysim/scenario.h"

#include <memory>

#include "relaysim/config.h"
#include "relaysim/report.h"

namespace relaysim {

namespace {

std::unique_ptr<SimClock> MakeClock(ClockMode mode) {
  if (mode == ClockMode::kReal) return std::make_unique<RealClock>();
  return std::make_unique<VirtualClock>();
}

TerminalConfig TerminalFor(const ScenarioConfig& cfg) {
  TerminalConfig t;
  t.timeout_ms = cfg.timeout_ms;
  t.un_seed = DeriveSeed(cfg.seed, "un");
  t.fixed_un = cfg.fixed_un;
  return t;
}

nlohmann::json SectionOrFile(const nlohmann::json& value,
                             const std::filesystem::path& base) {
  if (value.is_string()) return ReadJsonFile(base / value.get<std::string>());
  return value;
}

}  // namespace

bool ApplyScenarioFile(const std::filesystem::path& path, ScenarioConfig& cfg) {
  const nlohmann::json j = ReadJsonFile(path);
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  const std::filesystem::path base = path.parent_path();
  bool seeded = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "card") {
      ApplyCardConfig(SectionOrFile(v, base), cfg.se);
    } else if (key == "policy") {
      cfg.se.policy = ParsePolicy(SectionOrFile(v, base));
    } else if (key == "seed") {
      if (v.is_number_unsigned()) {
        cfg.seed = v.get<uint64_t>();
      } else if (v.is_string()) {
        try {
          cfg.seed = std::stoull(v.get<std::string>());
        } catch (const std::exception&) {
          throw ConfigError("seed must be a decimal string");
        }
      } else {
        throw ConfigError("seed must be a decimal string");
      }
      seeded = true;
    } else if (key == "model") {
      auto path_kind = v.is_string() ? ParseAccessPath(v.get<std::string>())
                                     : std::nullopt;
      if (!path_kind) throw ConfigError("unknown latency model");
      cfg.model = *path_kind;
    } else if (key == "latency") {
      ApplyLatencyOverrides(v, cfg.latency);
    } else if (key == "timeout_ms") {
      if (!v.is_number() || v.get<double>() <= 0) {
        throw ConfigError("timeout_ms must be a positive number");
      }
      cfg.timeout_ms = v.get<double>();
    } else if (key == "transport") {
      const std::string t = v.is_string() ? v.get<std::string>() : "";
      if (t == "tcp") cfg.transport = Transport::kTcp;
      else if (t == "pipe") cfg.transport = Transport::kPipe;
      else throw ConfigError("transport must be \"tcp\" or \"pipe\"");
    } else if (key == "clock") {
      const std::string c = v.is_string() ? v.get<std::string>() : "";
      if (c == "virtual") cfg.clock = ClockMode::kVirtual;
      else if (c == "real") cfg.clock = ClockMode::kReal;
      else throw ConfigError("clock must be \"virtual\" or \"real\"");
    } else if (key == "relay_app") {
      for (const auto& [rk, rv] : v.items()) {
        if (rk == "pin" && rv.is_string()) {
          cfg.relay_app.pin = rv.get<std::string>();
        } else if (rk == "se_access_granted" && rv.is_boolean()) {
          cfg.relay_app.se_access_granted = rv.get<bool>();
        } else {
          throw ConfigError("bad relay_app key '" + rk + "'");
        }
      }
    } else {
      throw ConfigError("unknown key '" + key + "' in scenario");
    }
  }
  cfg.relay_app.payment_aid = cfg.se.payment_aid;
  return seeded;
}

bool UnlockLocally(SessionBroker& broker, const SeConfig& config) {
  return broker.WithSe([&](SecureElement& se) {
    se.OpenChannel(Origin::kInternal);
    se.Transmit(Origin::kInternal, FromHex("00A4040007A000000476201000"));
    if (config.policy.require_pin_on_card) {
      se.Process(Origin::kInternal,
                 {0x00, 0x20, 0x00, 0x00, ToBytes(config.pin), std::nullopt});
    }
    const bool ok = se.Process(Origin::kInternal, {0x80, 0xE2, 0x00, 0xAA, {}, 0x00})
                        .IsOk();
    se.CloseChannel(Origin::kInternal);
    return ok;
  });
}

ScenarioResult RunPosDirect(const ScenarioConfig& cfg, Origin origin,
                            bool unlock) {
  ScenarioResult result;
  SessionBroker broker(cfg.se);
  result.atc_before = broker.WithSe([](SecureElement& se) { return se.atc(); });
  if (unlock) UnlockLocally(broker, cfg.se);

  auto clock = MakeClock(cfg.clock);
  const AccessPath path = origin == Origin::kInternal
                              ? AccessPath::kDirectInternal
                              : AccessPath::kDirectExternal;
  broker.WithSe([&](SecureElement& se) { se.OpenChannel(origin); });
  DirectCard card(broker, origin, *clock, LatencyModel{path, cfg.latency},
                  DeriveSeed(cfg.seed, "latency"));
  result.report = RunTransaction(card, TerminalFor(cfg), *clock);
  broker.WithSe([&](SecureElement& se) {
    se.CloseChannel(origin);
    result.wallet_locked_after = se.wallet_locked();
    result.atc_after = se.atc();
  });
  return result;
}

ScenarioResult RunRelayAttack(const ScenarioConfig& cfg) {
  ScenarioResult result;
  SessionBroker broker(cfg.se);
  result.atc_before = broker.WithSe([](SecureElement& se) { return se.atc(); });

  auto clock = MakeClock(cfg.clock);
  LocalSeChannel channel(broker);
  RelayAppConfig app = cfg.relay_app;
  app.payment_aid = cfg.se.payment_aid;
  {
    RelayRig rig(channel, app, *clock,
                 EmulatorConfig{LatencyModel{cfg.model, cfg.latency},
                                DeriveSeed(cfg.seed, "latency"),
                                cfg.hard_ceiling_ms},
                 cfg.transport);
    CardEmulator& emulator = rig.emulator();
    if (!emulator.ActivateField()) {
      result.session_refused = true;
      result.session_error = emulator.last_error_text();
    } else {
      result.report = RunTransaction(emulator, TerminalFor(cfg), *clock);
      emulator.DeactivateField();
    }
    rig.Shutdown();
  }
  broker.WithSe([&](SecureElement& se) {
    result.wallet_locked_after = se.wallet_locked();
    result.atc_after = se.atc();
  });
  return result;
}

nlohmann::json ScenarioResultToJson(const ScenarioResult& result,
                                    std::string_view scenario, uint64_t seed) {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["seed"] = std::to_string(seed);
  j["session_refused"] = result.session_refused;
  j["session_error"] = result.session_error;
  j["wallet_locked_after"] = result.wallet_locked_after;
  j["atc_before"] = result.atc_before;
  j["atc_after"] = result.atc_after;
  j["report"] = ReportToJson(result.report);
  return j;
}

}  // namespace relaysim
