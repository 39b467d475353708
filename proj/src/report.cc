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

#include "relaysim/report.h"

#include <cstdio>

namespace relaysim {

namespace {

std::string Ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", ms);
  return buf;
}

Outcome OutcomeFromName(const std::string& name) {
  for (Outcome o : {Outcome::kApproved, Outcome::kDeclined, Outcome::kTimedOut,
                    Outcome::kCardRemoved}) {
    if (name == OutcomeName(o)) return o;
  }
  throw std::invalid_argument("unknown outcome " + name);
}

}  // namespace

nlohmann::json ReportToJson(const TransactionReport& report) {
  nlohmann::json steps = nlohmann::json::array();
  for (const TransactionStep& step : report.steps) {
    steps.push_back({{"name", step.name},
                     {"command", ToHex(step.command)},
                     {"response", ToHex(step.response)},
                     {"round_trip_ms", step.round_trip_ms}});
  }
  nlohmann::json j = {
      {"outcome", OutcomeName(report.outcome)},
      {"reason", report.reason},
      {"aid", ToHex(report.aid)},
      {"un", ToHex(report.un)},
      {"pan", report.pan},
      {"expiry", report.expiry},
      {"service_code", report.service_code},
      {"discretionary", report.discretionary},
      {"track1", ToHex(report.track1)},
      {"track2", ToHex(report.track2)},
      {"cvc3_track1", ToHex(report.cvc3_track1)},
      {"cvc3_track2", ToHex(report.cvc3_track2)},
      {"total_ms", report.total_ms},
      {"steps", steps},
  };
  j["atc"] = report.atc ? nlohmann::json(*report.atc) : nlohmann::json(nullptr);
  return j;
}

TransactionReport ReportFromJson(const nlohmann::json& j) {
  TransactionReport r;
  r.outcome = OutcomeFromName(j.at("outcome").get<std::string>());
  r.reason = j.at("reason").get<std::string>();
  r.aid = FromHex(j.at("aid").get<std::string>());
  r.un = FromHex(j.at("un").get<std::string>());
  r.pan = j.at("pan").get<std::string>();
  r.expiry = j.at("expiry").get<std::string>();
  r.service_code = j.at("service_code").get<std::string>();
  r.discretionary = j.at("discretionary").get<std::string>();
  r.track1 = FromHex(j.at("track1").get<std::string>());
  r.track2 = FromHex(j.at("track2").get<std::string>());
  r.cvc3_track1 = FromHex(j.at("cvc3_track1").get<std::string>());
  r.cvc3_track2 = FromHex(j.at("cvc3_track2").get<std::string>());
  r.total_ms = j.at("total_ms").get<double>();
  if (!j.at("atc").is_null()) r.atc = j.at("atc").get<uint16_t>();
  for (const auto& s : j.at("steps")) {
    r.steps.push_back({s.at("name").get<std::string>(),
                       FromHex(s.at("command").get<std::string>()),
                       FromHex(s.at("response").get<std::string>()),
                       s.at("round_trip_ms").get<double>()});
  }
  return r;
}

std::string ReportTrace(const TransactionReport& report) {
  std::string out;
  int n = 1;
  for (const TransactionStep& step : report.steps) {
    out += "[" + std::to_string(n++) + "] " + step.name + "  (" +
           Ms(step.round_trip_ms) + " ms)\n";
    out += "  C-APDU: " + ToHex(step.command, true) + "\n";
    out += "  R-APDU: " + (step.response.empty() ? std::string("(none)")
                                                 : ToHex(step.response, true)) +
           "\n";
  }
  out += std::string("outcome: ") + OutcomeName(report.outcome);
  if (!report.reason.empty()) out += " (" + report.reason + ")";
  out += "\ntotal: " + Ms(report.total_ms) + " ms\n";
  if (!report.pan.empty()) {
    out += "PAN " + report.pan + "  exp " + report.expiry + "  svc " +
           report.service_code + "\n";
  }
  if (report.atc) {
    out += "UN " + ToHex(report.un) + "  ATC " + std::to_string(*report.atc) +
           "  CVC3 t1 " + ToHex(report.cvc3_track1) + "  t2 " +
           ToHex(report.cvc3_track2) + "\n";
  }
  return out;
}

}  // namespace relaysim
