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

#include "relaysim/config.h"

#include <fstream>
#include <set>

namespace relaysim {

namespace {

void RejectUnknownKeys(const nlohmann::json& obj, const char* where,
                       std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    throw ConfigError(std::string(where) + " must be a JSON object");
  }
  std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!known.contains(item.key())) {
      throw ConfigError(std::string("unknown key '") + item.key() + "' in " + where);
    }
  }
}

std::string String(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key + " must be a string");
  return v.get<std::string>();
}

Bytes HexField(const nlohmann::json& v, const std::string& key) {
  try {
    return FromHex(String(v, key));
  } catch (const HexError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

uint64_t Decimal(const nlohmann::json& v, const std::string& key,
                 uint64_t max) {
  uint64_t out = 0;
  if (v.is_number_unsigned()) {
    out = v.get<uint64_t>();
  } else if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos ||
        s.size() > 19) {
      throw ConfigError(key + " must be a decimal string");
    }
    out = std::stoull(s);
  } else {
    throw ConfigError(key + " must be a decimal string");
  }
  if (out > max) throw ConfigError(key + " out of range");
  return out;
}

bool Bool(const nlohmann::json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key + " must be true or false");
  return v.get<bool>();
}

Aid AidField(const nlohmann::json& v, const std::string& key) {
  try {
    return Aid(HexField(v, key));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

void ApplyProfile(const nlohmann::json& p, CardProfile& profile) {
  RejectUnknownKeys(p, "profile",
                    {"pan", "expiry", "service_code", "discretionary",
                     "cardholder", "app_version", "track1_cvc3_bitmap",
                     "track1_un_atc_bitmap", "track1_atc_digits",
                     "track2_cvc3_bitmap", "track2_un_atc_bitmap",
                     "track2_atc_digits"});
  for (const auto& [key, v] : p.items()) {
    if (key == "pan") profile.pan = String(v, key);
    else if (key == "expiry") profile.expiry = String(v, key);
    else if (key == "service_code") profile.service_code = String(v, key);
    else if (key == "discretionary") profile.discretionary = String(v, key);
    else if (key == "cardholder") profile.cardholder = String(v, key);
    else if (key == "app_version") profile.app_version = HexField(v, key);
    else if (key == "track1_cvc3_bitmap") profile.track1_cvc3_bitmap = HexField(v, key);
    else if (key == "track1_un_atc_bitmap") profile.track1_un_atc_bitmap = HexField(v, key);
    else if (key == "track1_atc_digits") profile.track1_atc_digits = static_cast<uint8_t>(Decimal(v, key, 255));
    else if (key == "track2_cvc3_bitmap") profile.track2_cvc3_bitmap = HexField(v, key);
    else if (key == "track2_un_atc_bitmap") profile.track2_un_atc_bitmap = HexField(v, key);
    else if (key == "track2_atc_digits") profile.track2_atc_digits = static_cast<uint8_t>(Decimal(v, key, 255));
  }
  try {
    profile.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }
}

void ApplySecureElement(const nlohmann::json& s, SeConfig& config) {
  RejectUnknownKeys(s, "secure_element",
                    {"cvc3_key", "initial_atc", "wallet_locked", "pin",
                     "pin_tries", "payment_aid", "application_label",
                     "directory", "list_cards_stub", "get_status_stub",
                     "isd_response"});
  for (const auto& [key, v] : s.items()) {
    if (key == "cvc3_key") {
      config.cvc3_key = HexField(v, key);
      if (config.cvc3_key.size() != 16) throw ConfigError("cvc3_key must be 16 bytes");
    } else if (key == "initial_atc") {
      config.initial_atc = static_cast<uint16_t>(Decimal(v, key, 0xFFFF));
    } else if (key == "wallet_locked") {
      config.wallet_locked = Bool(v, key);
    } else if (key == "pin") {
      config.pin = String(v, key);
    } else if (key == "pin_tries") {
      config.pin_tries = static_cast<uint8_t>(Decimal(v, key, 15));
    } else if (key == "payment_aid") {
      config.payment_aid = AidField(v, key);
    } else if (key == "application_label") {
      config.application_label = String(v, key);
    } else if (key == "directory") {
      if (!v.is_array()) throw ConfigError("directory must be an array");
      config.directory.clear();
      for (const auto& e : v) {
        RejectUnknownKeys(e, "directory entry", {"aid", "priority"});
        config.directory.push_back(
            {AidField(e.at("aid"), "aid"),
             static_cast<uint8_t>(Decimal(e.at("priority"), "priority", 15))});
      }
    } else if (key == "list_cards_stub") {
      config.list_cards_stub = HexField(v, key);
    } else if (key == "get_status_stub") {
      config.get_status_stub = HexField(v, key);
    } else if (key == "isd_response") {
      config.isd_response = HexField(v, key);
    }
  }
}

}  // namespace

void ApplyCardConfig(const nlohmann::json& json, SeConfig& config) {
  RejectUnknownKeys(json, "card config", {"profile", "secure_element"});
  if (json.contains("profile")) ApplyProfile(json["profile"], config.profile);
  if (json.contains("secure_element")) {
    ApplySecureElement(json["secure_element"], config);
  }
}

CountermeasurePolicy ParsePolicy(const nlohmann::json& json) {
  RejectUnknownKeys(json, "policy",
                    {"require_pin_on_card", "internal_disabled_aids"});
  CountermeasurePolicy policy;
  if (json.contains("require_pin_on_card")) {
    policy.require_pin_on_card = Bool(json["require_pin_on_card"], "require_pin_on_card");
  }
  if (json.contains("internal_disabled_aids")) {
    const auto& list = json["internal_disabled_aids"];
    if (!list.is_array()) throw ConfigError("internal_disabled_aids must be an array");
    for (const auto& v : list) {
      policy.internal_disabled_aids.insert(AidField(v, "internal_disabled_aids"));
    }
  }
  return policy;
}

void ApplyLatencyOverrides(const nlohmann::json& json, LatencyParams& p) {
  const std::pair<const char*, double*> fields[] = {
      {"external_mean_ms", &p.external_mean_ms},
      {"external_stddev_ms", &p.external_stddev_ms},
      {"internal_min_ms", &p.internal_min_ms},
      {"internal_max_ms", &p.internal_max_ms},
      {"wifi_min_ms", &p.wifi_min_ms},
      {"wifi_max_ms", &p.wifi_max_ms},
      {"internet_floor_ms", &p.internet_floor_ms},
      {"internet_light_mode_ms", &p.internet_light_mode_ms},
      {"internet_light_sigma", &p.internet_light_sigma},
      {"internet_heavy_weight", &p.internet_heavy_weight},
      {"internet_heavy_floor_ms", &p.internet_heavy_floor_ms},
      {"internet_heavy_median_ms", &p.internet_heavy_median_ms},
      {"internet_heavy_sigma", &p.internet_heavy_sigma},
  };
  if (!json.is_object()) throw ConfigError("latency must be a JSON object");
  for (const auto& item : json.items()) {
    bool found = false;
    for (const auto& [name, target] : fields) {
      if (item.key() != name) continue;
      if (!item.value().is_number() || item.value().get<double>() < 0) {
        throw ConfigError(item.key() + " must be a non-negative number");
      }
      *target = item.value().get<double>();
      found = true;
    }
    if (!found) throw ConfigError("unknown latency parameter '" + item.key() + "'");
  }
  if (p.internal_min_ms > p.internal_max_ms || p.wifi_min_ms > p.wifi_max_ms ||
      p.internet_heavy_weight > 1.0) {
    throw ConfigError("inconsistent latency parameters");
  }
}

nlohmann::json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace relaysim
