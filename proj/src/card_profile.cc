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

#include "relaysim/card_profile.h"

#include <algorithm>
#include <stdexcept>

namespace relaysim {

namespace {

bool AllDigits(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

void RequireDigits(std::string_view field, std::string_view value,
                   size_t min_len, size_t max_len) {
  if (value.size() < min_len || value.size() > max_len || !AllDigits(value)) {
    throw std::invalid_argument(std::string(field) + " must be " +
                                std::to_string(min_len) + "-" +
                                std::to_string(max_len) + " decimal digits");
  }
}

}  // namespace

bool LuhnValid(std::string_view digits) {
  if (digits.empty() || !AllDigits(digits)) return false;
  int sum = 0;
  bool twice = false;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    int d = *it - '0';
    if (twice) {
      d *= 2;
      if (d > 9) d -= 9;
    }
    sum += d;
    twice = !twice;
  }
  return sum % 10 == 0;
}

void CardProfile::Validate() const {
  RequireDigits("pan", pan, 12, 19);
  if (!LuhnValid(pan)) throw std::invalid_argument("pan fails Luhn check");
  RequireDigits("expiry", expiry, 4, 4);
  RequireDigits("service_code", service_code, 3, 3);
  RequireDigits("discretionary", discretionary, 0, 20);
  if (cardholder.size() < 2 || cardholder.size() > 26 ||
      cardholder.find('^') != std::string::npos) {
    throw std::invalid_argument("cardholder must be 2-26 chars without '^'");
  }
  if (track1_cvc3_bitmap.size() != 6 || track1_un_atc_bitmap.size() != 6) {
    throw std::invalid_argument("track 1 bitmaps must be 6 bytes");
  }
  if (track2_cvc3_bitmap.size() != 2 || track2_un_atc_bitmap.size() != 2) {
    throw std::invalid_argument("track 2 bitmaps must be 2 bytes");
  }
  if (app_version.size() != 2) {
    throw std::invalid_argument("app_version must be 2 bytes");
  }
}

Bytes CardProfile::Track1() const {
  return ToBytes("B" + pan + "^" + cardholder + "^" + expiry + service_code +
                 discretionary);
}

Bytes CardProfile::Track2() const {
  std::string nibbles = pan + "D" + expiry + service_code + discretionary;
  if (nibbles.size() % 2 != 0) nibbles.push_back('F');
  return FromHex(nibbles);
}

TlvNode CardProfile::MagStripeRecord() const {
  return TlvNode::Constructed(
      MakeTag("70"),
      {
          TlvNode::Primitive(MakeTag("9F6C"), app_version),
          TlvNode::Primitive(MakeTag("9F62"), track1_cvc3_bitmap),
          TlvNode::Primitive(MakeTag("9F63"), track1_un_atc_bitmap),
          TlvNode::Primitive(MakeTag("56"), Track1()),
          TlvNode::Primitive(MakeTag("9F64"), {track1_atc_digits}),
          TlvNode::Primitive(MakeTag("9F65"), track2_cvc3_bitmap),
          TlvNode::Primitive(MakeTag("9F66"), track2_un_atc_bitmap),
          TlvNode::Primitive(MakeTag("9F6B"), Track2()),
          TlvNode::Primitive(MakeTag("9F67"), {track2_atc_digits}),
      });
}

}  // namespace relaysim
