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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace relaysim {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

class HexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Accepts upper or lower case digits; spaces, tabs, colons and newlines are
// ignored. Throws HexError on an odd digit count or a non-hex character.
Bytes FromHex(std::string_view text);

// Uppercase output, optionally with a single space between bytes.
std::string ToHex(ByteView bytes, bool spaced = false);

inline Bytes ToBytes(std::string_view ascii) {
  return Bytes(ascii.begin(), ascii.end());
}

}  // namespace relaysim
