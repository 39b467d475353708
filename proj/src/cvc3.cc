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

#include "relaysim/cvc3.h"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <stdexcept>

namespace relaysim {

std::array<uint8_t, 2> ComputeCvc3(ByteView key, uint8_t track_label,
                                   ByteView un, uint16_t atc) {
  Bytes message{track_label};
  message.insert(message.end(), un.begin(), un.end());
  message.push_back(static_cast<uint8_t>(atc >> 8));
  message.push_back(static_cast<uint8_t>(atc & 0xFF));

  uint8_t digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
           message.data(), message.size(), digest, &digest_len) == nullptr) {
    throw std::runtime_error("HMAC-SHA256 failed");
  }
  return {digest[0], digest[1]};
}

Cvc3Pair ComputeCvc3Pair(ByteView key, ByteView un, uint16_t atc) {
  return {ComputeCvc3(key, kTrack1Label, un, atc),
          ComputeCvc3(key, kTrack2Label, un, atc)};
}

}  // namespace relaysim
