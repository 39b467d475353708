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

#include "relaysim/apdu.h"

namespace relaysim {

CommandApdu ParseCommand(ByteView raw) {
  if (raw.size() < 4) {
    throw MalformedApdu("command shorter than 4-byte header");
  }
  CommandApdu cmd{raw[0], raw[1], raw[2], raw[3], {}, std::nullopt};
  const size_t body = raw.size() - 4;
  if (body == 0) return cmd;  // case 1
  if (body == 1) {            // case 2
    cmd.le = raw[4];
    return cmd;
  }
  const size_t lc = raw[4];
  if (lc == 0) {
    throw UnsupportedLength("extended-length command APDU");
  }
  if (body == 1 + lc) {  // case 3
    cmd.data.assign(raw.begin() + 5, raw.end());
    return cmd;
  }
  if (body == 2 + lc) {  // case 4
    cmd.data.assign(raw.begin() + 5, raw.end() - 1);
    cmd.le = raw.back();
    return cmd;
  }
  throw MalformedApdu("Lc=" + std::to_string(lc) + " inconsistent with " +
                      std::to_string(body) + " body bytes");
}

Bytes SerializeCommand(const CommandApdu& cmd) {
  if (cmd.data.size() > 255) {
    throw UnsupportedLength("command data exceeds short-form Lc");
  }
  Bytes out{cmd.cla, cmd.ins, cmd.p1, cmd.p2};
  if (!cmd.data.empty()) {
    out.push_back(static_cast<uint8_t>(cmd.data.size()));
    out.insert(out.end(), cmd.data.begin(), cmd.data.end());
  }
  if (cmd.le) out.push_back(*cmd.le);
  return out;
}

ResponseApdu ParseResponse(ByteView raw) {
  if (raw.size() < 2) {
    throw MalformedApdu("response shorter than status word");
  }
  return {Bytes(raw.begin(), raw.end() - 2), raw[raw.size() - 2],
          raw[raw.size() - 1]};
}

Bytes SerializeResponse(const ResponseApdu& rsp) {
  Bytes out = rsp.data;
  out.push_back(rsp.sw1);
  out.push_back(rsp.sw2);
  return out;
}

Aid::Aid(Bytes bytes) : bytes_(std::move(bytes)) {
  if (bytes_.size() < 5 || bytes_.size() > 16) {
    throw std::invalid_argument("AID length " + std::to_string(bytes_.size()) +
                                " outside [5,16]");
  }
}

}  // namespace relaysim
