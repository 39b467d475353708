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
#include <optional>
#include <stdexcept>
#include <string>

#include "relaysim/hex.h"

namespace relaysim {

class Stream;

class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relay wire format: [kind:1][payload length:2, big-endian][payload].
enum class FrameKind : uint8_t {
  kSessionOpen = 0x01,
  kSessionClose = 0x02,
  kCApdu = 0x03,
  kRApdu = 0x04,
  kError = 0x05,
};

const char* FrameKindName(FrameKind kind);

// First payload byte of an Error frame; the rest is an ASCII detail string.
enum class ErrorReason : uint8_t {
  kAccessDenied = 0x01,
  kUnlockFailed = 0x02,
  kAppletUnavailable = 0x03,
  kTimeout = 0x04,
  kProtocol = 0x05,
  kNotOpen = 0x06,
};

const char* ErrorReasonName(ErrorReason reason);

struct WireFrame {
  FrameKind kind = FrameKind::kError;
  Bytes payload;

  static WireFrame Open() { return {FrameKind::kSessionOpen, {}}; }
  static WireFrame Close() { return {FrameKind::kSessionClose, {}}; }
  static WireFrame CApdu(Bytes apdu) { return {FrameKind::kCApdu, std::move(apdu)}; }
  static WireFrame RApdu(Bytes apdu) { return {FrameKind::kRApdu, std::move(apdu)}; }
  static WireFrame Error(ErrorReason reason, std::string_view detail);

  // Valid only for Error frames with a non-empty payload.
  std::optional<ErrorReason> error_reason() const;
  std::string error_detail() const;

  bool operator==(const WireFrame&) const = default;
};

inline constexpr size_t kFrameHeaderSize = 3;
inline constexpr size_t kMaxFramePayload = 0xFFFF;

Bytes EncodeFrame(const WireFrame& frame);

// Decodes one frame from the front of `buffer`. Returns nullopt when more
// bytes are needed; sets `consumed` on success. Throws FrameError on an
// unknown kind or a session control frame carrying payload.
std::optional<WireFrame> DecodeFrame(ByteView buffer, size_t* consumed);

// Frame-level view of a byte stream.
class FrameChannel {
 public:
  explicit FrameChannel(Stream& stream) : stream_(stream) {}

  void Send(const WireFrame& frame);
  // nullopt on orderly EOF or transport loss.
  std::optional<WireFrame> Receive();

  Stream& stream() { return stream_; }

 private:
  Stream& stream_;
};

}  // namespace relaysim
