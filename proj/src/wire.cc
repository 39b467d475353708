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

#include "relaysim/wire.h"

#include "relaysim/stream.h"

namespace relaysim {

namespace {

bool KnownKind(uint8_t kind) {
  return kind >= static_cast<uint8_t>(FrameKind::kSessionOpen) &&
         kind <= static_cast<uint8_t>(FrameKind::kError);
}

void CheckControlPayload(const WireFrame& frame) {
  if ((frame.kind == FrameKind::kSessionOpen ||
       frame.kind == FrameKind::kSessionClose) &&
      !frame.payload.empty()) {
    throw FrameError(std::string(FrameKindName(frame.kind)) +
                     " frame must have an empty payload");
  }
}

}  // namespace

const char* FrameKindName(FrameKind kind) {
  switch (kind) {
    case FrameKind::kSessionOpen:
      return "SessionOpen";
    case FrameKind::kSessionClose:
      return "SessionClose";
    case FrameKind::kCApdu:
      return "CApdu";
    case FrameKind::kRApdu:
      return "RApdu";
    case FrameKind::kError:
      return "Error";
  }
  return "Unknown";
}

const char* ErrorReasonName(ErrorReason reason) {
  switch (reason) {
    case ErrorReason::kAccessDenied:
      return "AccessDenied";
    case ErrorReason::kUnlockFailed:
      return "UnlockFailed";
    case ErrorReason::kAppletUnavailable:
      return "AppletUnavailable";
    case ErrorReason::kTimeout:
      return "Timeout";
    case ErrorReason::kProtocol:
      return "Protocol";
    case ErrorReason::kNotOpen:
      return "NotOpen";
  }
  return "unknown";
}

WireFrame WireFrame::Error(ErrorReason reason, std::string_view detail) {
  Bytes payload{static_cast<uint8_t>(reason)};
  payload.insert(payload.end(), detail.begin(), detail.end());
  return {FrameKind::kError, std::move(payload)};
}

std::optional<ErrorReason> WireFrame::error_reason() const {
  if (kind != FrameKind::kError || payload.empty()) return std::nullopt;
  return static_cast<ErrorReason>(payload[0]);
}

std::string WireFrame::error_detail() const {
  if (kind != FrameKind::kError || payload.size() < 2) return {};
  return std::string(payload.begin() + 1, payload.end());
}

Bytes EncodeFrame(const WireFrame& frame) {
  CheckControlPayload(frame);
  if (frame.payload.size() > kMaxFramePayload) {
    throw FrameError("frame payload exceeds 65535 bytes");
  }
  Bytes out;
  out.reserve(kFrameHeaderSize + frame.payload.size());
  out.push_back(static_cast<uint8_t>(frame.kind));
  out.push_back(static_cast<uint8_t>(frame.payload.size() >> 8));
  out.push_back(static_cast<uint8_t>(frame.payload.size() & 0xFF));
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

std::optional<WireFrame> DecodeFrame(ByteView buffer, size_t* consumed) {
  if (buffer.size() < kFrameHeaderSize) return std::nullopt;
  if (!KnownKind(buffer[0])) {
    throw FrameError("unknown frame kind " + ToHex(buffer.first(1)));
  }
  const size_t len = (static_cast<size_t>(buffer[1]) << 8) | buffer[2];
  if (buffer.size() < kFrameHeaderSize + len) return std::nullopt;
  WireFrame frame{static_cast<FrameKind>(buffer[0]),
                  Bytes(buffer.begin() + kFrameHeaderSize,
                        buffer.begin() + kFrameHeaderSize + len)};
  CheckControlPayload(frame);
  if (consumed != nullptr) *consumed = kFrameHeaderSize + len;
  return frame;
}

void FrameChannel::Send(const WireFrame& frame) {
  stream_.WriteAll(EncodeFrame(frame));
}

std::optional<WireFrame> FrameChannel::Receive() {
  uint8_t header[kFrameHeaderSize];
  if (!stream_.ReadExact(header)) return std::nullopt;
  if (!KnownKind(header[0])) {
    throw FrameError("unknown frame kind " + ToHex(ByteView(header, 1)));
  }
  const size_t len = (static_cast<size_t>(header[1]) << 8) | header[2];
  WireFrame frame{static_cast<FrameKind>(header[0]), Bytes(len)};
  if (len > 0 && !stream_.ReadExact(frame.payload)) {
    throw TransportError("connection closed mid-frame");
  }
  CheckControlPayload(frame);
  return frame;
}

}  // namespace relaysim
