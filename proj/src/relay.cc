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

#include "relaysim/relay.h"

#include "relaysim/apdu.h"

namespace relaysim {

namespace {

const Bytes kSelectWallet = FromHex("00A4040007A000000476201000");
const Bytes kUnlockWallet = FromHex("80E200AA00");
const Bytes kLockWallet = FromHex("80E2005500");

uint16_t StatusOf(const Bytes& rsp) {
  try {
    return ParseResponse(rsp).Sw();
  } catch (const MalformedApdu&) {
    return 0;
  }
}

Bytes SelectCommand(const Aid& aid) {
  return SerializeCommand({0x00, 0xA4, 0x04, 0x00, aid.bytes(), 0x00});
}

}  // namespace

void LocalSeChannel::Open() {
  broker_.WithSe([](SecureElement& se) { se.OpenChannel(Origin::kInternal); });
}

Bytes LocalSeChannel::Transmit(ByteView capdu) {
  return broker_.Transmit(Origin::kInternal, capdu);
}

void LocalSeChannel::Close() {
  broker_.WithSe([](SecureElement& se) { se.CloseChannel(Origin::kInternal); });
}

RemoteSeChannel::RemoteSeChannel(std::unique_ptr<Stream> stream)
    : stream_(std::move(stream)), frames_(*stream_) {}

WireFrame RemoteSeChannel::Exchange(const WireFrame& request) {
  frames_.Send(request);
  std::optional<WireFrame> reply = frames_.Receive();
  if (!reply) throw TransportError("se-host connection lost");
  return *reply;
}

void RemoteSeChannel::Open() {
  if (Exchange(WireFrame::Open()).kind != FrameKind::kSessionOpen) {
    throw TransportError("se-host refused channel");
  }
}

Bytes RemoteSeChannel::Transmit(ByteView capdu) {
  WireFrame reply = Exchange(WireFrame::CApdu(Bytes(capdu.begin(), capdu.end())));
  if (reply.kind != FrameKind::kRApdu) {
    throw TransportError("se-host answered " +
                         std::string(FrameKindName(reply.kind)));
  }
  return reply.payload;
}

void RemoteSeChannel::Close() { Exchange(WireFrame::Close()); }

void ServeSeHost(SessionBroker& broker, Origin origin, Stream& stream) {
  FrameChannel frames(stream);
  bool open = false;
  try {
    while (std::optional<WireFrame> frame = frames.Receive()) {
      switch (frame->kind) {
        case FrameKind::kSessionOpen:
          broker.WithSe([&](SecureElement& se) { se.OpenChannel(origin); });
          open = true;
          frames.Send(WireFrame::Open());
          break;
        case FrameKind::kSessionClose:
          broker.WithSe([&](SecureElement& se) { se.CloseChannel(origin); });
          open = false;
          frames.Send(WireFrame::Close());
          break;
        case FrameKind::kCApdu:
          if (!open) {
            frames.Send(WireFrame::Error(ErrorReason::kNotOpen, "no channel"));
          } else {
            frames.Send(WireFrame::RApdu(broker.Transmit(origin, frame->payload)));
          }
          break;
        default:
          frames.Send(WireFrame::Error(ErrorReason::kProtocol,
                                       "unexpected frame"));
      }
    }
  } catch (const std::runtime_error&) {
    // Transport or framing failure ends the connection.
  }
  if (open) {
    // The client vanished without SessionClose; do its cleanup so an
    // unlocked wallet does not outlive the session.
    broker.WithSe([&](SecureElement& se) {
      if (origin == Origin::kInternal) {
        se.Transmit(origin, kSelectWallet);
        se.Transmit(origin, kLockWallet);
      }
      se.CloseChannel(origin);
    });
  }
}

std::optional<WireFrame> RelayApp::OpenSession() {
  if (!config_.se_access_granted) {
    return WireFrame::Error(ErrorReason::kAccessDenied,
                            "secure element access not permitted");
  }
  se_.Open();

  // A payment applet that is disabled on the internal interface answers
  // 6A82 even while the wallet is locked; there is nothing to relay.
  if (StatusOf(se_.Transmit(SelectCommand(config_.payment_aid))) ==
      sw::kFileNotFound) {
    se_.Close();
    return WireFrame::Error(ErrorReason::kAppletUnavailable,
                            "payment applet not reachable internally");
  }

  if (StatusOf(se_.Transmit(kSelectWallet)) != sw::kSuccess) {
    se_.Close();
    return WireFrame::Error(ErrorReason::kUnlockFailed,
                            "wallet component not selectable");
  }
  if (config_.pin) {
    Bytes verify = SerializeCommand(
        {0x00, 0x20, 0x00, 0x00, ToBytes(*config_.pin), std::nullopt});
    se_.Transmit(verify);
  }
  const uint16_t status = StatusOf(se_.Transmit(kUnlockWallet));
  if (status != sw::kSuccess) {
    se_.Transmit(kLockWallet);
    se_.Close();
    return WireFrame::Error(ErrorReason::kUnlockFailed,
                            "unlock returned " + ToHex(Bytes{
                                static_cast<uint8_t>(status >> 8),
                                static_cast<uint8_t>(status & 0xFF)}));
  }
  open_ = true;
  return std::nullopt;
}

void RelayApp::CloseSession() {
  open_ = false;
  se_.Transmit(kSelectWallet);
  se_.Transmit(kLockWallet);
  se_.Close();
  ++stats_.sessions_closed;
}

void RelayApp::ServeConnection(Stream& stream) {
  FrameChannel frames(stream);
  try {
    while (std::optional<WireFrame> frame = frames.Receive()) {
      switch (frame->kind) {
        case FrameKind::kSessionOpen: {
          if (open_) {
            frames.Send(WireFrame::Error(ErrorReason::kProtocol,
                                         "session already open"));
            break;
          }
          std::optional<WireFrame> refusal = OpenSession();
          if (refusal) {
            ++stats_.sessions_refused;
            stats_.last_error = refusal->error_reason();
            frames.Send(*refusal);
          } else {
            ++stats_.sessions_opened;
            frames.Send(WireFrame::Open());
          }
          break;
        }
        case FrameKind::kSessionClose:
          if (open_) CloseSession();
          frames.Send(WireFrame::Close());
          break;
        case FrameKind::kCApdu:
          if (!open_) {
            frames.Send(WireFrame::Error(ErrorReason::kNotOpen,
                                         "no open session"));
            break;
          }
          frames.Send(WireFrame::RApdu(se_.Transmit(frame->payload)));
          ++stats_.apdus_relayed;
          break;
        default:
          frames.Send(WireFrame::Error(ErrorReason::kProtocol,
                                       "unexpected frame"));
      }
    }
  } catch (const FrameError&) {
    stats_.last_error = ErrorReason::kProtocol;
  } catch (const TransportError&) {
    stats_.last_error = ErrorReason::kProtocol;
  }
  // Transport gone: same as SessionClose so the wallet ends up locked.
  if (open_) {
    try {
      CloseSession();
    } catch (const TransportError&) {
    }
  }
}

WireFrame Inject(RelaySession& session, SimClock& clock,
                 const WireFrame& response) {
  const double delay = session.sampler.Next();
  session.last_delay_ms = delay;
  if (session.hard_ceiling_ms && delay > *session.hard_ceiling_ms) {
    clock.Delay(*session.hard_ceiling_ms);
    return WireFrame::Error(ErrorReason::kTimeout, "relay delay over ceiling");
  }
  clock.Delay(delay);
  return response;
}

CardEmulator::CardEmulator(SimClock& clock, EmulatorConfig config)
    : clock_(clock),
      session_(config.model, config.seed, config.hard_ceiling_ms) {}

void CardEmulator::AttachRelay(std::unique_ptr<Stream> stream) {
  stream_ = std::move(stream);
  frames_ = std::make_unique<FrameChannel>(*stream_);
  session_.state = SessionState::kIdle;
}

void CardEmulator::DisconnectRelay() {
  if (stream_) stream_->Close();
  frames_.reset();
  stream_.reset();
  session_.state = SessionState::kClosed;
}

bool CardEmulator::ActivateField() {
  last_error_.reset();
  if (!stream_) {
    last_error_ = WireFrame::Error(ErrorReason::kAccessDenied,
                                   "no relay app connected");
    return false;
  }
  try {
    frames_->Send(WireFrame::Open());
    std::optional<WireFrame> reply = frames_->Receive();
    if (reply && reply->kind == FrameKind::kSessionOpen) {
      session_.state = SessionState::kOpen;
      return true;
    }
    last_error_ = reply ? *reply
                        : WireFrame::Error(ErrorReason::kProtocol,
                                           "relay connection lost");
  } catch (const std::runtime_error& e) {
    last_error_ = WireFrame::Error(ErrorReason::kProtocol, e.what());
  }
  session_.state = SessionState::kClosed;
  return false;
}

void CardEmulator::DeactivateField() {
  if (session_.state != SessionState::kOpen || !stream_) return;
  session_.state = SessionState::kClosed;
  try {
    frames_->Send(WireFrame::Close());
    frames_->Receive();
  } catch (const std::runtime_error&) {
  }
}

Bytes CardEmulator::Transmit(ByteView capdu) {
  if (session_.state != SessionState::kOpen || !stream_) {
    throw CardRemoved("no open relay session");
  }
  std::optional<WireFrame> reply;
  try {
    frames_->Send(WireFrame::CApdu(Bytes(capdu.begin(), capdu.end())));
    reply = frames_->Receive();
  } catch (const std::runtime_error& e) {
    session_.state = SessionState::kClosed;
    throw CardRemoved(std::string("relay transport failed: ") + e.what());
  }
  if (!reply) {
    session_.state = SessionState::kClosed;
    throw CardRemoved("relay connection lost");
  }
  WireFrame delivered = Inject(session_, clock_, *reply);
  if (delivered.kind != FrameKind::kRApdu) {
    last_error_ = delivered;
    throw CardRemoved("relay reported " + last_error_text());
  }
  return delivered.payload;
}

std::string CardEmulator::last_error_text() const {
  if (!last_error_) return {};
  std::optional<ErrorReason> reason = last_error_->error_reason();
  std::string text = reason ? ErrorReasonName(*reason) : "error";
  std::string detail = last_error_->error_detail();
  if (!detail.empty()) text += ": " + detail;
  return text;
}

}  // namespace relaysim

namespace relaysim {

RelayRig::RelayRig(SeChannel& se, RelayAppConfig app_config, SimClock& clock,
                   EmulatorConfig emulator_config, Transport transport)
    : app_(se, std::move(app_config)), emulator_(clock, emulator_config) {
  if (transport == Transport::kPipe) {
    auto [emulator_end, app_end] = MakePipe();
    emulator_.AttachRelay(std::move(emulator_end));
    app_stream_ = std::move(app_end);
  } else {
    TcpListener listener("127.0.0.1", 0);
    app_stream_ = TcpConnect("127.0.0.1", listener.port());
    emulator_.AttachRelay(listener.Accept());
    if (!emulator_.relay_connected()) {
      throw TransportError("emulator failed to accept relay connection");
    }
  }
  app_thread_ = std::thread([this] { app_.ServeConnection(*app_stream_); });
}

RelayRig::~RelayRig() { Shutdown(); }

void RelayRig::Shutdown() {
  if (!app_thread_.joinable()) return;
  emulator_.DisconnectRelay();
  app_thread_.join();
  app_stream_->Close();
}

}  // namespace relaysim
