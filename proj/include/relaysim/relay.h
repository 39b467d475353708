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

#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "relaysim/card_interface.h"
#include "relaysim/latency.h"
#include "relaysim/sim_clock.h"
#include "relaysim/stream.h"
#include "relaysim/wire.h"

namespace relaysim {

// The relay app's handle on the secure element's internal interface.
class SeChannel {
 public:
  virtual ~SeChannel() = default;
  virtual void Open() = 0;
  virtual Bytes Transmit(ByteView capdu) = 0;
  virtual void Close() = 0;
};

class LocalSeChannel : public SeChannel {
 public:
  explicit LocalSeChannel(SessionBroker& broker) : broker_(broker) {}

  void Open() override;
  Bytes Transmit(ByteView capdu) override;
  void Close() override;

 private:
  SessionBroker& broker_;
};

// Internal channel to a secure element served by `se-host` over the wire
// protocol.
class RemoteSeChannel : public SeChannel {
 public:
  explicit RemoteSeChannel(std::unique_ptr<Stream> stream);

  void Open() override;
  Bytes Transmit(ByteView capdu) override;
  void Close() override;

 private:
  WireFrame Exchange(const WireFrame& request);

  std::unique_ptr<Stream> stream_;
  FrameChannel frames_;
};

// Serves raw SE access on one origin: SessionOpen opens the channel,
// CApdu frames are processed, SessionClose closes it. Every control frame
// is acknowledged with a frame of the same kind.
void ServeSeHost(SessionBroker& broker, Origin origin, Stream& stream);

struct RelayAppConfig {
  // Whether the OS lets the app talk to the secure element at all.
  bool se_access_granted = true;
  // PIN sent with VERIFY before unlocking, if the attacker knows it.
  std::optional<std::string> pin;
  // Applet whose internal reachability is checked on session open.
  Aid payment_aid{aids::kPrepaidCard};
};

struct RelayAppStats {
  int sessions_opened = 0;
  int sessions_refused = 0;
  int sessions_closed = 0;
  int apdus_relayed = 0;
  std::optional<ErrorReason> last_error;
};

// Phone-side endpoint bridging the network to the internal interface.
class RelayApp {
 public:
  RelayApp(SeChannel& se, RelayAppConfig config)
      : se_(se), config_(std::move(config)) {}

  // Handles frames until the peer disconnects. A connection carries at most
  // one open session at a time; losing the transport while a session is
  // open is handled like SessionClose.
  void ServeConnection(Stream& stream);

  const RelayAppStats& stats() const { return stats_; }

 private:
  std::optional<WireFrame> OpenSession();
  void CloseSession();

  SeChannel& se_;
  RelayAppConfig config_;
  RelayAppStats stats_;
  bool open_ = false;
};

enum class SessionState { kIdle, kOpen, kClosed };

// Emulator-side view of one relay session: the latency model applied to
// each relayed command/response pair and an optional hard ceiling.
struct RelaySession {
  SessionState state = SessionState::kIdle;
  DelaySampler sampler;
  std::optional<double> hard_ceiling_ms;
  double last_delay_ms = 0.0;

  RelaySession(LatencyModel model, uint64_t seed,
               std::optional<double> ceiling = std::nullopt)
      : sampler(model, seed), hard_ceiling_ms(ceiling) {}
};

// Delays delivery of `response` by one sampled round trip. The payload is
// returned untouched, or replaced by a Timeout error when the sample
// exceeds the session's hard ceiling.
WireFrame Inject(RelaySession& session, SimClock& clock,
                 const WireFrame& response);

struct EmulatorConfig {
  LatencyModel model;
  uint64_t seed = 0;
  std::optional<double> hard_ceiling_ms;
};

// Terminal-side endpoint: looks like a contactless card to the reader and
// forwards everything to the relay app.
class CardEmulator : public CardInterface {
 public:
  CardEmulator(SimClock& clock, EmulatorConfig config);

  void AttachRelay(std::unique_ptr<Stream> stream);
  bool relay_connected() const { return stream_ != nullptr; }

  // Reader field switched on: requests SE access through the relay app.
  // False (with last_error set) when no relay app is connected or the
  // session is refused.
  bool ActivateField();
  // Reader field switched off: closes the SE session.
  void DeactivateField();

  Bytes Transmit(ByteView capdu) override;

  const RelaySession& session() const { return session_; }
  const std::optional<WireFrame>& last_error() const { return last_error_; }
  std::string last_error_text() const;

  // Drops the relay connection without a SessionClose.
  void DisconnectRelay();

 private:
  SimClock& clock_;
  RelaySession session_;
  std::unique_ptr<Stream> stream_;
  std::unique_ptr<FrameChannel> frames_;
  std::optional<WireFrame> last_error_;
};

}  // namespace relaysim

namespace relaysim {

enum class Transport { kPipe, kTcp };

// Relay app and card emulator wired together in one process, over an
// in-process pipe or TCP loopback. The relay app runs on its own thread;
// the emulator listens and the relay app connects, as on the real setup.
class RelayRig {
 public:
  RelayRig(SeChannel& se, RelayAppConfig app_config, SimClock& clock,
           EmulatorConfig emulator_config, Transport transport);
  ~RelayRig();
  RelayRig(const RelayRig&) = delete;
  RelayRig& operator=(const RelayRig&) = delete;

  CardEmulator& emulator() { return emulator_; }
  // Disconnects the emulator and waits for the relay app to finish.
  void Shutdown();
  // Valid after Shutdown().
  const RelayAppStats& app_stats() const { return app_.stats(); }

 private:
  RelayApp app_;
  CardEmulator emulator_;
  std::unique_ptr<Stream> app_stream_;
  std::thread app_thread_;
};

}  // namespace relaysim
