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

#include <functional>
#include <mutex>
#include <stdexcept>

#include "relaysim/hex.h"
#include "relaysim/latency.h"
#include "relaysim/secure_element.h"
#include "relaysim/sim_clock.h"

namespace relaysim {

// Transport-level loss of the card as seen by a reader.
class CardRemoved : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Anything a reader can exchange APDUs with.
class CardInterface {
 public:
  virtual ~CardInterface() = default;
  // Throws CardRemoved when the card is gone.
  virtual Bytes Transmit(ByteView capdu) = 0;
};

// Owns a secure element and serializes every access to it.
class SessionBroker {
 public:
  explicit SessionBroker(SeConfig config = {}) : se_(std::move(config)) {}

  template <typename Fn>
  auto WithSe(Fn&& fn) {
    std::lock_guard<std::mutex> lock(mu_);
    return fn(se_);
  }

  Bytes Transmit(Origin origin, ByteView capdu) {
    return WithSe([&](SecureElement& se) { return se.Transmit(origin, capdu); });
  }

 private:
  std::mutex mu_;
  SecureElement se_;
};

// Reader talking straight to the secure element over one interface, with
// the path's round-trip delay injected per exchange.
class DirectCard : public CardInterface {
 public:
  DirectCard(SessionBroker& broker, Origin origin, SimClock& clock,
             LatencyModel model, uint64_t seed)
      : broker_(broker), origin_(origin), clock_(clock), sampler_(model, seed) {}

  Bytes Transmit(ByteView capdu) override {
    Bytes rsp = broker_.Transmit(origin_, capdu);
    clock_.Delay(sampler_.Next());
    return rsp;
  }

 private:
  SessionBroker& broker_;
  Origin origin_;
  SimClock& clock_;
  DelaySampler sampler_;
};

}  // namespace relaysim
