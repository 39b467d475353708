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

#include <chrono>
#include <mutex>

namespace relaysim {

// Time source for reader-side measurements. Latency injection goes through
// Delay() so that the same code runs against wall-clock time (the injected
// delay is slept) or against a virtual clock (the delay is only accounted).
class SimClock {
 public:
  virtual ~SimClock() = default;
  virtual double NowMs() = 0;
  virtual void Delay(double ms) = 0;
};

// Deterministic: time advances only by injected delays, so local compute
// time is not counted.
class VirtualClock : public SimClock {
 public:
  double NowMs() override;
  void Delay(double ms) override;

 private:
  std::mutex mu_;
  double now_ms_ = 0.0;
};

class RealClock : public SimClock {
 public:
  RealClock();
  double NowMs() override;
  void Delay(double ms) override;

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace relaysim
