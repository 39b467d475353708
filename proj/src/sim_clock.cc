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

#include "relaysim/sim_clock.h"

#include <thread>

namespace relaysim {

double VirtualClock::NowMs() {
  std::lock_guard<std::mutex> lock(mu_);
  return now_ms_;
}

void VirtualClock::Delay(double ms) {
  if (ms <= 0) return;
  std::lock_guard<std::mutex> lock(mu_);
  now_ms_ += ms;
}

RealClock::RealClock() : start_(std::chrono::steady_clock::now()) {}

double RealClock::NowMs() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start_)
      .count();
}

void RealClock::Delay(double ms) {
  if (ms <= 0) return;
  std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(ms));
}

}  // namespace relaysim
