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

#include "relaysim/benchmark.h"

#include <algorithm>
#include <numeric>

#include "relaysim/card_interface.h"
#include "relaysim/relay.h"

namespace relaysim {

CommandApdu IsdSelectCommand() {
  return {0x00, 0xA4, 0x04, 0x00, aids::kIssuerSecurityDomain, std::nullopt};
}

double BenchmarkResult::Median() const {
  if (samples.empty()) return 0.0;
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const size_t n = sorted.size();
  return n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double BenchmarkResult::Mean() const {
  if (samples.empty()) return 0.0;
  return std::accumulate(samples.begin(), samples.end(), 0.0) /
         static_cast<double>(samples.size());
}

double BenchmarkResult::Min() const {
  return samples.empty() ? 0.0 : *std::min_element(samples.begin(), samples.end());
}

double BenchmarkResult::Max() const {
  return samples.empty() ? 0.0 : *std::max_element(samples.begin(), samples.end());
}

double BenchmarkResult::FractionAbove(double ms) const {
  if (samples.empty()) return 0.0;
  auto n = std::count_if(samples.begin(), samples.end(),
                         [ms](double s) { return s > ms; });
  return static_cast<double>(n) / static_cast<double>(samples.size());
}

namespace {

void Measure(CardInterface& card, SimClock& clock, const BenchmarkSpec& spec,
             BenchmarkResult& result) {
  const Bytes command = SerializeCommand(spec.command);
  result.command_length = command.size();
  for (int i = 0; i < spec.repetitions; ++i) {
    const double sent = clock.NowMs();
    Bytes rsp;
    try {
      rsp = card.Transmit(command);
    } catch (const CardRemoved& e) {
      throw BenchmarkError(std::string("card lost during benchmark: ") + e.what());
    }
    const double delay = clock.NowMs() - sent;
    if (rsp.size() < 2 || rsp[rsp.size() - 2] != 0x90 || rsp.back() != 0x00) {
      throw BenchmarkError("benchmark command answered " + ToHex(rsp));
    }
    result.response_length = rsp.size();
    result.samples.push_back(delay);
    result.histogram.Add(delay);
  }
}

}  // namespace

BenchmarkResult RunBenchmark(const BenchmarkSpec& spec, SeConfig se_config) {
  if (spec.repetitions <= 0) {
    throw BenchmarkError("repetitions must be positive");
  }
  BenchmarkResult result{Histogram(spec.layout), {}, 0, 0};
  result.samples.reserve(static_cast<size_t>(spec.repetitions));
  SessionBroker broker(std::move(se_config));
  VirtualClock clock;
  const LatencyModel model{spec.path, spec.params};

  switch (spec.path) {
    case AccessPath::kDirectExternal: {
      broker.WithSe([](SecureElement& se) { se.OpenChannel(Origin::kContactless); });
      DirectCard card(broker, Origin::kContactless, clock, model, spec.seed);
      Measure(card, clock, spec, result);
      break;
    }
    case AccessPath::kDirectInternal:
    case AccessPath::kInstant: {
      broker.WithSe([](SecureElement& se) { se.OpenChannel(Origin::kInternal); });
      DirectCard card(broker, Origin::kInternal, clock, model, spec.seed);
      Measure(card, clock, spec, result);
      break;
    }
    case AccessPath::kRelayWifi:
    case AccessPath::kRelayInternet: {
      LocalSeChannel channel(broker);
      RelayRig rig(channel, RelayAppConfig{}, clock,
                   EmulatorConfig{model, spec.seed, std::nullopt},
                   Transport::kPipe);
      if (!rig.emulator().ActivateField()) {
        throw BenchmarkError("relay session refused: " +
                             rig.emulator().last_error_text());
      }
      Measure(rig.emulator(), clock, spec, result);
      rig.emulator().DeactivateField();
      rig.Shutdown();
      break;
    }
  }
  return result;
}

}  // namespace relaysim
