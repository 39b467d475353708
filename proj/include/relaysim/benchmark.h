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

#include <stdexcept>
#include <vector>

#include "relaysim/apdu.h"
#include "relaysim/histogram.h"
#include "relaysim/latency.h"
#include "relaysim/secure_element.h"

namespace relaysim {

class BenchmarkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// SELECT of the card manager by AID; 13 bytes on the wire.
CommandApdu IsdSelectCommand();

struct BenchmarkSpec {
  AccessPath path = AccessPath::kDirectExternal;
  CommandApdu command = IsdSelectCommand();
  int repetitions = 5000;
  uint64_t seed = 0;
  HistogramLayout layout;
  LatencyParams params;
};

struct BenchmarkResult {
  Histogram histogram;
  // Reader-side round trip of every repetition, in order.
  std::vector<double> samples;
  size_t command_length = 0;
  size_t response_length = 0;

  double Median() const;
  double Mean() const;
  double Min() const;
  double Max() const;
  double FractionAbove(double ms) const;
};

// Measures `repetitions` command/response cycles over the chosen path on a
// virtual clock, so seeded runs are bit-identical. Throws BenchmarkError
// when the path cannot be set up or the card stops answering 9000.
BenchmarkResult RunBenchmark(const BenchmarkSpec& spec, SeConfig se_config = {});

}  // namespace relaysim
