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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace relaysim {

// Fixed-width bins starting at 0 ms; the last bin also takes everything at
// or above overflow_threshold_ms(). The default is 160 bins of 50 ms, so
// the last bin holds [7950, inf) including all samples above 8000 ms.
struct HistogramLayout {
  double bin_width_ms = 50.0;
  int bin_count = 160;

  double overflow_threshold_ms() const {
    return bin_width_ms * (bin_count - 1);
  }
  bool operator==(const HistogramLayout&) const = default;
};

class Histogram {
 public:
  explicit Histogram(HistogramLayout layout = {});

  void Add(double ms);
  size_t BinIndex(double ms) const;

  const HistogramLayout& layout() const { return layout_; }
  const std::vector<uint64_t>& counts() const { return counts_; }
  uint64_t total() const { return total_; }

  bool operator==(const Histogram&) const = default;

  // Rebuilds a histogram from counts; total is their sum.
  static Histogram FromCounts(HistogramLayout layout,
                              std::vector<uint64_t> counts);

 private:
  HistogramLayout layout_;
  std::vector<uint64_t> counts_;
  uint64_t total_ = 0;
};

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Header `bin_start_ms,bin_end_ms,count`, one row per bin; the last row has
// `overflow` in place of its end.
std::string HistogramToCsv(const Histogram& h);
Histogram HistogramFromCsv(std::string_view csv);

// Horizontal bar chart of the non-empty range, for a terminal.
std::string RenderAscii(const Histogram& h, int width = 60);

}  // namespace relaysim
