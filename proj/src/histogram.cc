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

#include "relaysim/histogram.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace relaysim {

namespace {

std::string Num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseNum(std::string_view text) {
  double v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw CsvError("bad number '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> SplitCsvLine(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

Histogram::Histogram(HistogramLayout layout) : layout_(layout) {
  if (!(layout_.bin_width_ms > 0) || layout_.bin_count < 1) {
    throw std::invalid_argument("histogram needs positive bin width and count");
  }
  counts_.assign(static_cast<size_t>(layout_.bin_count), 0);
}

size_t Histogram::BinIndex(double ms) const {
  const size_t last = counts_.size() - 1;
  if (!(ms > 0)) return 0;
  if (ms >= layout_.overflow_threshold_ms()) return last;
  const double w = layout_.bin_width_ms;
  auto idx = static_cast<size_t>(std::floor(ms / w));
  // Division rounding must not move a value across a bin edge.
  if (static_cast<double>(idx + 1) * w <= ms) ++idx;
  if (idx > 0 && static_cast<double>(idx) * w > ms) --idx;
  return std::min(idx, last);
}

void Histogram::Add(double ms) {
  ++counts_[BinIndex(ms)];
  ++total_;
}

Histogram Histogram::FromCounts(HistogramLayout layout,
                                std::vector<uint64_t> counts) {
  Histogram h(layout);
  if (counts.size() != h.counts_.size()) {
    throw std::invalid_argument("count vector does not match layout");
  }
  h.counts_ = std::move(counts);
  h.total_ = 0;
  for (uint64_t c : h.counts_) h.total_ += c;
  return h;
}

std::string HistogramToCsv(const Histogram& h) {
  std::string out = "bin_start_ms,bin_end_ms,count\n";
  const double w = h.layout().bin_width_ms;
  const size_t n = h.counts().size();
  for (size_t i = 0; i < n; ++i) {
    out += Num(static_cast<double>(i) * w) + ",";
    out += i + 1 == n ? std::string("overflow")
                      : Num(static_cast<double>(i + 1) * w);
    out += "," + std::to_string(h.counts()[i]) + "\n";
  }
  return out;
}

Histogram HistogramFromCsv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != "bin_start_ms,bin_end_ms,count") {
    throw CsvError("missing CSV header");
  }
  std::vector<uint64_t> counts;
  double width = 0;
  double prev_end = 0;
  bool saw_overflow = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (saw_overflow) throw CsvError("rows after overflow row");
    auto f = SplitCsvLine(line);
    if (f.size() != 3) throw CsvError("expected 3 fields: " + line);
    const double start = ParseNum(f[0]);
    const double expected = counts.empty() ? 0.0 : prev_end;
    if (std::fabs(start - expected) > 1e-9 * std::max(1.0, expected)) {
      throw CsvError("bins not contiguous at " + line);
    }
    if (f[1] == "overflow") {
      saw_overflow = true;
      if (counts.empty()) width = start > 0 ? start : 1.0;
    } else {
      const double end = ParseNum(f[1]);
      if (counts.empty()) width = end - start;
      if (!(width > 0) ||
          std::fabs((end - start) - width) > 1e-9 * std::max(1.0, end)) {
        throw CsvError("non-uniform bin width at " + line);
      }
      prev_end = end;
    }
    uint64_t count = 0;
    auto res = std::from_chars(f[2].data(), f[2].data() + f[2].size(), count);
    if (res.ec != std::errc() || res.ptr != f[2].data() + f[2].size()) {
      throw CsvError("bad count in " + line);
    }
    counts.push_back(count);
  }
  if (!saw_overflow) throw CsvError("missing overflow row");
  HistogramLayout layout{width, static_cast<int>(counts.size())};
  return Histogram::FromCounts(layout, std::move(counts));
}

std::string RenderAscii(const Histogram& h, int width) {
  const auto& c = h.counts();
  size_t first = c.size(), last = 0;
  uint64_t peak = 0;
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    first = std::min(first, i);
    last = i;
    peak = std::max(peak, c[i]);
  }
  if (peak == 0) return "(empty histogram)\n";
  std::ostringstream out;
  const double w = h.layout().bin_width_ms;
  for (size_t i = first; i <= last; ++i) {
    char label[48];
    if (i + 1 == c.size()) {
      std::snprintf(label, sizeof(label), "%9.1f+      ", i * w);
    } else {
      std::snprintf(label, sizeof(label), "%9.1f-%-7.1f", i * w, (i + 1) * w);
    }
    const int bar = static_cast<int>(
        std::llround(static_cast<double>(c[i]) * width / static_cast<double>(peak)));
    out << label << " |" << std::string(static_cast<size_t>(bar), '#') << " "
        << c[i] << "\n";
  }
  return out.str();
}

}  // namespace relaysim
