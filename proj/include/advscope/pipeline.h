// Copyright 2026 The advscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

// Glue between capture containers and advertising reports.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "advscope/adv_analytics.h"
#include "advscope/capture_io.h"
#include "advscope/hci_codec.h"
#include "advscope/result.h"

namespace advscope {

struct DecodedReport {
  uint64_t timestamp_us = 0;
  size_t record_index = 0;
  size_t report_index = 0;   // position within its HCI event
  size_t report_count = 0;   // reports in that HCI event
  AdvReport report;
};

struct ExtractedReports {
  std::vector<DecodedReport> reports;
  // Event records that could not be decoded; other record kinds and
  // non-advertising events are ignored, not counted.
  std::vector<Error> issues;
};

ExtractedReports ExtractAdvReports(std::span<const CaptureRecord> records,
                                   DecodeMode mode);

// One HCI event record per report, direction controller to host.
Result<std::vector<CaptureRecord>> TraceToRecords(
    std::span<const TimedReport> trace);

// btsnoop by magic, pklg by a plausible first record, H4 by a valid
// indicator byte; nullopt when nothing fits.
std::optional<CaptureFormat> DetectCaptureFormat(ByteSpan prefix);

Result<CaptureReadResult> ReadCapture(ByteSpan bytes, CaptureFormat format,
                                      ReadOptions options);

}  // namespace advscope
