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

#include "advscope/pipeline.h"

#include <cstring>
#include <sstream>
#include <string>

namespace advscope {

ExtractedReports ExtractAdvReports(std::span<const CaptureRecord> records,
                                   DecodeMode mode) {
  ExtractedReports out;
  for (size_t i = 0; i < records.size(); ++i) {
    const CaptureRecord& record = records[i];
    if (record.kind != PacketKind::kEvent) {
      continue;
    }
    auto packet = ParseHciEvent(record.payload);
    if (!packet.ok()) {
      Error error = packet.error();
      error.message = "record " + std::to_string(i) + ": " + error.message;
      out.issues.push_back(std::move(error));
      continue;
    }
    if (packet->event_code != kLeMetaEventCode || packet->params.empty() ||
        packet->params[0] != kLeAdvertisingReportSubevent) {
      continue;
    }
    auto event = ParseLeAdvReport(*packet, mode);
    if (!event.ok()) {
      Error error = event.error();
      error.message = "record " + std::to_string(i) + ": " + error.message;
      out.issues.push_back(std::move(error));
      continue;
    }
    const size_t count = event->reports.size();
    for (size_t r = 0; r < count; ++r) {
      out.reports.push_back(DecodedReport{record.timestamp_us, i, r, count,
                                          std::move(event->reports[r])});
    }
  }
  return out;
}

Result<std::vector<CaptureRecord>> TraceToRecords(
    std::span<const TimedReport> trace) {
  std::vector<CaptureRecord> records;
  records.reserve(trace.size());
  for (const TimedReport& timed : trace) {
    auto bytes = SerializeAdvReportEvent(AdvReportEvent{{timed.report}});
    if (!bytes.ok()) {
      return bytes.error();
    }
    CaptureRecord record;
    record.timestamp_us = timed.timestamp_us;
    record.direction = Direction::kControllerToHost;
    record.kind = PacketKind::kEvent;
    record.payload = std::move(*bytes);
    records.push_back(std::move(record));
  }
  return records;
}

std::optional<CaptureFormat> DetectCaptureFormat(ByteSpan prefix) {
  if (prefix.size() >= 8 && std::memcmp(prefix.data(), kBtsnoopMagic, 8) == 0) {
    return CaptureFormat::kBtsnoop;
  }
  if (LooksLikePklg(prefix)) {
    return CaptureFormat::kPklg;
  }
  if (!prefix.empty() && prefix[0] >= 0x01 && prefix[0] <= 0x04) {
    return CaptureFormat::kH4;
  }
  return std::nullopt;
}

Result<CaptureReadResult> ReadCapture(ByteSpan bytes, CaptureFormat format,
                                      ReadOptions options) {
  std::istringstream in(
      std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  switch (format) {
    case CaptureFormat::kBtsnoop:
      return ReadBtsnoop(in, options);
    case CaptureFormat::kPklg:
      return ReadPklg(in, options);
    case CaptureFormat::kH4:
      return ReadH4Stream(in, options);
  }
  return MakeError(ErrorCode::kInvalidArgument, "unknown capture format");
}

}  // namespace advscope
