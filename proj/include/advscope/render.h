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

// Text and JSON-lines rendering for decoded reports, session statistics and
// scan results.

#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "json.hpp"

#include "advscope/adv_analytics.h"
#include "advscope/fw_sigscan.h"
#include "advscope/hci_codec.h"
#include "advscope/pipeline.h"

namespace advscope {

// "2020-04-15 17:19:28.281000" (UTC).
std::string FormatTimestamp(uint64_t timestamp_us);

std::string ScanModeName(uint8_t scan_mode);

// "Scan Mode: Normal Scan Mode - Channel 37 - Antenna: BT - Connectable
// Undirected Advertising (ADV_IND)". In standard mode the channel is always
// 37 and the vendor fields read as zero.
std::string DescribeEventType(const EnhancedEventType& event_type);

// "Channel 37", or "Channel ?(index 5)" for unmapped indices.
std::string ChannelLabel(const EnhancedEventType& event_type);

// Two lines (summary and event-type detail), newline terminated.
std::string RenderReportPretty(const DecodedReport& decoded);
nlohmann::json RenderReportJson(const DecodedReport& decoded);

nlohmann::json RenderCellJson(const DeviceAddress& address, int channel,
                              const RssiSamples& samples,
                              const ChannelEvidence& evidence,
                              bool channel_blacklisted);

std::string RenderStatsPretty(const SessionStats& stats);
std::string RenderInterferencePretty(const InterferenceReport& report);
nlohmann::json RenderInterferenceJson(const InterferenceReport& report);

nlohmann::json RenderMatchJson(const SignatureMatch& match);
std::string RenderMatchPretty(const SignatureMatch& match);

}  // namespace advscope
