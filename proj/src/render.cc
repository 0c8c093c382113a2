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

#include "advscope/render.h"

#include <cstdio>
#include <ctime>
#include <sstream>

namespace advscope {

namespace {

std::string Fixed(double value, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

std::string Hex8(uint64_t value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "0x%08llX",
                static_cast<unsigned long long>(value));
  return buf;
}

nlohmann::json OptionalJson(const std::optional<double>& value) {
  return value.has_value() ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

}  // namespace

std::string FormatTimestamp(uint64_t timestamp_us) {
  const std::time_t seconds = static_cast<std::time_t>(timestamp_us / 1000000);
  std::tm tm{};
  gmtime_r(&seconds, &tm);
  char date[32];
  std::strftime(date, sizeof(date), "%Y-%m-%d %H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof(out), "%s.%06llu", date,
                static_cast<unsigned long long>(timestamp_us % 1000000));
  return out;
}

std::string ScanModeName(uint8_t scan_mode) {
  if (scan_mode == 0) {
    return "Normal Scan Mode";
  }
  return "Scan Mode " + std::to_string(scan_mode);
}

std::string ChannelLabel(const EnhancedEventType& event_type) {
  if (auto channel = event_type.ble_channel()) {
    return "Channel " + std::to_string(*channel);
  }
  return "Channel ?(index " + std::to_string(event_type.channel_index) + ")";
}

std::string DescribeEventType(const EnhancedEventType& event_type) {
  std::string out = "Scan Mode: " + ScanModeName(event_type.scan_mode) +
                    " - " + ChannelLabel(event_type) + " - Antenna: " +
                    (event_type.antenna ? "Other" : "BT") + " - " +
                    PduLongName(event_type.pdu_type);
  return out;
}

std::string RenderReportPretty(const DecodedReport& decoded) {
  const AdvReport& report = decoded.report;
  std::ostringstream out;
  out << FormatTimestamp(decoded.timestamp_us) << "  LE - Advertising Report - "
      << decoded.report_count
      << (decoded.report_count == 1 ? " Report - " : " Reports - ")
      << AddressTypeName(report.address_type) << " - "
      << report.address.ToString() << " - "
      << static_cast<int>(report.rssi_dbm) << " dBm - "
      << ChannelLabel(report.event_type) << " - "
      << PduShortName(report.event_type.pdu_type) << "\n";
  char raw[8];
  std::snprintf(raw, sizeof(raw), "0x%02X", report.event_type.raw);
  out << "    Event Type: " << DescribeEventType(report.event_type) << " ["
      << raw;
  if (report.event_type.raw_nonstandard) {
    out << ", nonstandard";
  }
  out << "]\n";
  return out.str();
}

nlohmann::json RenderReportJson(const DecodedReport& decoded) {
  const AdvReport& report = decoded.report;
  const EnhancedEventType& type = report.event_type;
  nlohmann::json j;
  j["type"] = "adv_report";
  j["timestamp_us"] = decoded.timestamp_us;
  j["record"] = decoded.record_index;
  j["report"] = decoded.report_index;
  j["address"] = report.address.ToString();
  j["address_type"] = AddressTypeName(report.address_type);
  j["event_type_raw"] = type.raw;
  j["mode"] = type.mode == DecodeMode::kEnhanced ? "enhanced" : "standard";
  j["pdu"] = PduShortName(type.pdu_type);
  if (auto channel = type.ble_channel()) {
    j["channel"] = *channel;
  } else {
    j["channel"] = nullptr;
  }
  j["channel_index"] = type.channel_index;
  j["antenna"] = type.antenna;
  j["scan_mode"] = type.scan_mode;
  j["raw_nonstandard"] = type.raw_nonstandard;
  j["rssi_dbm"] = report.rssi_dbm;
  j["adv_data"] = ToHex(report.adv_data);
  j["tx_power_dbm"] = nullptr;
  if (auto structures = ParseAdvData(report.adv_data); structures.ok()) {
    if (auto tx = ExtractTxPower(*structures); tx.ok() && tx->has_value()) {
      j["tx_power_dbm"] = **tx;
    }
  }
  return j;
}

nlohmann::json RenderCellJson(const DeviceAddress& address, int channel,
                              const RssiSamples& samples,
                              const ChannelEvidence& evidence,
                              bool channel_blacklisted) {
  nlohmann::json j;
  j["type"] = "cell";
  j["address"] = address.ToString();
  j["channel"] = channel;
  j["count"] = samples.count();
  j["mean"] = samples.Mean();
  j["median"] = samples.Median();
  j["stddev"] = samples.StdDev();
  j["blacklisted"] = channel_blacklisted;
  j["evidence"] = {
      {"pooled_samples", evidence.samples},
      {"pooled_median_dbm", OptionalJson(evidence.pooled_median_dbm)},
      {"deficit_db", OptionalJson(evidence.deficit_db)},
      {"eligible", evidence.eligible},
  };
  return j;
}

std::string RenderStatsPretty(const SessionStats& stats) {
  std::ostringstream out;
  for (const auto& [address, device] : stats.devices()) {
    out << "device " << address.ToString() << " reports=" << device.total_reports
        << " unknown_channel=" << device.unknown_channel_count;
    if (device.advertised_tx_power_dbm.has_value()) {
      out << " tx_power=" << static_cast<int>(*device.advertised_tx_power_dbm)
          << " dBm";
    }
    out << "\n";
    for (const auto& [channel, samples] : device.channels) {
      out << "  channel " << channel << " count=" << samples.count()
          << " mean=" << Fixed(samples.Mean())
          << " median=" << Fixed(samples.Median())
          << " stddev=" << Fixed(samples.StdDev()) << "\n";
    }
  }
  return out.str();
}

std::string RenderInterferencePretty(const InterferenceReport& report) {
  std::ostringstream out;
  if (report.blacklisted.empty()) {
    out << "blacklist: none\n";
  }
  for (const ChannelEvidence& evidence : report.evidence) {
    if (evidence.blacklisted) {
      out << "blacklist: channel " << evidence.channel << " (median "
          << Fixed(*evidence.pooled_median_dbm, 1) << " dBm, "
          << Fixed(*evidence.deficit_db, 1)
          << " dB below best other channel)\n";
    }
  }
  for (const ChannelEvidence& evidence : report.evidence) {
    out << "  evidence channel " << evidence.channel
        << " samples=" << evidence.samples << " median=";
    out << (evidence.pooled_median_dbm
                ? Fixed(*evidence.pooled_median_dbm, 1)
                : std::string("-"));
    out << " deficit=";
    out << (evidence.deficit_db ? Fixed(*evidence.deficit_db, 1)
                                : std::string("-"));
    out << (evidence.eligible ? " eligible" : " insufficient") << "\n";
  }
  return out.str();
}

nlohmann::json RenderInterferenceJson(const InterferenceReport& report) {
  nlohmann::json j;
  j["type"] = "blacklist";
  j["channels"] = nlohmann::json::array();
  for (int channel : report.blacklisted) {
    j["channels"].push_back(channel);
  }
  j["evidence"] = nlohmann::json::array();
  for (const ChannelEvidence& evidence : report.evidence) {
    j["evidence"].push_back({
        {"channel", evidence.channel},
        {"samples", evidence.samples},
        {"eligible", evidence.eligible},
        {"pooled_median_dbm", OptionalJson(evidence.pooled_median_dbm)},
        {"deficit_db", OptionalJson(evidence.deficit_db)},
        {"blacklisted", evidence.blacklisted},
    });
  }
  return j;
}

nlohmann::json RenderMatchJson(const SignatureMatch& match) {
  return {
      {"type", "match"},
      {"name", match.signature_name},
      {"offset", Hex8(match.offset)},
      {"context_offset", Hex8(match.context_offset)},
      {"context", ToHex(match.context)},
  };
}

std::string RenderMatchPretty(const SignatureMatch& match) {
  return match.signature_name + " offset=" + Hex8(match.offset) +
         " context@" + Hex8(match.context_offset) + "=" +
         ToHex(match.context);
}

}  // namespace advscope
