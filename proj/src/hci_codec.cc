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

#include "advscope/hci_codec.h"

#include <cctype>
#include <cstdio>

namespace advscope {

namespace {

std::string HexByte(uint8_t value) {
  char buf[3];
  std::snprintf(buf, sizeof(buf), "%02X", value);
  return buf;
}

int HexDigit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string PduShortName(PduType pdu) {
  switch (pdu) {
    case PduType::kAdvInd:
      return "ADV_IND";
    case PduType::kAdvDirectInd:
      return "ADV_DIRECT_IND";
    case PduType::kAdvScanInd:
      return "ADV_SCAN_IND";
    case PduType::kAdvNonconnInd:
      return "ADV_NONCONN_IND";
    case PduType::kScanRsp:
      return "SCAN_RSP";
  }
  return "Unknown(0x" + HexByte(static_cast<uint8_t>(pdu)) + ")";
}

std::string PduLongName(PduType pdu) {
  switch (pdu) {
    case PduType::kAdvInd:
      return "Connectable Undirected Advertising (ADV_IND)";
    case PduType::kAdvDirectInd:
      return "Connectable Directed Advertising (ADV_DIRECT_IND)";
    case PduType::kAdvScanInd:
      return "Scannable Undirected Advertising (ADV_SCAN_IND)";
    case PduType::kAdvNonconnInd:
      return "Non Connectable Undirected Advertising (ADV_NONCONN_IND)";
    case PduType::kScanRsp:
      return "Scan Response (SCAN_RSP)";
  }
  return PduShortName(pdu);
}

std::optional<int> EnhancedEventType::ble_channel() const {
  if (!channel_mapped()) {
    return std::nullopt;
  }
  return 37 + channel_index;
}

EnhancedEventType DecodeEventType(uint8_t raw, DecodeMode mode) {
  EnhancedEventType type;
  type.raw = raw;
  type.mode = mode;
  if (mode == DecodeMode::kEnhanced) {
    type.channel_index = (raw >> 4) & 7;
    type.antenna = (raw & 0x80) != 0;
    type.scan_mode = (raw >> 3) & 3;
    type.pdu_type = static_cast<PduType>(raw & 0x07);
    return type;
  }
  type.pdu_type = static_cast<PduType>(raw);
  type.raw_nonstandard = raw > static_cast<uint8_t>(PduType::kScanRsp);
  return type;
}

Result<uint8_t> ComposeEventType(uint8_t pdu, uint8_t channel_index,
                                 uint8_t scan_mode_low, bool antenna) {
  if (pdu > 7) {
    return MakeError(ErrorCode::kOutOfRange, "pdu must be 0..7");
  }
  if (channel_index > 7) {
    return MakeError(ErrorCode::kOutOfRange, "channel index must be 0..7");
  }
  if (scan_mode_low > 1) {
    return MakeError(ErrorCode::kOutOfRange, "scan mode low bit must be 0..1");
  }
  return static_cast<uint8_t>((antenna ? 0x80 : 0x00) | (channel_index << 4) |
                              (scan_mode_low << 3) | pdu);
}

std::string AddressTypeName(AddressType type) {
  switch (type) {
    case AddressType::kPublic:
      return "Public";
    case AddressType::kRandom:
      return "Random";
    case AddressType::kPublicIdentity:
      return "Public Identity";
    case AddressType::kRandomIdentity:
      return "Random Identity";
  }
  return "Unknown(0x" + HexByte(static_cast<uint8_t>(type)) + ")";
}

std::string DeviceAddress::ToString() const {
  std::string out;
  out.reserve(17);
  for (size_t i = 0; i < bytes.size(); ++i) {
    if (i != 0) out += ':';
    out += HexByte(bytes[i]);
  }
  return out;
}

Result<DeviceAddress> DeviceAddress::Parse(std::string_view text) {
  if (text.size() != 17) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "address must look like AA:BB:CC:DD:EE:FF");
  }
  DeviceAddress address;
  for (size_t i = 0; i < 6; ++i) {
    const size_t pos = i * 3;
    if (i != 0 && text[pos - 1] != ':') {
      return MakeError(ErrorCode::kInvalidArgument, "expected ':' separator",
                       pos - 1);
    }
    const int hi = HexDigit(text[pos]);
    const int lo = HexDigit(text[pos + 1]);
    if (hi < 0 || lo < 0) {
      return MakeError(ErrorCode::kInvalidArgument, "bad hex digit", pos);
    }
    address.bytes[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  return address;
}

Result<HciEventPacket> ParseHciEvent(ByteSpan bytes) {
  if (bytes.size() < 2) {
    return MakeError(ErrorCode::kTooShort,
                     "HCI event needs at least 2 header bytes", 0);
  }
  HciEventPacket packet;
  packet.event_code = bytes[0];
  packet.param_len = bytes[1];
  const size_t available = bytes.size() - 2;
  if (available != packet.param_len) {
    return MakeError(ErrorCode::kLengthMismatch,
                     "param_len " + std::to_string(packet.param_len) +
                         " but " + std::to_string(available) +
                         " parameter bytes present",
                     1);
  }
  packet.params.assign(bytes.begin() + 2, bytes.end());
  return packet;
}

Bytes SerializeHciEvent(const HciEventPacket& packet) {
  Bytes out;
  out.reserve(2 + packet.params.size());
  out.push_back(packet.event_code);
  out.push_back(packet.param_len);
  out.insert(out.end(), packet.params.begin(), packet.params.end());
  return out;
}

Result<AdvReportEvent> ParseLeAdvReport(const HciEventPacket& packet,
                                        DecodeMode mode) {
  if (packet.event_code != kLeMetaEventCode) {
    return MakeError(ErrorCode::kWrongEventCode,
                     "expected LE Meta event 0x3E, got 0x" +
                         HexByte(packet.event_code),
                     0);
  }
  // Offsets in errors are relative to the start of the event (code byte).
  const ByteSpan params(packet.params.data(),
                        std::min<size_t>(packet.params.size(),
                                         packet.param_len));
  if (params.empty() || params[0] != kLeAdvertisingReportSubevent) {
    return MakeError(ErrorCode::kWrongSubevent,
                     params.empty() ? "missing subevent code"
                                    : "expected subevent 0x02, got 0x" +
                                          HexByte(params[0]),
                     2);
  }
  if (params.size() < 2) {
    return MakeError(ErrorCode::kTruncated, "missing Num_Reports", 3);
  }
  const uint8_t num_reports = params[1];
  if (num_reports == 0) {
    return MakeError(ErrorCode::kNumReportsZero, "Num_Reports is 0", 3);
  }

  AdvReportEvent event;
  event.reports.reserve(num_reports);
  size_t pos = 2;
  for (size_t i = 0; i < num_reports; ++i) {
    if (params.size() - pos < 9) {
      return MakeError(ErrorCode::kTruncated,
                       "report " + std::to_string(i) + " header truncated",
                       pos + 2);
    }
    AdvReport report;
    report.event_type = DecodeEventType(params[pos], mode);
    report.address_type = static_cast<AddressType>(params[pos + 1]);
    for (size_t b = 0; b < 6; ++b) {
      report.address.bytes[5 - b] = params[pos + 2 + b];
    }
    const uint8_t data_len = params[pos + 8];
    pos += 9;
    if (data_len > kMaxAdvDataLength) {
      return MakeError(ErrorCode::kDataTooLong,
                       "report " + std::to_string(i) + " data length " +
                           std::to_string(data_len) + " exceeds 31",
                       pos + 1);
    }
    if (params.size() - pos < static_cast<size_t>(data_len) + 1) {
      return MakeError(ErrorCode::kTruncated,
                       "report " + std::to_string(i) + " data/RSSI truncated",
                       pos + 2);
    }
    report.adv_data.assign(params.begin() + pos,
                           params.begin() + pos + data_len);
    pos += data_len;
    report.rssi_dbm = static_cast<int8_t>(params[pos]);
    ++pos;
    event.reports.push_back(std::move(report));
  }
  if (pos != params.size()) {
    return MakeError(ErrorCode::kLengthMismatch,
                     std::to_string(params.size() - pos) +
                         " trailing bytes after last report",
                     pos + 2);
  }
  return event;
}

Result<Bytes> SerializeAdvReportEvent(const AdvReportEvent& event) {
  if (event.reports.empty()) {
    return MakeError(ErrorCode::kNumReportsZero, "no reports to serialize");
  }
  if (event.reports.size() > kMaxReportsPerEvent) {
    return MakeError(ErrorCode::kTooManyReports,
                     std::to_string(event.reports.size()) +
                         " reports exceed the limit of 25");
  }
  size_t param_len = 2;
  for (const AdvReport& report : event.reports) {
    if (report.adv_data.size() > kMaxAdvDataLength) {
      return MakeError(ErrorCode::kDataTooLong,
                       "advertising data of " +
                           std::to_string(report.adv_data.size()) +
                           " bytes exceeds 31");
    }
    param_len += report.WireSize();
  }
  if (param_len > 255) {
    return MakeError(ErrorCode::kParamsOverflow,
                     "parameter length " + std::to_string(param_len) +
                         " exceeds 255");
  }

  Bytes out;
  out.reserve(2 + param_len);
  out.push_back(kLeMetaEventCode);
  out.push_back(static_cast<uint8_t>(param_len));
  out.push_back(kLeAdvertisingReportSubevent);
  out.push_back(static_cast<uint8_t>(event.reports.size()));
  for (const AdvReport& report : event.reports) {
    out.push_back(report.event_type.raw);
    out.push_back(static_cast<uint8_t>(report.address_type));
    for (size_t b = 0; b < 6; ++b) {
      out.push_back(report.address.bytes[5 - b]);
    }
    out.push_back(static_cast<uint8_t>(report.adv_data.size()));
    out.insert(out.end(), report.adv_data.begin(), report.adv_data.end());
    out.push_back(static_cast<uint8_t>(report.rssi_dbm));
  }
  return out;
}

Result<std::vector<AdStructure>> ParseAdvData(ByteSpan data) {
  if (data.size() > kMaxAdvDataLength) {
    return MakeError(ErrorCode::kDataTooLong,
                     "advertising data of " + std::to_string(data.size()) +
                         " bytes exceeds 31");
  }
  std::vector<AdStructure> structures;
  size_t pos = 0;
  while (pos < data.size()) {
    const uint8_t length = data[pos];
    if (length == 0) {
      break;
    }
    if (data.size() - pos - 1 < length) {
      return MakeError(ErrorCode::kTruncated,
                       "AD structure declares " + std::to_string(length) +
                           " bytes, " + std::to_string(data.size() - pos - 1) +
                           " available",
                       pos);
    }
    AdStructure structure;
    structure.ad_type = data[pos + 1];
    structure.value.assign(data.begin() + pos + 2,
                           data.begin() + pos + 1 + length);
    structures.push_back(std::move(structure));
    pos += 1 + length;
  }
  return structures;
}

Bytes SerializeAdvData(std::span<const AdStructure> structures) {
  Bytes out;
  for (const AdStructure& structure : structures) {
    out.push_back(static_cast<uint8_t>(1 + structure.value.size()));
    out.push_back(structure.ad_type);
    out.insert(out.end(), structure.value.begin(), structure.value.end());
  }
  return out;
}

Result<std::optional<int8_t>> ExtractTxPower(
    std::span<const AdStructure> structures) {
  for (const AdStructure& structure : structures) {
    if (structure.ad_type != kAdTypeTxPowerLevel) {
      continue;
    }
    if (structure.value.size() != 1) {
      return MakeError(ErrorCode::kMalformedTxPower,
                       "TX Power Level value has " +
                           std::to_string(structure.value.size()) +
                           " bytes, expected 1");
    }
    return std::optional<int8_t>(static_cast<int8_t>(structure.value[0]));
  }
  return std::optional<int8_t>();
}

std::string ToHex(ByteSpan bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out += HexByte(b);
  }
  return out;
}

Result<Bytes> FromHex(std::string_view text) {
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
  }
  Bytes out;
  int pending = -1;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      continue;
    }
    const int digit = HexDigit(c);
    if (digit < 0) {
      return MakeError(ErrorCode::kInvalidArgument,
                       std::string("bad hex digit '") + c + "'", i);
    }
    if (pending < 0) {
      pending = digit;
    } else {
      out.push_back(static_cast<uint8_t>((pending << 4) | digit));
      pending = -1;
    }
  }
  if (pending >= 0) {
    return MakeError(ErrorCode::kInvalidArgument, "odd number of hex digits");
  }
  return out;
}

}  // namespace advscope
