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

// Bit-exact codec for HCI events, LE Advertising Reports (subevent 0x02), the
// Broadcom/Cypress enhanced event-type byte, and advertising-data structures.

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advscope/result.h"

namespace advscope {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;

inline constexpr uint8_t kLeMetaEventCode = 0x3E;
inline constexpr uint8_t kLeAdvertisingReportSubevent = 0x02;
inline constexpr size_t kMaxReportsPerEvent = 25;
inline constexpr size_t kMaxAdvDataLength = 31;
inline constexpr uint8_t kAdTypeTxPowerLevel = 0x0A;

// How the event-type byte of an advertising report is interpreted.
//
// kStandard follows the Bluetooth Core definition (values 0x00-0x04 only) and
// reports every advertisement on channel 37, which is what a host sees when
// the controller does not fill in the vendor bits. kEnhanced splits the byte
// into the vendor channel/antenna/scan-mode fields.
enum class DecodeMode { kStandard, kEnhanced };

// Values above kScanRsp are legal enumerator values and stand for Unknown(n).
enum class PduType : uint8_t {
  kAdvInd = 0,
  kAdvDirectInd = 1,
  kAdvScanInd = 2,
  kAdvNonconnInd = 3,
  kScanRsp = 4,
};

inline bool IsKnownPdu(PduType pdu) {
  return static_cast<uint8_t>(pdu) <= static_cast<uint8_t>(PduType::kScanRsp);
}

// "ADV_IND", ..., or "Unknown(0x13)".
std::string PduShortName(PduType pdu);
// "Connectable Undirected Advertising (ADV_IND)", ...
std::string PduLongName(PduType pdu);

// Decoded view of one event-type byte. `raw` is authoritative: the channel
// (bits 4-6) and scan-mode (bits 3-4) fields share bit 4, so the fields
// cannot be stored independently.
struct EnhancedEventType {
  uint8_t raw = 0;
  DecodeMode mode = DecodeMode::kStandard;
  PduType pdu_type = PduType::kAdvInd;
  uint8_t channel_index = 0;  // 0..7; 0..2 are channels 37..39
  bool antenna = false;       // false renders as "Antenna: BT"
  uint8_t scan_mode = 0;      // 0..3; 0 is "Normal Scan Mode"
  // Standard mode only: raw is outside the values the Core spec defines.
  bool raw_nonstandard = false;

  bool channel_mapped() const { return channel_index <= 2; }
  // 37 + channel_index for indices 0..2, nullopt for indices 3..7.
  std::optional<int> ble_channel() const;

  bool operator==(const EnhancedEventType&) const = default;
};

EnhancedEventType DecodeEventType(uint8_t raw, DecodeMode mode);

// Builds an event-type byte. Only the low scan-mode bit is free: the high
// scan-mode bit is the low channel bit, so decoding the result yields
// scan_mode == ((channel_index & 1) << 1) | scan_mode_low.
Result<uint8_t> ComposeEventType(uint8_t pdu, uint8_t channel_index,
                                 uint8_t scan_mode_low, bool antenna);

enum class AddressType : uint8_t {
  kPublic = 0,
  kRandom = 1,
  kPublicIdentity = 2,
  kRandomIdentity = 3,
};

std::string AddressTypeName(AddressType type);

// Six-byte device address, most significant byte first. The wire order is
// the reverse.
struct DeviceAddress {
  std::array<uint8_t, 6> bytes{};

  // "CA:FE:BA:BE:13:37"
  std::string ToString() const;
  static Result<DeviceAddress> Parse(std::string_view text);

  auto operator<=>(const DeviceAddress&) const = default;
};

struct AdvReport {
  EnhancedEventType event_type;
  AddressType address_type = AddressType::kPublic;
  DeviceAddress address;
  Bytes adv_data;  // at most 31 bytes
  int8_t rssi_dbm = 0;

  size_t WireSize() const { return 10 + adv_data.size(); }

  bool operator==(const AdvReport&) const = default;
};

struct AdvReportEvent {
  std::vector<AdvReport> reports;  // 1..25

  bool operator==(const AdvReportEvent&) const = default;
};

struct HciEventPacket {
  uint8_t event_code = 0;
  uint8_t param_len = 0;
  Bytes params;

  bool operator==(const HciEventPacket&) const = default;
};

struct AdStructure {
  uint8_t ad_type = 0;
  Bytes value;

  bool operator==(const AdStructure&) const = default;
};

// Parses one complete HCI event (no H4 indicator). Trailing bytes beyond
// param_len are rejected.
Result<HciEventPacket> ParseHciEvent(ByteSpan bytes);
Bytes SerializeHciEvent(const HciEventPacket& packet);

// Decodes an LE Meta event carrying LE Advertising Reports. Reports are laid
// out back to back: event type, address type, address (LSB first), data
// length, data, RSSI.
Result<AdvReportEvent> ParseLeAdvReport(const HciEventPacket& packet,
                                        DecodeMode mode);

// Returns the full HCI event bytes (event code, length, params). Event-type
// bytes are written from `raw`; the decoded fields are ignored.
Result<Bytes> SerializeAdvReportEvent(const AdvReportEvent& event);

Result<std::vector<AdStructure>> ParseAdvData(ByteSpan data);
Bytes SerializeAdvData(std::span<const AdStructure> structures);

// Signed dBm value of the first TX Power Level (0x0A) structure, if any.
Result<std::optional<int8_t>> ExtractTxPower(
    std::span<const AdStructure> structures);

// Upper-case hex without separators, e.g. "3E1E0201".
std::string ToHex(ByteSpan bytes);
// Accepts upper/lower case, ignores whitespace and an optional 0x prefix.
Result<Bytes> FromHex(std::string_view text);

}  // namespace advscope
