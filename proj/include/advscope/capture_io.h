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

// Readers and writers for HCI capture containers: btsnoop (H4 datalink),
// Apple PacketLogger (.pklg) and raw H4 byte streams.

#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "advscope/hci_codec.h"
#include "advscope/result.h"

namespace advscope {

enum class Direction { kHostToController, kControllerToHost, kUnknown };

// Values other than the four named kinds are Unknown(n) and carry the H4
// indicator (or pklg type) they were read with.
enum class PacketKind : uint8_t {
  kCommand = 0x01,
  kAclData = 0x02,
  kScoData = 0x03,
  kEvent = 0x04,
};

std::string_view DirectionName(Direction direction);
std::string PacketKindName(PacketKind kind);

struct CaptureRecord {
  uint64_t timestamp_us = 0;  // microseconds since the Unix epoch
  Direction direction = Direction::kUnknown;
  PacketKind kind = PacketKind::kEvent;
  Bytes payload;  // HCI packet without the H4 indicator; never empty
  // Set when an Event payload does not parse as an HCI event, or when the
  // container's record type has no mapping.
  std::string note;

  bool operator==(const CaptureRecord&) const = default;
};

// Fills `note` for Event records whose payload fails ParseHciEvent.
void AnnotateRecord(CaptureRecord& record);

enum class CaptureFormat { kBtsnoop, kPklg, kH4 };

std::string_view CaptureFormatName(CaptureFormat format);

struct CaptureFileInfo {
  CaptureFormat format = CaptureFormat::kBtsnoop;
  uint32_t datalink_or_version = 0;
  uint64_t record_count = 0;
};

struct ReadOptions {
  // Abort on the first malformed record instead of skipping it.
  bool strict = false;
};

// Everything recovered from one capture. In non-strict mode malformed
// records end up in `issues` (with byte offsets) instead of failing the read.
struct CaptureReadResult {
  CaptureFileInfo info;
  std::vector<CaptureRecord> records;
  std::vector<Error> issues;
  uint64_t skipped_log_messages = 0;  // pklg only
};

inline constexpr uint8_t kBtsnoopMagic[8] = {'b', 't', 's', 'n',
                                             'o', 'o', 'p', '\0'};
inline constexpr uint32_t kBtsnoopVersion = 1;
inline constexpr uint32_t kBtsnoopDatalinkH4 = 1002;
// Microseconds between 0000-01-01 (btsnoop epoch) and 1970-01-01.
inline constexpr uint64_t kBtsnoopEpochDelta = 0x00DCDDB30F2F8000ULL;

// Sequential btsnoop reader. Header problems fail construction via Open();
// each Next() yields one record, nullopt at end of stream, or an error.
class BtsnoopReader {
 public:
  static Result<BtsnoopReader> Open(std::istream& in);

  Result<std::optional<CaptureRecord>> Next();

  const CaptureFileInfo& info() const { return info_; }
  uint64_t offset() const { return offset_; }

 private:
  BtsnoopReader(std::istream& in, uint32_t datalink)
      : in_(&in), offset_(16) {
    info_.format = CaptureFormat::kBtsnoop;
    info_.datalink_or_version = datalink;
  }

  std::istream* in_;
  uint64_t offset_;
  CaptureFileInfo info_;
  bool done_ = false;
};

Result<CaptureReadResult> ReadBtsnoop(std::istream& in,
                                      ReadOptions options = {});

// Writes header plus records; returns the number of records written.
// Records with Direction::kUnknown are written with the direction implied by
// their kind (commands and ACL/SCO as sent, events as received).
Result<uint64_t> WriteBtsnoop(std::span<const CaptureRecord> records,
                              std::ostream& out);

// PacketLogger record types.
namespace pklg {
inline constexpr uint8_t kHciCommand = 0x00;
inline constexpr uint8_t kHciEvent = 0x01;
inline constexpr uint8_t kAclSent = 0x02;
inline constexpr uint8_t kAclReceived = 0x03;
inline constexpr uint8_t kScoSent = 0x08;
inline constexpr uint8_t kScoReceived = 0x09;
inline constexpr uint8_t kLmpSent = 0x0A;
inline constexpr uint8_t kLmpReceived = 0x0B;
// 0xF7..0xFE: syslog, kernel, kernel debug, error, power, note, config and
// new-controller messages. These carry text, not HCI packets.
inline constexpr uint8_t kFirstLogMessage = 0xF7;
inline constexpr uint8_t kLastLogMessage = 0xFE;
inline constexpr uint32_t kMinRecordLength = 9;
}  // namespace pklg

// Record layout (all big-endian): u32 length (counts the bytes after it),
// u32 seconds, u32 microseconds, u8 type, payload. HCI types map to records,
// log-message types are counted in skipped_log_messages, other types become
// PacketKind::Unknown(type) with a note on the record.
Result<CaptureReadResult> ReadPklg(std::istream& in, ReadOptions options = {});

Result<uint64_t> WritePklg(std::span<const CaptureRecord> records,
                           std::ostream& out);

// True when the input plausibly starts with a pklg record.
bool LooksLikePklg(ByteSpan prefix);

// Reads concatenated H4 packets (indicator byte 0x01..0x04 then the HCI
// packet). Packet boundaries come from each kind's own length field.
class H4StreamReader {
 public:
  explicit H4StreamReader(std::istream& in) : in_(&in) {}

  // Timestamps come from the system clock at read time; direction is
  // unknown. An unrecognised indicator stops the stream with an error.
  Result<std::optional<CaptureRecord>> Next();

  uint64_t offset() const { return offset_; }

 private:
  std::istream* in_;
  uint64_t offset_ = 0;
  bool done_ = false;
};

Result<CaptureReadResult> ReadH4Stream(std::istream& in,
                                       ReadOptions options = {});

Bytes EncodeH4(const CaptureRecord& record);

}  // namespace advscope
