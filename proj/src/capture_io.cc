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

#include "advscope/capture_io.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstring>
#include <limits>

namespace advscope {

namespace {

// Largest HCI packet (ACL: 4-byte header + 65535) plus framing, rounded up.
constexpr uint32_t kMaxRecordBytes = 0x10100;

uint32_t LoadBe32(const uint8_t* p) {
  return (uint32_t{p[0]} << 24) | (uint32_t{p[1]} << 16) |
         (uint32_t{p[2]} << 8) | uint32_t{p[3]};
}

uint64_t LoadBe64(const uint8_t* p) {
  return (uint64_t{LoadBe32(p)} << 32) | LoadBe32(p + 4);
}

void AppendBe32(Bytes& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

void AppendBe64(Bytes& out, uint64_t v) {
  AppendBe32(out, static_cast<uint32_t>(v >> 32));
  AppendBe32(out, static_cast<uint32_t>(v));
}

// Reads up to `n` bytes; returns how many were read.
size_t ReadUpTo(std::istream& in, uint8_t* dst, size_t n) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  return static_cast<size_t>(in.gcount());
}

bool WriteAll(std::ostream& out, const Bytes& bytes) {
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  return static_cast<bool>(out);
}

Direction ImpliedDirection(PacketKind kind) {
  return kind == PacketKind::kEvent ? Direction::kControllerToHost
                                    : Direction::kHostToController;
}

bool IsCommandOrEvent(PacketKind kind) {
  return kind == PacketKind::kCommand || kind == PacketKind::kEvent;
}

// Collects one reader step into `result`. Returns false when reading stops.
template <typename Reader>
Result<bool> Drain(Reader& reader, ReadOptions options,
                   CaptureReadResult& result) {
  while (true) {
    auto next = reader.Next();
    if (!next.ok()) {
      if (options.strict) {
        return next.error();
      }
      result.issues.push_back(next.error());
      // Recoverable issues leave the reader positioned at the next record.
      if (next.error().code == ErrorCode::kRecordTooShort) {
        continue;
      }
      return false;
    }
    if (!next->has_value()) {
      return true;
    }
    result.records.push_back(std::move(**next));
  }
}

}  // namespace

std::string_view DirectionName(Direction direction) {
  switch (direction) {
    case Direction::kHostToController:
      return "HostToController";
    case Direction::kControllerToHost:
      return "ControllerToHost";
    case Direction::kUnknown:
      return "Unknown";
  }
  return "Unknown";
}

std::string PacketKindName(PacketKind kind) {
  switch (kind) {
    case PacketKind::kCommand:
      return "Command";
    case PacketKind::kAclData:
      return "AclData";
    case PacketKind::kScoData:
      return "ScoData";
    case PacketKind::kEvent:
      return "Event";
  }
  return "Unknown(" + std::to_string(static_cast<int>(kind)) + ")";
}

std::string_view CaptureFormatName(CaptureFormat format) {
  switch (format) {
    case CaptureFormat::kBtsnoop:
      return "btsnoop";
    case CaptureFormat::kPklg:
      return "pklg";
    case CaptureFormat::kH4:
      return "h4";
  }
  return "unknown";
}

void AnnotateRecord(CaptureRecord& record) {
  record.note.clear();
  if (record.kind != PacketKind::kEvent) {
    return;
  }
  auto parsed = ParseHciEvent(record.payload);
  if (!parsed.ok()) {
    record.note = "undecodable event: " + parsed.error().ToString();
  }
}

// ---------------------------------------------------------------------------
// btsnoop

Result<BtsnoopReader> BtsnoopReader::Open(std::istream& in) {
  std::array<uint8_t, 16> header{};
  const size_t got = ReadUpTo(in, header.data(), header.size());
  if (got < 8 || std::memcmp(header.data(), kBtsnoopMagic, 8) != 0) {
    return MakeError(ErrorCode::kBadMagic, "missing btsnoop magic", 0);
  }
  if (got < header.size()) {
    return MakeError(ErrorCode::kTruncatedRecord, "btsnoop header truncated",
                     got);
  }
  const uint32_t version = LoadBe32(header.data() + 8);
  if (version != kBtsnoopVersion) {
    return MakeError(ErrorCode::kUnsupportedVersion,
                     "btsnoop version " + std::to_string(version), 8);
  }
  const uint32_t datalink = LoadBe32(header.data() + 12);
  if (datalink != kBtsnoopDatalinkH4) {
    return MakeError(ErrorCode::kUnsupportedDatalink,
                     "btsnoop datalink " + std::to_string(datalink) +
                         " (only 1002/H4 is supported)",
                     12);
  }
  return BtsnoopReader(in, datalink);
}

Result<std::optional<CaptureRecord>> BtsnoopReader::Next() {
  if (done_) {
    return std::optional<CaptureRecord>();
  }
  const uint64_t record_start = offset_;
  std::array<uint8_t, 24> header{};
  const size_t got = ReadUpTo(*in_, header.data(), header.size());
  if (got == 0) {
    done_ = true;
    return std::optional<CaptureRecord>();
  }
  if (got < header.size()) {
    done_ = true;
    return MakeError(ErrorCode::kTruncatedRecord,
                     "record header has " + std::to_string(got) + " of 24 bytes",
                     record_start);
  }
  const uint32_t included_len = LoadBe32(header.data() + 4);
  const uint32_t flags = LoadBe32(header.data() + 8);
  const uint64_t timestamp = LoadBe64(header.data() + 16);

  if (included_len > kMaxRecordBytes) {
    done_ = true;
    return MakeError(ErrorCode::kTruncatedRecord,
                     "implausible record length " +
                         std::to_string(included_len),
                     record_start);
  }
  Bytes data(included_len);
  const size_t data_got = ReadUpTo(*in_, data.data(), data.size());
  offset_ += header.size() + data_got;
  if (data_got < included_len) {
    done_ = true;
    return MakeError(ErrorCode::kTruncatedRecord,
                     "record payload has " + std::to_string(data_got) +
                         " of " + std::to_string(included_len) + " bytes",
                     record_start);
  }
  if (included_len < 2) {
    return MakeError(ErrorCode::kRecordTooShort,
                     "record of " + std::to_string(included_len) +
                         " bytes has no HCI packet after the H4 indicator",
                     record_start);
  }

  CaptureRecord record;
  record.timestamp_us =
      timestamp >= kBtsnoopEpochDelta ? timestamp - kBtsnoopEpochDelta : 0;
  record.direction = (flags & 0x01) ? Direction::kControllerToHost
                                    : Direction::kHostToController;
  record.kind = static_cast<PacketKind>(data[0]);
  record.payload.assign(data.begin() + 1, data.end());
  AnnotateRecord(record);
  ++info_.record_count;
  return std::optional<CaptureRecord>(std::move(record));
}

Result<CaptureReadResult> ReadBtsnoop(std::istream& in, ReadOptions options) {
  auto reader = BtsnoopReader::Open(in);
  if (!reader.ok()) {
    return reader.error();
  }
  CaptureReadResult result;
  auto drained = Drain(*reader, options, result);
  if (!drained.ok()) {
    return drained.error();
  }
  result.info = reader->info();
  return result;
}

Result<uint64_t> WriteBtsnoop(std::span<const CaptureRecord> records,
                              std::ostream& out) {
  Bytes header(kBtsnoopMagic, kBtsnoopMagic + 8);
  AppendBe32(header, kBtsnoopVersion);
  AppendBe32(header, kBtsnoopDatalinkH4);
  if (!WriteAll(out, header)) {
    return MakeError(ErrorCode::kSinkFailure, "failed to write header", 0);
  }
  uint64_t offset = header.size();
  uint64_t written = 0;
  for (const CaptureRecord& record : records) {
    if (record.payload.empty()) {
      return MakeError(ErrorCode::kInvalidArgument,
                       "record " + std::to_string(written) +
                           " has an empty payload");
    }
    if (record.timestamp_us >
        std::numeric_limits<uint64_t>::max() - kBtsnoopEpochDelta) {
      return MakeError(ErrorCode::kOutOfRange,
                       "record " + std::to_string(written) +
                           " timestamp does not fit the btsnoop epoch");
    }
    const Direction direction = record.direction == Direction::kUnknown
                                    ? ImpliedDirection(record.kind)
                                    : record.direction;
    uint32_t flags = direction == Direction::kControllerToHost ? 0x01 : 0x00;
    if (IsCommandOrEvent(record.kind)) {
      flags |= 0x02;
    }
    const auto length = static_cast<uint32_t>(record.payload.size() + 1);
    Bytes bytes;
    bytes.reserve(24 + length);
    AppendBe32(bytes, length);  // original length
    AppendBe32(bytes, length);  // included length
    AppendBe32(bytes, flags);
    AppendBe32(bytes, 0);  // cumulative drops
    AppendBe64(bytes, record.timestamp_us + kBtsnoopEpochDelta);
    bytes.push_back(static_cast<uint8_t>(record.kind));
    bytes.insert(bytes.end(), record.payload.begin(), record.payload.end());
    if (!WriteAll(out, bytes)) {
      return MakeError(ErrorCode::kSinkFailure,
                       "failed to write record " + std::to_string(written),
                       offset);
    }
    offset += bytes.size();
    ++written;
  }
  return written;
}

// ---------------------------------------------------------------------------
// PacketLogger

namespace {

struct PklgMapping {
  PacketKind kind;
  Direction direction;
};

std::optional<PklgMapping> MapPklgType(uint8_t type) {
  switch (type) {
    case pklg::kHciCommand:
      return PklgMapping{PacketKind::kCommand, Direction::kHostToController};
    case pklg::kHciEvent:
      return PklgMapping{PacketKind::kEvent, Direction::kControllerToHost};
    case pklg::kAclSent:
      return PklgMapping{PacketKind::kAclData, Direction::kHostToController};
    case pklg::kAclReceived:
      return PklgMapping{PacketKind::kAclData, Direction::kControllerToHost};
    case pklg::kScoSent:
      return PklgMapping{PacketKind::kScoData, Direction::kHostToController};
    case pklg::kScoReceived:
      return PklgMapping{PacketKind::kScoData, Direction::kControllerToHost};
    default:
      return std::nullopt;
  }
}

Result<uint8_t> PklgTypeFor(const CaptureRecord& record) {
  const bool sent = record.direction != Direction::kControllerToHost;
  switch (record.kind) {
    case PacketKind::kCommand:
      return pklg::kHciCommand;
    case PacketKind::kEvent:
      return pklg::kHciEvent;
    case PacketKind::kAclData:
      return sent ? pklg::kAclSent : pklg::kAclReceived;
    case PacketKind::kScoData:
      return sent ? pklg::kScoSent : pklg::kScoReceived;
  }
  return MakeError(ErrorCode::kUnsupportedRecord,
                   "no pklg type for " + PacketKindName(record.kind));
}

}  // namespace

bool LooksLikePklg(ByteSpan prefix) {
  if (prefix.size() < 13) {
    return false;
  }
  const uint32_t length = LoadBe32(prefix.data());
  if (length < pklg::kMinRecordLength || length > 0x10000) {
    return false;
  }
  const uint32_t micros = LoadBe32(prefix.data() + 8);
  const uint8_t type = prefix[12];
  return micros < 1000000 &&
         (MapPklgType(type).has_value() || type == pklg::kLmpSent ||
          type == pklg::kLmpReceived || type >= pklg::kFirstLogMessage);
}

Result<CaptureReadResult> ReadPklg(std::istream& in, ReadOptions options) {
  CaptureReadResult result;
  result.info.format = CaptureFormat::kPklg;
  uint64_t offset = 0;
  auto fail = [&](Error error) -> Result<bool> {
    if (options.strict) {
      return error;
    }
    result.issues.push_back(std::move(error));
    return false;
  };

  while (true) {
    std::array<uint8_t, 13> header{};
    const size_t got = ReadUpTo(in, header.data(), header.size());
    if (got == 0) {
      break;
    }
    const uint64_t record_start = offset;
    if (got >= 4 && LoadBe32(header.data()) < pklg::kMinRecordLength) {
      auto stop = fail(MakeError(
          ErrorCode::kRecordTooShort,
          "length field " + std::to_string(LoadBe32(header.data())) +
              " is below the 9-byte minimum",
          record_start));
      if (!stop.ok()) return stop.error();
      break;
    }
    if (got < header.size()) {
      auto stop = fail(MakeError(ErrorCode::kTruncatedRecord,
                                 "record header truncated", record_start));
      if (!stop.ok()) return stop.error();
      break;
    }
    const uint32_t length = LoadBe32(header.data());
    if (length > kMaxRecordBytes) {
      auto stop = fail(MakeError(ErrorCode::kTruncatedRecord,
                                 "implausible record length " +
                                     std::to_string(length),
                                 record_start));
      if (!stop.ok()) return stop.error();
      break;
    }
    const uint32_t seconds = LoadBe32(header.data() + 4);
    const uint32_t micros = LoadBe32(header.data() + 8);
    const uint8_t type = header[12];
    Bytes payload(length - pklg::kMinRecordLength);
    const size_t payload_got = ReadUpTo(in, payload.data(), payload.size());
    offset += header.size() + payload_got;
    if (payload_got < payload.size()) {
      auto stop = fail(MakeError(ErrorCode::kTruncatedRecord,
                                 "record payload truncated", record_start));
      if (!stop.ok()) return stop.error();
      break;
    }
    if (type >= pklg::kFirstLogMessage && type <= pklg::kLastLogMessage) {
      ++result.skipped_log_messages;
      continue;
    }
    if (payload.empty()) {
      auto stop = fail(MakeError(ErrorCode::kRecordTooShort,
                                 "record carries no packet", record_start));
      if (!stop.ok()) return stop.error();
      continue;
    }

    CaptureRecord record;
    record.timestamp_us = uint64_t{seconds} * 1000000 + micros;
    record.payload = std::move(payload);
    if (auto mapping = MapPklgType(type)) {
      record.kind = mapping->kind;
      record.direction = mapping->direction;
    } else {
      record.kind = static_cast<PacketKind>(type);
      record.direction = Direction::kUnknown;
    }
    AnnotateRecord(record);
    if (!MapPklgType(type).has_value()) {
      // Kept, not dropped: the type table differs between macOS releases.
      record.note = "unmapped pklg type " + std::to_string(type);
    }
    result.records.push_back(std::move(record));
  }
  result.info.record_count = result.records.size();
  return result;
}

Result<uint64_t> WritePklg(std::span<const CaptureRecord> records,
                           std::ostream& out) {
  uint64_t written = 0;
  for (const CaptureRecord& record : records) {
    auto type = PklgTypeFor(record);
    if (!type.ok()) {
      return type.error();
    }
    if (record.payload.empty()) {
      return MakeError(ErrorCode::kInvalidArgument,
                       "record " + std::to_string(written) +
                           " has an empty payload");
    }
    const uint64_t seconds = record.timestamp_us / 1000000;
    if (seconds > std::numeric_limits<uint32_t>::max()) {
      return MakeError(ErrorCode::kOutOfRange,
                       "timestamp does not fit 32-bit seconds");
    }
    Bytes bytes;
    AppendBe32(bytes, static_cast<uint32_t>(pklg::kMinRecordLength +
                                            record.payload.size()));
    AppendBe32(bytes, static_cast<uint32_t>(seconds));
    AppendBe32(bytes, static_cast<uint32_t>(record.timestamp_us % 1000000));
    bytes.push_back(*type);
    bytes.insert(bytes.end(), record.payload.begin(), record.payload.end());
    if (!WriteAll(out, bytes)) {
      return MakeError(ErrorCode::kSinkFailure,
                       "failed to write record " + std::to_string(written));
    }
    ++written;
  }
  return written;
}

// ---------------------------------------------------------------------------
// H4

namespace {

// Size of the HCI header that follows the indicator, or 0 if unknown.
size_t H4HeaderSize(uint8_t indicator) {
  switch (indicator) {
    case 0x01:
      return 3;  // opcode(2) length(1)
    case 0x02:
      return 4;  // handle(2) length(2, LE)
    case 0x03:
      return 3;  // handle(2) length(1)
    case 0x04:
      return 2;  // code(1) length(1)
    default:
      return 0;
  }
}

size_t H4PayloadSize(uint8_t indicator, const uint8_t* header) {
  switch (indicator) {
    case 0x01:
      return header[2];
    case 0x02:
      return size_t{header[2]} | (size_t{header[3]} << 8);
    case 0x03:
      return header[2];
    case 0x04:
      return header[1];
    default:
      return 0;
  }
}

uint64_t MonotonicEpochMicros() {
  using namespace std::chrono;
  static const auto wall_anchor =
      duration_cast<microseconds>(system_clock::now().time_since_epoch());
  static const auto steady_anchor = steady_clock::now();
  const auto elapsed =
      duration_cast<microseconds>(steady_clock::now() - steady_anchor);
  return static_cast<uint64_t>((wall_anchor + elapsed).count());
}

}  // namespace

Result<std::optional<CaptureRecord>> H4StreamReader::Next() {
  if (done_) {
    return std::optional<CaptureRecord>();
  }
  const uint64_t start = offset_;
  uint8_t indicator = 0;
  if (ReadUpTo(*in_, &indicator, 1) == 0) {
    done_ = true;
    return std::optional<CaptureRecord>();
  }
  const size_t header_size = H4HeaderSize(indicator);
  if (header_size == 0) {
    done_ = true;
    return MakeError(ErrorCode::kUnknownIndicator,
                     "unknown H4 indicator " + std::to_string(indicator),
                     start);
  }
  Bytes payload(header_size);
  if (ReadUpTo(*in_, payload.data(), header_size) < header_size) {
    done_ = true;
    return MakeError(ErrorCode::kTruncatedRecord, "H4 packet header truncated",
                     start);
  }
  const size_t body = H4PayloadSize(indicator, payload.data());
  payload.resize(header_size + body);
  if (ReadUpTo(*in_, payload.data() + header_size, body) < body) {
    done_ = true;
    return MakeError(ErrorCode::kTruncatedRecord, "H4 packet body truncated",
                     start);
  }
  offset_ += 1 + payload.size();

  CaptureRecord record;
  record.timestamp_us = MonotonicEpochMicros();
  record.direction = Direction::kUnknown;
  record.kind = static_cast<PacketKind>(indicator);
  record.payload = std::move(payload);
  AnnotateRecord(record);
  return std::optional<CaptureRecord>(std::move(record));
}

Result<CaptureReadResult> ReadH4Stream(std::istream& in, ReadOptions options) {
  H4StreamReader reader(in);
  CaptureReadResult result;
  result.info.format = CaptureFormat::kH4;
  auto drained = Drain(reader, options, result);
  if (!drained.ok()) {
    return drained.error();
  }
  result.info.record_count = result.records.size();
  return result;
}

Bytes EncodeH4(const CaptureRecord& record) {
  Bytes out;
  out.reserve(1 + record.payload.size());
  out.push_back(static_cast<uint8_t>(record.kind));
  out.insert(out.end(), record.payload.begin(), record.payload.end());
  return out;
}

}  // namespace advscope
