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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "advscope/pipeline.h"
#include "test_util.h"

namespace advscope {
namespace {

using testing::HandBuiltBtsnoop;
using testing::HandBuiltPklgRecord;
using testing::SamplePacket;
using testing::ToBytes;
using testing::ToString;

constexpr uint64_t kSomeTime = 1586963968281000;  // 2020-04-15 15:19:28.281

std::istringstream StreamOf(const Bytes& bytes) {
  return std::istringstream(ToString(bytes));
}

TEST(BtsnoopTest, ReadsHandBuiltSampleCapture) {
  auto in = StreamOf(HandBuiltBtsnoop(SamplePacket(), kSomeTime));
  auto result = ReadBtsnoop(in);
  ASSERT_TRUE(result.ok()) << result.error().ToString();
  EXPECT_EQ(result->info.format, CaptureFormat::kBtsnoop);
  EXPECT_EQ(result->info.datalink_or_version, 1002u);
  EXPECT_EQ(result->info.record_count, 1u);
  ASSERT_EQ(result->records.size(), 1u);
  const CaptureRecord& record = result->records[0];
  EXPECT_EQ(record.kind, PacketKind::kEvent);
  EXPECT_EQ(record.direction, Direction::kControllerToHost);
  EXPECT_EQ(record.timestamp_us, kSomeTime);
  EXPECT_EQ(record.payload, SamplePacket());
  EXPECT_TRUE(record.note.empty());

  auto packet = ParseHciEvent(record.payload);
  ASSERT_TRUE(packet.ok());
  auto event = ParseLeAdvReport(*packet, DecodeMode::kEnhanced);
  ASSERT_TRUE(event.ok());
  EXPECT_EQ(event->reports[0].address.ToString(), "CA:FE:BA:BE:13:37");
  EXPECT_EQ(event->reports[0].rssi_dbm, -56);
}

TEST(BtsnoopTest, HeaderOnlyFile) {
  std::ostringstream out;
  auto written = WriteBtsnoop({}, out);
  ASSERT_TRUE(written.ok());
  EXPECT_EQ(*written, 0u);
  const Bytes bytes = ToBytes(out.str());
  ASSERT_EQ(bytes.size(), 16u);
  EXPECT_EQ(ToHex(bytes), "6274736E6F6F700000000001000003EA");

  auto in = StreamOf(bytes);
  auto result = ReadBtsnoop(in);
  ASSERT_TRUE(result.ok());
  EXPECT_TRUE(result->records.empty());
  EXPECT_EQ(result->info.record_count, 0u);
}

TEST(BtsnoopTest, HeaderErrors) {
  Bytes bytes = HandBuiltBtsnoop(SamplePacket(), kSomeTime);
  bytes[6] = 'q';  // "btsnooq"
  auto in = StreamOf(bytes);
  EXPECT_EQ(ReadBtsnoop(in).error().code, ErrorCode::kBadMagic);

  bytes = HandBuiltBtsnoop(SamplePacket(), kSomeTime);
  bytes[11] = 2;
  in = StreamOf(bytes);
  EXPECT_EQ(ReadBtsnoop(in).error().code, ErrorCode::kUnsupportedVersion);

  bytes = HandBuiltBtsnoop(SamplePacket(), kSomeTime);
  bytes[15] = 0xE9;  // 1001, HCI UART without indicator
  in = StreamOf(bytes);
  EXPECT_EQ(ReadBtsnoop(in).error().code, ErrorCode::kUnsupportedDatalink);
}

TEST(BtsnoopTest, TruncatedRecordIsPositioned) {
  Bytes bytes = HandBuiltBtsnoop(SamplePacket(), kSomeTime);
  const Bytes one_record = bytes;
  bytes.insert(bytes.end(), one_record.begin() + 16, one_record.end() - 5);

  auto in = StreamOf(bytes);
  auto lenient = ReadBtsnoop(in);
  ASSERT_TRUE(lenient.ok());
  EXPECT_EQ(lenient->records.size(), 1u);
  ASSERT_EQ(lenient->issues.size(), 1u);
  EXPECT_EQ(lenient->issues[0].code, ErrorCode::kTruncatedRecord);
  EXPECT_EQ(lenient->issues[0].offset, one_record.size());

  in = StreamOf(bytes);
  auto strict = ReadBtsnoop(in, ReadOptions{.strict = true});
  ASSERT_FALSE(strict.ok());
  EXPECT_EQ(strict.error().code, ErrorCode::kTruncatedRecord);
}

TEST(BtsnoopTest, RecordWithoutPacketIsSkippedAndCounted) {
  // A 1-byte record (indicator only) between two good ones.
  Bytes bytes = HandBuiltBtsnoop(SamplePacket(), kSomeTime);
  const Bytes good(bytes.begin() + 16, bytes.end());
  Bytes bad = good;
  bad.resize(25);
  bad[3] = 1;
  bad[7] = 1;
  bytes.insert(bytes.end(), bad.begin(), bad.end());
  bytes.insert(bytes.end(), good.begin(), good.end());

  auto in = StreamOf(bytes);
  auto result = ReadBtsnoop(in);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->records.size(), 2u);
  EXPECT_EQ(result->info.record_count, 2u);
  ASSERT_EQ(result->issues.size(), 1u);
  EXPECT_EQ(result->issues[0].code, ErrorCode::kRecordTooShort);
}

TEST(BtsnoopTest, UndecodableEventCarriesNote) {
  auto in = StreamOf(HandBuiltBtsnoop(Bytes{0x3E, 0x05, 0x02}, kSomeTime));
  auto result = ReadBtsnoop(in);
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result->records.size(), 1u);
  EXPECT_NE(result->records[0].note.find("LengthMismatch"), std::string::npos);
}

TEST(BtsnoopTest, RoundTripSingleRecord) {
  CaptureRecord record;
  record.timestamp_us = kSomeTime;
  record.direction = Direction::kControllerToHost;
  record.kind = PacketKind::kEvent;
  record.payload = SamplePacket();
  std::ostringstream out;
  ASSERT_TRUE(WriteBtsnoop(std::span(&record, 1), out).ok());
  EXPECT_EQ(ToBytes(out.str()), HandBuiltBtsnoop(SamplePacket(), kSomeTime));
  std::istringstream in(out.str());
  auto result = ReadBtsnoop(in);
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result->records.size(), 1u);
  EXPECT_EQ(result->records[0], record);
}

TEST(BtsnoopTest, RoundTripRandomRecords) {
  std::mt19937_64 rng(1002);
  for (int trial = 0; trial < 20; ++trial) {
    const auto records = testing::RandomCaptureRecords(rng, 1000);
    std::ostringstream out;
    auto written = WriteBtsnoop(records, out);
    ASSERT_TRUE(written.ok());
    EXPECT_EQ(*written, records.size());
    std::istringstream in(out.str());
    auto result = ReadBtsnoop(in);
    ASSERT_TRUE(result.ok());
    EXPECT_TRUE(result->issues.empty());
    EXPECT_EQ(result->info.record_count, records.size());
    ASSERT_EQ(result->records, records);

    // read -> write reproduces the file byte for byte.
    std::ostringstream again;
    ASSERT_TRUE(WriteBtsnoop(result->records, again).ok());
    EXPECT_EQ(again.str(), out.str());
  }
}

TEST(BtsnoopTest, UnknownDirectionWritesImpliedDirection) {
  CaptureRecord command;
  command.kind = PacketKind::kCommand;
  command.payload = {0x0C, 0x03, 0x00};
  command.direction = Direction::kUnknown;
  std::ostringstream out;
  ASSERT_TRUE(WriteBtsnoop(std::span(&command, 1), out).ok());
  std::istringstream in(out.str());
  auto result = ReadBtsnoop(in);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->records[0].direction, Direction::kHostToController);
}

TEST(BtsnoopTest, WriterRejectsEmptyPayload) {
  CaptureRecord empty;
  std::ostringstream out;
  EXPECT_FALSE(WriteBtsnoop(std::span(&empty, 1), out).ok());
}

TEST(BtsnoopTest, SinkFailure) {
  CaptureRecord record;
  record.payload = SamplePacket();
  std::ostringstream out;
  out.setstate(std::ios::badbit);
  auto written = WriteBtsnoop(std::span(&record, 1), out);
  ASSERT_FALSE(written.ok());
  EXPECT_EQ(written.error().code, ErrorCode::kSinkFailure);
}

TEST(BtsnoopTest, ReaderIsIncremental) {
  std::istringstream in(ToString(HandBuiltBtsnoop(SamplePacket(), kSomeTime)));
  auto reader = BtsnoopReader::Open(in);
  ASSERT_TRUE(reader.ok());
  auto first = reader->Next();
  ASSERT_TRUE(first.ok());
  ASSERT_TRUE(first->has_value());
  EXPECT_EQ(reader->offset(), 16u + 24u + 33u);
  auto end = reader->Next();
  ASSERT_TRUE(end.ok());
  EXPECT_FALSE(end->has_value());
}

TEST(PklgTest, EventRecordWrappingSamplePacket) {
  // seconds/micros split of kSomeTime.
  const Bytes bytes =
      HandBuiltPklgRecord(0x01, SamplePacket(), 1586963968u, 281000u);
  auto in = StreamOf(bytes);
  auto result = ReadPklg(in);
  ASSERT_TRUE(result.ok()) << result.error().ToString();
  EXPECT_EQ(result->info.format, CaptureFormat::kPklg);
  ASSERT_EQ(result->records.size(), 1u);
  const CaptureRecord& record = result->records[0];
  EXPECT_EQ(record.kind, PacketKind::kEvent);
  EXPECT_EQ(record.direction, Direction::kControllerToHost);
  EXPECT_EQ(record.timestamp_us, kSomeTime);
  EXPECT_EQ(record.payload, SamplePacket());
  EXPECT_TRUE(LooksLikePklg(bytes));
  EXPECT_EQ(DetectCaptureFormat(bytes), CaptureFormat::kPklg);
}

TEST(PklgTest, EmptyStream) {
  std::istringstream in;
  auto result = ReadPklg(in);
  ASSERT_TRUE(result.ok());
  EXPECT_TRUE(result->records.empty());
}

TEST(PklgTest, LengthBelowMinimum) {
  Bytes bytes = HandBuiltPklgRecord(0x01, SamplePacket(), 1, 2);
  bytes[3] = 3;
  auto in = StreamOf(bytes);
  auto strict = ReadPklg(in, ReadOptions{.strict = true});
  ASSERT_FALSE(strict.ok());
  EXPECT_EQ(strict.error().code, ErrorCode::kRecordTooShort);

  in = StreamOf(bytes);
  auto lenient = ReadPklg(in);
  ASSERT_TRUE(lenient.ok());
  EXPECT_TRUE(lenient->records.empty());
  ASSERT_EQ(lenient->issues.size(), 1u);
  EXPECT_EQ(lenient->issues[0].offset, 0u);
}

TEST(PklgTest, TypeMappingAndLogMessages) {
  Bytes bytes;
  auto add = [&bytes](uint8_t type, Bytes payload) {
    Bytes rec = HandBuiltPklgRecord(type, payload, 100, 5);
    bytes.insert(bytes.end(), rec.begin(), rec.end());
  };
  add(0x00, {0x03, 0x0C, 0x00});
  add(0xFC, ToBytes("note: hello"));
  add(0x02, {0x01, 0x20, 0x00, 0x00});
  add(0x03, {0x01, 0x20, 0x00, 0x00});
  add(0xF7, ToBytes("syslog"));
  add(0x08, {0x01, 0x00, 0x00});
  add(0x09, {0x01, 0x00, 0x00});
  add(0x0B, {0xAA});
  auto in = StreamOf(bytes);
  auto result = ReadPklg(in);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->skipped_log_messages, 2u);
  ASSERT_EQ(result->records.size(), 6u);
  EXPECT_EQ(result->info.record_count, 6u);
  EXPECT_EQ(result->records[0].kind, PacketKind::kCommand);
  EXPECT_EQ(result->records[0].direction, Direction::kHostToController);
  EXPECT_EQ(result->records[1].kind, PacketKind::kAclData);
  EXPECT_EQ(result->records[1].direction, Direction::kHostToController);
  EXPECT_EQ(result->records[2].kind, PacketKind::kAclData);
  EXPECT_EQ(result->records[2].direction, Direction::kControllerToHost);
  EXPECT_EQ(result->records[3].kind, PacketKind::kScoData);
  EXPECT_EQ(result->records[4].direction, Direction::kControllerToHost);
  EXPECT_EQ(static_cast<int>(result->records[5].kind), 0x0B);
  EXPECT_FALSE(result->records[5].note.empty());
  EXPECT_TRUE(result->issues.empty());
}

TEST(PklgTest, SelfRoundTrip) {
  std::mt19937_64 rng(9);
  auto records = testing::RandomCaptureRecords(rng, 500);
  // pklg carries neither unknown kinds nor timestamps beyond 32-bit seconds.
  std::erase_if(records, [](const CaptureRecord& r) {
    return static_cast<int>(r.kind) < 1 || static_cast<int>(r.kind) > 4;
  });
  for (auto& r : records) {
    r.timestamp_us %= uint64_t{4000000000} * 1000000;
    if (r.kind == PacketKind::kCommand) r.direction = Direction::kHostToController;
    if (r.kind == PacketKind::kEvent) r.direction = Direction::kControllerToHost;
  }
  std::ostringstream out;
  ASSERT_TRUE(WritePklg(records, out).ok());
  std::istringstream in(out.str());
  auto result = ReadPklg(in);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->records, records);
}

TEST(H4StreamTest, SamplePacketEvent) {
  Bytes bytes = {0x04};
  const Bytes packet = SamplePacket();
  bytes.insert(bytes.end(), packet.begin(), packet.end());
  auto in = StreamOf(bytes);
  auto result = ReadH4Stream(in);
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result->records.size(), 1u);
  EXPECT_EQ(result->records[0].kind, PacketKind::kEvent);
  EXPECT_EQ(result->records[0].payload.size(), 32u);
  EXPECT_EQ(result->records[0].direction, Direction::kUnknown);
  EXPECT_GT(result->records[0].timestamp_us, 0u);
}

TEST(H4StreamTest, Empty) {
  std::istringstream in;
  auto result = ReadH4Stream(in);
  ASSERT_TRUE(result.ok());
  EXPECT_TRUE(result->records.empty());
}

TEST(H4StreamTest, UnknownIndicatorAtOffsetZero) {
  auto in = StreamOf(Bytes{0x07, 0x00});
  auto result = ReadH4Stream(in, ReadOptions{.strict = true});
  ASSERT_FALSE(result.ok());
  EXPECT_EQ(result.error().code, ErrorCode::kUnknownIndicator);
  EXPECT_EQ(result.error().offset, 0u);
}

TEST(H4StreamTest, AllKindsAndPositionedStop) {
  const Bytes bytes = {
      0x01, 0x03, 0x0C, 0x00,                    // HCI_Reset command
      0x02, 0x01, 0x20, 0x02, 0x00, 0xAA, 0xBB,  // ACL, 2 bytes
      0x03, 0x01, 0x00, 0x01, 0xCC,              // SCO, 1 byte
      0x04, 0x0E, 0x01, 0x01,                    // event
      0x09,                                      // garbage
  };
  auto in = StreamOf(bytes);
  auto result = ReadH4Stream(in);
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result->records.size(), 4u);
  EXPECT_EQ(result->records[0].kind, PacketKind::kCommand);
  EXPECT_EQ(result->records[1].payload, (Bytes{0x01, 0x20, 0x02, 0x00, 0xAA, 0xBB}));
  EXPECT_EQ(result->records[2].kind, PacketKind::kScoData);
  EXPECT_EQ(result->records[3].payload, (Bytes{0x0E, 0x01, 0x01}));
  ASSERT_EQ(result->issues.size(), 1u);
  EXPECT_EQ(result->issues[0].code, ErrorCode::kUnknownIndicator);
  EXPECT_EQ(result->issues[0].offset, 20u);

  for (size_t i = 0; i < 4; ++i) {
    Bytes round = EncodeH4(result->records[i]);
    EXPECT_FALSE(round.empty());
  }
}

TEST(H4StreamTest, TruncatedPacket) {
  auto in = StreamOf(Bytes{0x04, 0x3E, 0x1E, 0x02});
  auto result = ReadH4Stream(in);
  ASSERT_TRUE(result.ok());
  EXPECT_TRUE(result->records.empty());
  ASSERT_EQ(result->issues.size(), 1u);
  EXPECT_EQ(result->issues[0].code, ErrorCode::kTruncatedRecord);
}

TEST(CaptureInvariantTest, EventPayloadLengthMatchesParamLen) {
  std::mt19937_64 rng(77);
  const auto records = testing::RandomCaptureRecords(rng, 2000);
  std::ostringstream out;
  ASSERT_TRUE(WriteBtsnoop(records, out).ok());
  std::istringstream in(out.str());
  auto result = ReadBtsnoop(in);
  ASSERT_TRUE(result.ok());
  for (const CaptureRecord& record : result->records) {
    EXPECT_FALSE(record.payload.empty());
    if (record.kind == PacketKind::kEvent) {
      auto parsed = ParseHciEvent(record.payload);
      if (parsed.ok()) {
        EXPECT_EQ(record.payload.size(), 2u + record.payload[1]);
        EXPECT_TRUE(record.note.empty());
      } else {
        EXPECT_FALSE(record.note.empty());
      }
    }
  }
}

TEST(DetectCaptureFormatTest, Magic) {
  EXPECT_EQ(DetectCaptureFormat(HandBuiltBtsnoop(SamplePacket(), 0)),
            CaptureFormat::kBtsnoop);
  EXPECT_EQ(DetectCaptureFormat(Bytes{0x04, 0x3E}), CaptureFormat::kH4);
  EXPECT_EQ(DetectCaptureFormat(Bytes{0x42, 0x42}), std::nullopt);
}

}  // namespace
}  // namespace advscope
