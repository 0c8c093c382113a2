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

#include "advscope/result.h"

#include <sstream>

namespace advscope {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kTooShort:
      return "TooShort";
    case ErrorCode::kLengthMismatch:
      return "LengthMismatch";
    case ErrorCode::kWrongEventCode:
      return "WrongEventCode";
    case ErrorCode::kWrongSubevent:
      return "WrongSubevent";
    case ErrorCode::kNumReportsZero:
      return "NumReportsZero";
    case ErrorCode::kTruncated:
      return "Truncated";
    case ErrorCode::kTooManyReports:
      return "TooManyReports";
    case ErrorCode::kDataTooLong:
      return "DataTooLong";
    case ErrorCode::kParamsOverflow:
      return "ParamsOverflow";
    case ErrorCode::kOutOfRange:
      return "OutOfRange";
    case ErrorCode::kMalformedTxPower:
      return "MalformedTxPower";
    case ErrorCode::kBadMagic:
      return "BadMagic";
    case ErrorCode::kUnsupportedVersion:
      return "UnsupportedVersion";
    case ErrorCode::kUnsupportedDatalink:
      return "UnsupportedDatalink";
    case ErrorCode::kTruncatedRecord:
      return "TruncatedRecord";
    case ErrorCode::kRecordTooShort:
      return "RecordTooShort";
    case ErrorCode::kUnknownIndicator:
      return "UnknownIndicator";
    case ErrorCode::kUnsupportedRecord:
      return "UnsupportedRecord";
    case ErrorCode::kSinkFailure:
      return "SinkFailure";
    case ErrorCode::kNoSamples:
      return "NoSamples";
    case ErrorCode::kEmptyPattern:
      return "EmptyPattern";
    case ErrorCode::kEmptyImage:
      return "EmptyImage";
    case ErrorCode::kBadSignature:
      return "BadSignature";
    case ErrorCode::kIoError:
      return "IoError";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
  }
  return "Unknown";
}

std::string Error::ToString() const {
  std::ostringstream out;
  out << ErrorCodeName(code);
  if (offset.has_value()) {
    out << " at offset " << *offset;
  }
  if (!message.empty()) {
    out << ": " << message;
  }
  return out.str();
}

}  // namespace advscope
