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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace advscope {

enum class ErrorCode {
  // hci_codec
  kTooShort,
  kLengthMismatch,
  kWrongEventCode,
  kWrongSubevent,
  kNumReportsZero,
  kTruncated,
  kTooManyReports,
  kDataTooLong,
  kParamsOverflow,
  kOutOfRange,
  kMalformedTxPower,
  // capture_io
  kBadMagic,
  kUnsupportedVersion,
  kUnsupportedDatalink,
  kTruncatedRecord,
  kRecordTooShort,
  kUnknownIndicator,
  kUnsupportedRecord,
  kSinkFailure,
  // adv_analytics
  kNoSamples,
  // fw_sigscan
  kEmptyPattern,
  kEmptyImage,
  kBadSignature,
  // general
  kIoError,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

// An error with an optional byte position into whatever input produced it.
struct Error {
  ErrorCode code;
  std::string message;
  std::optional<uint64_t> offset;

  std::string ToString() const;
};

inline Error MakeError(ErrorCode code, std::string message,
                       std::optional<uint64_t> offset = std::nullopt) {
  return Error{code, std::move(message), offset};
}

class BadResultAccess : public std::logic_error {
 public:
  explicit BadResultAccess(const Error& error)
      : std::logic_error("value() on error result: " + error.ToString()) {}
};

// Value-or-error. Accessing value() on an error throws BadResultAccess, which
// always indicates a caller bug.
template <typename T>
class [[nodiscard]] Result {
 public:
  Result(T value) : storage_(std::move(value)) {}  // NOLINT
  Result(Error error) : storage_(std::move(error)) {}  // NOLINT

  bool ok() const { return std::holds_alternative<T>(storage_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    CheckOk();
    return std::get<T>(storage_);
  }
  T& value() & {
    CheckOk();
    return std::get<T>(storage_);
  }
  T&& value() && {
    CheckOk();
    return std::get<T>(std::move(storage_));
  }

  const T& operator*() const& { return value(); }
  T& operator*() & { return value(); }
  const T* operator->() const { return &value(); }
  T* operator->() { return &value(); }

  const Error& error() const { return std::get<Error>(storage_); }

 private:
  void CheckOk() const {
    if (!ok()) {
      throw BadResultAccess(std::get<Error>(storage_));
    }
  }

  std::variant<T, Error> storage_;
};

// Result without a value.
class [[nodiscard]] Status {
 public:
  Status() = default;
  Status(Error error) : error_(std::move(error)) {}  // NOLINT

  static Status Ok() { return Status(); }

  bool ok() const { return !error_.has_value(); }
  explicit operator bool() const { return ok(); }
  const Error& error() const { return *error_; }

 private:
  std::optional<Error> error_;
};

}  // namespace advscope
