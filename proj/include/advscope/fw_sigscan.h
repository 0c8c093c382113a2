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

// Byte-signature search over raw firmware images, and the one-byte patch that
// turns on enhanced advertising reports.

#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "advscope/hci_codec.h"
#include "advscope/result.h"

namespace advscope {

struct Signature {
  std::string name;
  Bytes pattern;
  Bytes mask;  // empty, or same length as pattern; 0xFF bits must match
  uint32_t alignment = 2;

  Status Validate() const;
  bool MatchesAt(ByteSpan image, size_t offset) const;
};

struct SignatureMatch {
  std::string signature_name;
  uint64_t offset = 0;
  uint64_t context_offset = 0;  // where `context` starts in the image
  Bytes context;                // up to 16 bytes around the match

  bool operator==(const SignatureMatch&) const = default;
};

inline constexpr size_t kMatchContextBytes = 16;

// Every aligned offset where the masked image bytes equal the pattern, for
// each signature in turn, ascending by offset. Overlapping matches are all
// reported.
Result<std::vector<SignatureMatch>> ScanSignatures(
    ByteSpan image, const std::vector<Signature>& signatures);

// Same result as ScanSignatures, computed over `threads` disjoint chunks
// that overlap by pattern length - 1 bytes.
Result<std::vector<SignatureMatch>> ScanSignaturesParallel(
    ByteSpan image, const std::vector<Signature>& signatures,
    unsigned threads);

// Expected number of chance matches of a sig_len-byte pattern in a uniformly
// random image of image_len bytes, checked at every `alignment` bytes.
double ExpectedRandomMatches(uint64_t image_len, uint32_t sig_len,
                             uint32_t alignment);

// Signatures shipped with the tool. "scanTaskRxHeaderDone-movw" is
// `mov.w r0, #0x650000` (Thumb-2 word 0x00CAF44F), found in the scan task
// header handler of Broadcom/Cypress BLE controller firmware.
std::vector<Signature> BuiltinSignatures();

// One signature per line: name<TAB>hexpattern[<TAB>hexmask][<TAB>alignment].
// A third field is a mask when it has as many hex digits as the pattern and
// an alignment otherwise. Blank lines and lines starting with '#' are
// skipped.
Result<std::vector<Signature>> ParseSignatureList(std::istream& in);

struct PatchDescriptor {
  uint32_t address = 0;
  Bytes bytes;
  std::string comment;

  // "00280000 01 bEnhancedAdvReport = 1"
  std::string ToString() const;
};

PatchDescriptor MakeFlagPatch(uint32_t address);

}  // namespace advscope
