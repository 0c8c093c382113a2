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

#include "advscope/fw_sigscan.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>

namespace advscope {

Status Signature::Validate() const {
  if (pattern.empty()) {
    return MakeError(ErrorCode::kEmptyPattern,
                     "signature '" + name + "' has an empty pattern");
  }
  if (!mask.empty() && mask.size() != pattern.size()) {
    return MakeError(ErrorCode::kBadSignature,
                     "signature '" + name + "' mask length differs from pattern");
  }
  if (alignment == 0) {
    return MakeError(ErrorCode::kBadSignature,
                     "signature '" + name + "' alignment must be >= 1");
  }
  return Status::Ok();
}

bool Signature::MatchesAt(ByteSpan image, size_t offset) const {
  if (offset > image.size() || image.size() - offset < pattern.size()) {
    return false;
  }
  if (mask.empty()) {
    return std::equal(pattern.begin(), pattern.end(), image.begin() + offset);
  }
  for (size_t i = 0; i < pattern.size(); ++i) {
    if ((image[offset + i] & mask[i]) != (pattern[i] & mask[i])) {
      return false;
    }
  }
  return true;
}

namespace {

SignatureMatch MakeMatch(ByteSpan image, const Signature& signature,
                         size_t offset) {
  SignatureMatch match;
  match.signature_name = signature.name;
  match.offset = offset;
  const size_t start = offset - std::min<size_t>(offset, 4);
  const size_t end = std::min(image.size(), start + kMatchContextBytes);
  match.context_offset = start;
  match.context.assign(image.begin() + start, image.begin() + end);
  return match;
}

// Matches of `signature` whose offsets lie in [begin, end).
std::vector<SignatureMatch> ScanRange(ByteSpan image,
                                      const Signature& signature,
                                      size_t begin, size_t end) {
  std::vector<SignatureMatch> matches;
  if (image.size() < signature.pattern.size()) {
    return matches;
  }
  const size_t last = image.size() - signature.pattern.size();
  end = std::min(end, last + 1);
  const size_t a = signature.alignment;
  size_t offset = (begin + a - 1) / a * a;
  const uint8_t first = signature.pattern[0];
  const bool fast_first = signature.mask.empty() || signature.mask[0] == 0xFF;
  for (; offset < end; offset += a) {
    if (fast_first && image[offset] != first) {
      continue;
    }
    if (signature.MatchesAt(image, offset)) {
      matches.push_back(MakeMatch(image, signature, offset));
    }
  }
  return matches;
}

Status ValidateScan(ByteSpan image, const std::vector<Signature>& signatures) {
  if (image.empty()) {
    return MakeError(ErrorCode::kEmptyImage, "firmware image is empty");
  }
  for (const Signature& signature : signatures) {
    if (auto status = signature.Validate(); !status.ok()) {
      return status;
    }
  }
  return Status::Ok();
}

}  // namespace

Result<std::vector<SignatureMatch>> ScanSignatures(
    ByteSpan image, const std::vector<Signature>& signatures) {
  if (auto status = ValidateScan(image, signatures); !status.ok()) {
    return status.error();
  }
  std::vector<SignatureMatch> matches;
  for (const Signature& signature : signatures) {
    auto found = ScanRange(image, signature, 0, image.size());
    matches.insert(matches.end(), std::make_move_iterator(found.begin()),
                   std::make_move_iterator(found.end()));
  }
  return matches;
}

Result<std::vector<SignatureMatch>> ScanSignaturesParallel(
    ByteSpan image, const std::vector<Signature>& signatures,
    unsigned threads) {
  if (auto status = ValidateScan(image, signatures); !status.ok()) {
    return status.error();
  }
  threads = std::max(1u, threads);
  const size_t chunk = (image.size() + threads - 1) / threads;

  std::vector<SignatureMatch> matches;
  for (const Signature& signature : signatures) {
    // Each task owns match offsets in [begin, end) and may read up to
    // pattern.size() - 1 bytes past `end`.
    std::vector<std::future<std::vector<SignatureMatch>>> tasks;
    for (size_t begin = 0; begin < image.size(); begin += chunk) {
      const size_t end = std::min(image.size(), begin + chunk);
      tasks.push_back(std::async(std::launch::async, [&, begin, end] {
        return ScanRange(image, signature, begin, end);
      }));
    }
    for (auto& task : tasks) {
      auto found = task.get();
      matches.insert(matches.end(), std::make_move_iterator(found.begin()),
                     std::make_move_iterator(found.end()));
    }
  }
  return matches;
}

double ExpectedRandomMatches(uint64_t image_len, uint32_t sig_len,
                             uint32_t alignment) {
  if (sig_len == 0 || alignment == 0 || image_len < sig_len) {
    return 0.0;
  }
  const uint64_t positions = (image_len - sig_len) / alignment + 1;
  return static_cast<double>(positions) * std::pow(256.0, -double(sig_len));
}

std::vector<Signature> BuiltinSignatures() {
  return {
      Signature{"scanTaskRxHeaderDone-movw", {0x4F, 0xF4, 0xCA, 0x00}, {}, 2},
  };
}

namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

Result<uint32_t> ParseAlignment(std::string_view text, uint64_t line_no) {
  uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
    return MakeError(ErrorCode::kBadSignature,
                     "line " + std::to_string(line_no) + ": bad alignment '" +
                         std::string(text) + "'");
  }
  return value;
}

}  // namespace

Result<std::vector<Signature>> ParseSignatureList(std::istream& in) {
  std::vector<Signature> signatures;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') {
      continue;
    }
    auto fields = SplitTabs(trimmed);
    if (fields.size() < 2 || fields.size() > 4) {
      return MakeError(ErrorCode::kBadSignature,
                       "line " + std::to_string(line_no) +
                           ": expected name<TAB>pattern[<TAB>mask][<TAB>"
                           "alignment]");
    }
    Signature signature;
    signature.name = std::string(Trim(fields[0]));
    auto pattern = FromHex(fields[1]);
    if (!pattern.ok()) {
      return MakeError(ErrorCode::kBadSignature,
                       "line " + std::to_string(line_no) + ": pattern: " +
                           pattern.error().message);
    }
    signature.pattern = std::move(*pattern);

    std::string_view mask_text;
    std::string_view alignment_text;
    if (fields.size() == 4) {
      mask_text = Trim(fields[2]);
      alignment_text = Trim(fields[3]);
    } else if (fields.size() == 3) {
      const std::string_view third = Trim(fields[2]);
      auto as_hex = FromHex(third);
      if (as_hex.ok() && as_hex->size() == signature.pattern.size() &&
          !signature.pattern.empty()) {
        mask_text = third;
      } else {
        alignment_text = third;
      }
    }
    if (!mask_text.empty()) {
      auto mask = FromHex(mask_text);
      if (!mask.ok()) {
        return MakeError(ErrorCode::kBadSignature,
                         "line " + std::to_string(line_no) + ": mask: " +
                             mask.error().message);
      }
      signature.mask = std::move(*mask);
    }
    if (!alignment_text.empty()) {
      auto alignment = ParseAlignment(alignment_text, line_no);
      if (!alignment.ok()) return alignment.error();
      signature.alignment = *alignment;
    }
    if (auto status = signature.Validate(); !status.ok()) {
      Error error = status.error();
      error.message = "line " + std::to_string(line_no) + ": " + error.message;
      return error;
    }
    signatures.push_back(std::move(signature));
  }
  return signatures;
}

std::string PatchDescriptor::ToString() const {
  char address_text[9];
  std::snprintf(address_text, sizeof(address_text), "%08X", address);
  std::ostringstream out;
  out << address_text << ' ' << ToHex(bytes) << ' ' << comment;
  return out.str();
}

PatchDescriptor MakeFlagPatch(uint32_t address) {
  PatchDescriptor patch;
  patch.address = address;
  patch.bytes = {0x01};
  patch.comment = "bEnhancedAdvReport = 1";
  if (address == 0) {
    patch.comment += " (address 0: verify the flag location)";
  }
  return patch;
}

}  // namespace advscope
