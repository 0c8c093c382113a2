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

// End-to-end acceptance checks. Each criterion prints a single PASS/FAIL line
// with the measured quantity; the process exits nonzero if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "advscope/adv_analytics.h"
#include "advscope/capture_io.h"
#include "advscope/fw_sigscan.h"
#include "advscope/hci_codec.h"
#include "advscope/render.h"
#include "test_util.h"

namespace advscope {
namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome SamplePacketFidelity() {
  const Bytes packet = testing::SamplePacket();
  if (packet.size() != 32) return {false, "reconstructed packet is not 32 bytes"};
  auto hci = ParseHciEvent(packet);
  if (!hci.ok()) return {false, hci.error().ToString()};
  auto event = ParseLeAdvReport(*hci, DecodeMode::kEnhanced);
  if (!event.ok()) return {false, event.error().ToString()};
  if (event->reports.size() != 1) return {false, "expected one report"};
  const AdvReport& r = event->reports[0];
  const bool ok = r.address.ToString() == "CA:FE:BA:BE:13:37" &&
                  r.address_type == AddressType::kRandom &&
                  r.event_type.pdu_type == PduType::kAdvInd &&
                  r.event_type.ble_channel() == std::optional<int>(37) &&
                  !r.event_type.antenna && r.event_type.scan_mode == 0 &&
                  r.rssi_dbm == -56;
  return {ok, r.address.ToString() + " " +
                  std::string(AddressTypeName(r.address_type)) + " " +
                  PduShortName(r.event_type.pdu_type) + " " +
                  ChannelLabel(r.event_type) + " " +
                  std::to_string(r.rssi_dbm) + " dBm"};
}

Outcome EventTypeOracle() {
  int mismatches = 0;
  for (int b = 0; b < 256; ++b) {
    const auto got = DecodeEventType(static_cast<uint8_t>(b), DecodeMode::kEnhanced);
    const auto want = testing::OracleDecode(b);
    if (got.channel_index != want.channel_index || got.antenna != want.antenna ||
        got.scan_mode != want.scan_mode ||
        static_cast<int>(got.pdu_type) != want.pdu) {
      ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + "/256 mismatches"};
}

Outcome StandardModeChannel() {
  int not_37 = 0;
  for (int b = 0; b < 256; ++b) {
    const auto type = DecodeEventType(static_cast<uint8_t>(b), DecodeMode::kStandard);
    if (type.ble_channel() != std::optional<int>(37) ||
        ChannelLabel(type) != "Channel 37") {
      ++not_37;
    }
  }
  return {not_37 == 0, std::to_string(256 - not_37) + "/256 rendered Channel 37"};
}

Outcome RoundTrips() {
  std::mt19937_64 rng(0xAD5);
  int event_failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto mode = i % 2 ? DecodeMode::kEnhanced : DecodeMode::kStandard;
    const AdvReportEvent event = testing::RandomAdvReportEvent(rng, mode);
    auto wire = SerializeAdvReportEvent(event);
    if (!wire.ok()) {
      ++event_failures;
      continue;
    }
    auto hci = ParseHciEvent(*wire);
    if (!hci.ok()) {
      ++event_failures;
      continue;
    }
    auto back = ParseLeAdvReport(*hci, mode);
    if (!back.ok() || back->reports != event.reports) ++event_failures;
  }
  int capture_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto records = testing::RandomCaptureRecords(rng, 1 + rng() % 64);
    std::ostringstream out;
    if (!WriteBtsnoop(records, out).ok()) {
      ++capture_failures;
      continue;
    }
    std::istringstream in(out.str());
    auto read = ReadBtsnoop(in, ReadOptions{.strict = true});
    if (!read.ok() || read->records != records) ++capture_failures;
  }
  return {event_failures == 0 && capture_failures == 0,
          std::to_string(10000 - event_failures) + "/10000 events, " +
              std::to_string(1000 - capture_failures) + "/1000 captures"};
}

Outcome SignatureScanner() {
  const Bytes pattern = {0x4F, 0xF4, 0xCA, 0x00};
  const Signature sig{"movw", pattern, {}, 2};
  std::mt19937_64 rng(0x5CA7);
  int missed = 0;
  int spurious = 0;
  int brute_mismatch = 0;
  for (int image_index = 0; image_index < 100; ++image_index) {
    Bytes image(65536);
    for (auto& b : image) b = static_cast<uint8_t>(rng());
    std::set<uint64_t> planted;
    while (planted.size() < 3) {
      const uint64_t off = (rng() % (image.size() - pattern.size() + 1)) & ~uint64_t{1};
      bool overlaps = false;
      for (uint64_t p : planted) overlaps |= off < p + 4 && p < off + 4;
      if (!overlaps) planted.insert(off);
    }
    for (uint64_t off : planted) {
      std::copy(pattern.begin(), pattern.end(),
                image.begin() + static_cast<std::ptrdiff_t>(off));
    }
    auto matches = ScanSignatures(image, {sig});
    if (!matches.ok()) return {false, matches.error().ToString()};
    std::vector<uint64_t> found;
    for (const auto& m : *matches) found.push_back(m.offset);
    if (found != testing::BruteForceOffsets(image, sig)) ++brute_mismatch;
    for (uint64_t off : planted) {
      if (std::find(found.begin(), found.end(), off) == found.end()) ++missed;
    }
    for (uint64_t off : found) spurious += planted.count(off) == 0;
  }
  char expected[64];
  std::snprintf(expected, sizeof(expected), "%.3g",
                100 * ExpectedRandomMatches(65536, 4, 2));
  return {missed == 0 && spurious <= 1 && brute_mismatch == 0,
          std::to_string(300 - missed) + "/300 plants found, " +
              std::to_string(spurious) + " spurious (expected " + expected +
              "), " + std::to_string(brute_mismatch) + " brute-force mismatches"};
}

Outcome InterferenceBlacklisting() {
  constexpr double kTrueDistance = 2.0;
  int detected = 0;
  int aware_better = 0;
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    ScenarioSpec spec;
    spec.seed = seed;
    spec.true_distance_m = kTrueDistance;
    spec.path_loss = {.reference_rssi_at_1m = -56.0, .path_loss_exponent = 2.0};
    spec.noise_sigma_db = 2.0;
    spec.reports_per_channel = 100;
    spec.per_channel_offset_db = {{38, -20.0}};
    SessionStats stats;
    for (const TimedReport& tr : SynthTrace(spec)) {
      stats.IngestReport(tr.report, tr.timestamp_us);
    }
    const auto interference = DetectInterference(stats, BlacklistParams{});
    if (interference.blacklisted == std::set<int>{38}) ++detected;

    double aware_err = 0;
    double naive_err = 0;
    for (const auto& [address, device] : stats.devices()) {
      auto aware = ChannelAwareEstimate(stats, address, spec.path_loss,
                                        interference.blacklisted);
      auto naive = ChannelAwareEstimate(stats, address, spec.path_loss, {});
      if (!aware.ok() || !naive.ok()) return {false, "estimate failed"};
      aware_err += std::abs(aware->distance_m - kTrueDistance);
      naive_err += std::abs(naive->distance_m - kTrueDistance);
    }
    if (aware_err < naive_err) ++aware_better;
  }
  return {detected >= 95 && aware_better >= 95,
          "{38} in " + std::to_string(detected) + "/100 runs, aware < naive in " +
              std::to_string(aware_better) + "/100 runs"};
}

Outcome DistanceModel() {
  const PathLossParams params{.reference_rssi_at_1m = -56.0,
                              .path_loss_exponent = 2.0};
  const double at_ref = EstimateDistance(-56.0, params);
  const double decade = EstimateDistance(-76.0, params);
  const double rel = std::abs(decade - 10.0) / 10.0;
  char detail[96];
  std::snprintf(detail, sizeof(detail), "d(ref)=%.17g, d(ref-20)=%.17g (rel err %.2e)",
                at_ref, decade, rel);
  return {at_ref == 1.0 && rel <= 1e-9, detail};
}

Outcome WifiOverlapCheck() {
  // Centres by hand: BLE 37/38/39 at 2402/2426/2480 MHz, Wi-Fi 1/6/11 at
  // 2412/2437/2462 MHz, overlap when within 11 MHz of the Wi-Fi centre.
  const std::set<int> want1 = {37};   // |2402-2412| = 10
  const std::set<int> want6 = {38};   // |2426-2437| = 11
  const std::set<int> want11 = {};    // nearest is 39 at 18 MHz
  auto got1 = WifiOverlap(1);
  auto got6 = WifiOverlap(6);
  auto got11 = WifiOverlap(11);
  const bool ok = got1.ok() && got6.ok() && got11.ok() && *got1 == want1 &&
                  *got6 == want6 && *got11 == want11;
  auto show = [](const Result<std::set<int>>& s) {
    if (!s.ok()) return std::string("error");
    std::string out = "{";
    for (int c : *s) out += (out.size() > 1 ? "," : "") + std::to_string(c);
    return out + "}";
  };
  return {ok, "1->" + show(got1) + " 6->" + show(got6) + " 11->" + show(got11)};
}

}  // namespace
}  // namespace advscope

int main() {
  using advscope::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"sample_packet_fidelity", advscope::SamplePacketFidelity},
      {"event_type_oracle", advscope::EventTypeOracle},
      {"standard_mode_channel", advscope::StandardModeChannel},
      {"round_trips", advscope::RoundTrips},
      {"signature_scanner", advscope::SignatureScanner},
      {"interference_blacklisting", advscope::InterferenceBlacklisting},
      {"distance_model", advscope::DistanceModel},
      {"wifi_overlap", advscope::WifiOverlapCheck},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const Outcome outcome = check();
    failures += !outcome.pass;
    std::printf("%s %s: %s\n", outcome.pass ? "PASS" : "FAIL", name.c_str(),
                outcome.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
